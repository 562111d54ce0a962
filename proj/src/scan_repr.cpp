#include "radarloc/scan_repr.hpp"

#include <cmath>
#include <string>

#include "radarloc/error.hpp"

namespace radarloc {

RangeImage::RangeImage(int width, int height, double resolution,
                       std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), resolution_(resolution), pixels_(std::move(pixels)) {
  if (width <= 0 || width != height) {
    throw ConfigError("range image must be square with positive size, got " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw ConfigError("range image resolution must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ConfigError("range image pixel buffer has wrong size");
  }
}

RangeImage::RangeImage(int width, double resolution)
    : RangeImage(width, width, resolution,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(width > 0 ? width : 0) *
                                           static_cast<std::size_t>(width > 0 ? width : 0))) {}

Point2 pixel_center(const RangeImage& img, int row, int col) {
  const double r = img.resolution();
  return {(col - img.width() / 2.0 + 0.5) * r, (img.height() / 2.0 - row - 0.5) * r};
}

PointCloud2 image_to_cloud(const RangeImage& img, int threshold) {
  if (threshold < 0 || threshold > 255) {
    throw ConfigError("binarization threshold must lie in [0, 255]");
  }
  std::vector<Point2> pts;
  for (int row = 0; row < img.height(); ++row) {
    for (int col = 0; col < img.width(); ++col) {
      if (img.at(row, col) >= threshold) pts.push_back(pixel_center(img, row, col));
    }
  }
  return PointCloud2(std::move(pts), "sensor");
}

RangeImage cloud_to_image(const PointCloud2& c, int width, double resolution) {
  if (width <= 0 || width % 2 != 0) throw ConfigError("image width must be positive and even");
  RangeImage img(width, resolution);
  const double half = width / 2.0;
  for (const Point2& p : c) {
    const double col = std::floor(p.x / resolution + half);
    const double row = std::floor(half - p.y / resolution);
    if (col < 0.0 || row < 0.0 || col >= width || row >= width) continue;
    img.set(static_cast<int>(row), static_cast<int>(col), 255);
  }
  return img;
}

PointCloud2 range_filter(const PointCloud2& c, double max_range) {
  if (!(max_range > 0.0)) throw ConfigError("max_range must be positive");
  std::vector<Point2> pts;
  pts.reserve(c.size());
  for (const Point2& p : c) {
    if (norm(p) <= max_range) pts.push_back(p);
  }
  return PointCloud2(std::move(pts), c.frame());
}

}  // namespace radarloc
