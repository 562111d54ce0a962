#pragma once

#include <cstdint>
#include <vector>

#include "radarloc/geometry.hpp"

namespace radarloc {

/// Square, sensor-centred single-channel raster of a scan. Pixel (row, col)
/// covers a `resolution` x `resolution` metre cell; row 0 is the top (+y).
class RangeImage {
 public:
  /// Throws ConfigError unless width == height, resolution > 0 and the pixel
  /// buffer holds width * height bytes.
  RangeImage(int width, int height, double resolution, std::vector<std::uint8_t> pixels);
  /// All-zero image.
  RangeImage(int width, double resolution);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  std::uint8_t at(int row, int col) const { return pixels_[index(row, col)]; }
  void set(int row, int col, std::uint8_t v) { pixels_[index(row, col)] = v; }

  friend bool operator==(const RangeImage&, const RangeImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_;
  int height_;
  double resolution_;
  std::vector<std::uint8_t> pixels_;
};

inline constexpr int kDefaultImageWidth = 512;
inline constexpr double kDefaultResolution = 0.25;
inline constexpr int kDefaultBinarizeThreshold = 128;
inline constexpr double kDefaultMaxRange = 64.0;

/// Metric centre of pixel (row, col).
Point2 pixel_center(const RangeImage& img, int row, int col);

/// One point per pixel with intensity >= threshold, emitted in row-major order.
PointCloud2 image_to_cloud(const RangeImage& img, int threshold = kDefaultBinarizeThreshold);

/// Rasterizes a cloud; every in-bounds point saturates its pixel to 255 and
/// out-of-bounds points are dropped. Width must be even.
RangeImage cloud_to_image(const PointCloud2& c, int width = kDefaultImageWidth,
                          double resolution = kDefaultResolution);

/// Keeps the points with Euclidean norm <= max_range, in order.
PointCloud2 range_filter(const PointCloud2& c, double max_range);

}  // namespace radarloc
