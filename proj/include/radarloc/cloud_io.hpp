#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radarloc/geometry.hpp"
#include "radarloc/scan_repr.hpp"

namespace radarloc {

/// Shortest round-trip rendering, shared by every text writer so outputs
/// are byte-reproducible and re-read exactly.
std::string format_number(double v);

/// CSV point cloud: header `x,y`, one point per line, metres.
PointCloud2 parse_cloud_csv(std::string_view text, const std::string& frame = "sensor");
PointCloud2 read_cloud_csv(const std::filesystem::path& path, const std::string& frame = "sensor");
void write_cloud_csv(std::ostream& out, const PointCloud2& c);
void write_cloud_csv(const std::filesystem::path& path, const PointCloud2& c);

/// Raw contents of a binary P5 PGM. `resolution` is present when the header
/// carried a `# resolution_m_per_px=<float>` comment.
struct PgmData {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  std::optional<double> resolution;
};

/// Throws DataError naming the byte offset of the first malformed token.
PgmData parse_pgm(std::string_view bytes);
void write_pgm(std::ostream& out, const RangeImage& img);
void write_pgm(const std::filesystem::path& path, const RangeImage& img);

/// Reads a PGM as a RangeImage. An explicit resolution overrides the header
/// comment; with neither, the default 0.25 m/px is used.
RangeImage read_range_image(const std::filesystem::path& path,
                            std::optional<double> resolution = std::nullopt);

std::string read_file(const std::filesystem::path& path);

}  // namespace radarloc
