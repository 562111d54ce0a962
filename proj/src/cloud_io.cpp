#include "radarloc/cloud_io.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "radarloc/error.hpp"

namespace radarloc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

PointCloud2 parse_cloud_csv(std::string_view text, const std::string& frame) {
  std::vector<Point2> pts;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "x,y") {
        throw DataError("line " + std::to_string(line_no) + ": expected header 'x,y'");
      }
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    Point2 p;
    if (comma == std::string_view::npos || !parse_double(line.substr(0, comma), p.x) ||
        !parse_double(line.substr(comma + 1), p.y) || !std::isfinite(p.x) ||
        !std::isfinite(p.y)) {
      throw DataError("line " + std::to_string(line_no) + ": malformed point row '" +
                      std::string(line) + "'");
    }
    pts.push_back(p);
  }
  if (!saw_header) throw DataError("line 1: missing header 'x,y'");
  return PointCloud2(std::move(pts), frame);
}

PointCloud2 read_cloud_csv(const std::filesystem::path& path, const std::string& frame) {
  try {
    return parse_cloud_csv(read_file(path), frame);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_cloud_csv(std::ostream& out, const PointCloud2& c) {
  out << "x,y\n";
  for (const Point2& p : c) out << format_number(p.x) << ',' << format_number(p.y) << '\n';
}

void write_cloud_csv(const std::filesystem::path& path, const PointCloud2& c) {
  auto out = open_output(path);
  write_cloud_csv(out, c);
}

namespace {

// Cursor over the PGM header; tracks the byte offset for error messages and
// picks up the resolution comment.
struct PgmCursor {
  std::string_view bytes;
  std::size_t pos = 0;
  std::optional<double> resolution;

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("malformed PGM at byte " + std::to_string(pos) + ": " + what);
  }

  void skip_space_and_comments() {
    while (pos < bytes.size()) {
      const char ch = bytes[pos];
      if (ch == '#') {
        const auto eol = bytes.find('\n', pos);
        const std::string_view comment =
            trim(bytes.substr(pos + 1, eol == std::string_view::npos ? bytes.npos : eol - pos - 1));
        constexpr std::string_view key = "resolution_m_per_px=";
        if (comment.substr(0, key.size()) == key) {
          double r = 0.0;
          if (!parse_double(comment.substr(key.size()), r)) fail("bad resolution comment");
          resolution = r;
        }
        pos = eol == std::string_view::npos ? bytes.size() : eol + 1;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos;
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000) fail(std::string(what) + " too large");
      ++pos;
    }
    if (pos == start) fail(std::string("expected ") + what);
    return v;
  }
};

}  // namespace

PgmData parse_pgm(std::string_view bytes) {
  PgmCursor cur{bytes, 0, std::nullopt};
  if (bytes.size() < 2 || bytes.substr(0, 2) != "P5") cur.fail("expected magic 'P5'");
  cur.pos = 2;
  PgmData out;
  out.width = static_cast<int>(cur.read_uint("width"));
  out.height = static_cast<int>(cur.read_uint("height"));
  const long maxval = cur.read_uint("maxval");
  if (out.width <= 0 || out.height <= 0) cur.fail("image dimensions must be positive");
  if (maxval <= 0 || maxval > 255) cur.fail("maxval must be in [1, 255]");
  if (cur.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[cur.pos]))) {
    cur.fail("expected single whitespace after maxval");
  }
  ++cur.pos;
  const std::size_t n = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
  if (bytes.size() - cur.pos < n) {
    cur.pos = bytes.size();
    cur.fail("truncated pixel data, expected " + std::to_string(n) + " bytes");
  }
  out.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(cur.pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(cur.pos + n));
  out.resolution = cur.resolution;
  return out;
}

void write_pgm(std::ostream& out, const RangeImage& img) {
  out << "P5\n# resolution_m_per_px=" << format_number(img.resolution()) << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()),
            static_cast<std::streamsize>(img.pixels().size()));
}

void write_pgm(const std::filesystem::path& path, const RangeImage& img) {
  auto out = open_output(path, std::ios::binary);
  write_pgm(out, img);
}

RangeImage read_range_image(const std::filesystem::path& path, std::optional<double> resolution) {
  PgmData data;
  try {
    data = parse_pgm(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  const double r = resolution.value_or(data.resolution.value_or(kDefaultResolution));
  if (data.width != data.height) {
    throw DataError(path.string() + ": range images must be square");
  }
  return RangeImage(data.width, data.height, r, std::move(data.pixels));
}

}  // namespace radarloc
