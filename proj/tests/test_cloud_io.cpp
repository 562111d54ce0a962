#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "radarloc/cloud_io.hpp"
#include "radarloc/error.hpp"

using namespace radarloc;

TEST_CASE("cloud CSV round trip keeps at least 6 significant digits") {
  std::mt19937_64 rng(2);
  const PointCloud2 c(oracle::random_points(rng, 200, -1000, 1000));
  std::ostringstream out;
  write_cloud_csv(out, c);
  const PointCloud2 back = parse_cloud_csv(out.str());
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(std::abs(back[i].x - c[i].x) <= 1e-6 * std::max(1.0, std::abs(c[i].x)));
    CHECK(std::abs(back[i].y - c[i].y) <= 1e-6 * std::max(1.0, std::abs(c[i].y)));
  }
}

TEST_CASE("cloud CSV parse errors name the line") {
  CHECK(parse_cloud_csv("x,y\n").empty());
  CHECK(parse_cloud_csv("x,y\r\n1,2\r\n").size() == 1);
  try {
    parse_cloud_csv("x,y\n1,2\n3,abc\n");
    FAIL("expected a parse error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_cloud_csv("a,b\n1,2\n"), DataError);
  CHECK_THROWS_AS(parse_cloud_csv("x,y\n1\n"), DataError);
  CHECK_THROWS_AS(parse_cloud_csv("x,y\n1,2,3\n"), DataError);
  CHECK_THROWS_AS(parse_cloud_csv("x,y\nnan,2\n"), DataError);
}

TEST_CASE("PGM round trip with resolution comment") {
  RangeImage img(8, 0.5);
  img.set(1, 2, 255);
  img.set(7, 7, 17);
  std::ostringstream out;
  write_pgm(out, img);
  const PgmData d = parse_pgm(out.str());
  CHECK(d.width == 8);
  CHECK(d.height == 8);
  REQUIRE(d.resolution.has_value());
  CHECK(*d.resolution == 0.5);
  CHECK(d.pixels == img.pixels());
}

TEST_CASE("PGM header may carry arbitrary comments") {
  std::string bytes = "P5 # a comment\n2 # w\n2\n255\n";
  bytes += std::string("\x01\x02\x03\x04", 4);
  const PgmData d = parse_pgm(bytes);
  CHECK(d.pixels == std::vector<std::uint8_t>{1, 2, 3, 4});
  CHECK_FALSE(d.resolution.has_value());
}

TEST_CASE("malformed PGM reports a byte offset") {
  auto offset_in = [](const std::string& bytes) {
    try {
      parse_pgm(bytes);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(offset_in("P6\n2 2\n255\n....").find("byte 0") != std::string::npos);
  CHECK(offset_in("P5\n2 x\n255\n").find("byte 5") != std::string::npos);
  const std::string truncated = offset_in("P5\n2 2\n255\nab");
  CHECK(truncated.find("truncated") != std::string::npos);
  CHECK(truncated.find("byte 13") != std::string::npos);
  CHECK(offset_in("P5\n2 2\n300\n....").find("maxval") != std::string::npos);
}
