#include <doctest.h>

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "apsense/common/csv.hpp"
#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"
#include "apsense/common/hash.hpp"

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("apsense_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("common") {

TEST_CASE("csv splits quoted fields and escapes") {
  using apsense::csv::split_line;
  CHECK(split_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_line("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
  CHECK(split_line("\"he said \"\"hi\"\"\",x") ==
        std::vector<std::string>{"he said \"hi\"", "x"});
  CHECK(split_line("") == std::vector<std::string>{""});
  CHECK(split_line("a,") == std::vector<std::string>{"a", ""});
}

TEST_CASE("csv join quotes only when needed and round-trips") {
  using namespace apsense::csv;
  const std::vector<std::string> cells = {"plain", "with,comma", "with\"quote", ""};
  const std::string line = join_row(cells);
  CHECK(split_line(line) == cells);
  CHECK(join_row({"a", "b"}) == "a,b");
}

TEST_CASE("csv parse keeps header separate and finds columns case-insensitively") {
  const auto table = apsense::csv::parse("Lat,LON,name\n1,2,x\n3,4,y\n");
  CHECK(table.header.size() == 3);
  CHECK(table.rows.size() == 2);
  CHECK(table.column("lat") == 0);
  CHECK(table.column("Lon") == 1);
  CHECK(table.column("missing") == -1);
  CHECK(table.rows[1][0] == "3");
}

TEST_CASE("format_double round-trips any double exactly") {
  using apsense::csv::format_double;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> mag(-40.0, 40.0);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = mant(rng) * std::pow(10.0, mag(rng));
    const std::string s = format_double(x);
    double back = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(r.ec == std::errc{});
    CHECK(back == x);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.5) == "1.5");
  CHECK(format_double(-2.25) == "-2.25");
}

TEST_CASE("fnv1a64 matches published reference values") {
  // Reference digests of the 64-bit FNV-1a specification.
  CHECK(apsense::fnv1a64("") == 14695981039346656037ull);
  CHECK(apsense::fnv1a64("a") == 12638187200555641996ull);
  CHECK(apsense::fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(apsense::fnv1a64_hex("foobar") == "85944171f73967e8");
  CHECK(apsense::fnv1a64_hex("").size() == 16);
}

TEST_CASE("atomic_write leaves no temp files and round-trips bytes") {
  const auto dir = temp_dir("fsio");
  const auto path = dir / "data.bin";
  const std::vector<std::uint8_t> payload = {0, 1, 255, 42, 7};
  apsense::fs::atomic_write(path, payload);
  CHECK(apsense::fs::read_bytes(path) == payload);

  apsense::fs::atomic_write(path, std::string("replaced"));
  CHECK(apsense::fs::read_text(path) == "replaced");

  int entries = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);  // no stray temp file
  std::filesystem::remove_all(dir);
}

TEST_CASE("read_bytes on a missing file is an io error") {
  CHECK_THROWS_AS(apsense::fs::read_bytes("/nonexistent/nope.bin"), apsense::Error);
  try {
    apsense::fs::read_bytes("/nonexistent/nope.bin");
  } catch (const apsense::Error& e) {
    CHECK(e.kind() == apsense::ErrorKind::io);
  }
}

}  // TEST_SUITE
