#include <doctest.h>

#include <cstdio>

#include "carbonshift/config.hpp"
#include "carbonshift/csv.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/timeutil.hpp"

using namespace carbonshift;

TEST_CASE("iso8601 round trip") {
  CHECK(parse_time8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_time8601("2023-06-01T00:00:00Z") == 1685577600);
  CHECK(format_time8601(1685577600) == "2023-06-01T00:00:00Z");
  for (int64_t t : {0ll, 1685577600ll, 949363200ll, 4102444799ll}) {
    CHECK(parse_time8601(format_time8601(t)) == t);
  }
  CHECK_THROWS_AS(parse_time8601("2023-06-01 00:00:00Z"), input_error);
  CHECK_THROWS_AS(parse_time8601("2023-06-01T00:00:00"), input_error);
  CHECK_THROWS_AS(parse_time8601("2023-13-01T00:00:00Z"), input_error);
}

TEST_CASE("utc calendar helpers") {
  int64_t t = parse_time8601("2023-06-15T17:30:00Z");
  CHECK(hour_of_day_utc(t) == 17);
  CHECK(month_utc(t) == 6);
  CHECK(hour_of_day_utc(parse_time8601("2023-01-01T00:00:00Z")) == 0);
  CHECK(month_utc(parse_time8601("2023-12-31T23:59:59Z")) == 12);
}

TEST_CASE("config defaults and overrides") {
  Config cfg;
  CHECK(cfg.get_double("graph.snap_radius_km") == 10.0);
  CHECK(cfg.get_double("carbon.cutoff") == 0.75);
  CHECK(cfg.get("devices.era") == "y2012");
  CHECK(cfg.get_int("optimize.quantum_s") == 300);
  CHECK(cfg.get_bool("graph.create_junctions"));
  cfg.set("carbon.cutoff", "0.5");
  CHECK(cfg.get_double("carbon.cutoff") == 0.5);
  CHECK_THROWS_AS(cfg.set("no.such.key", "1"), input_error);
  CHECK_THROWS_AS(cfg.get("no.such.key"), input_error);
}

TEST_CASE("config hash tracks content") {
  Config a, b;
  CHECK(a.hash() == b.hash());
  b.set("cidt.pue", "1.2");
  CHECK(a.hash() != b.hash());
  CHECK(a.echo_header().find("config_hash=") != std::string::npos);
  CHECK(a.echo_header().find("# optimize.quantum_s=300\n") != std::string::npos);
}

TEST_CASE("config file parsing") {
  std::string path = "test_cfg_tmp.txt";
  write_text_file(path, "# comment\ncidt.pue = 1.5\n\ncarbon.estimation=nearest_neighbor\n");
  Config cfg;
  cfg.load_file(path);
  CHECK(cfg.get_double("cidt.pue") == 1.5);
  CHECK(cfg.get("carbon.estimation") == "nearest_neighbor");
  write_text_file(path, "not a kv line\n");
  Config bad;
  CHECK_THROWS_AS(bad.load_file(path), input_error);
  std::remove(path.c_str());
}

TEST_CASE("csv quoting round trip") {
  std::vector<std::string> fields = {"a,b", "plain", "with \"quote\"", "multi\nline", ""};
  std::string line = CsvWriter::join(fields);
  auto rows = CsvReader::read_string(line + "\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].fields == fields);
}

TEST_CASE("csv skips comments and blank lines") {
  auto rows = CsvReader::read_string("# header\n\na,b\n# mid\nc,d\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].fields[0] == "a");
  CHECK(rows[1].line_no == 5);
}
