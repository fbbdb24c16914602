#include <doctest.h>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "parksim/csv.hpp"
#include "parksim/network_config.hpp"

using namespace parksim;

namespace {

const std::string kFixtures = PARKSIM_FIXTURE_DIR;

const char* kGoodText = R"(# comment line
n_lots = 2
wait_time = 5
drive_time = 0 10 10 ; 10 0 6 ; 10 6 0
walk_time = 5 8
initial_probs = 0.5 0.9
)";

}  // namespace

TEST_CASE("config text parses keys, comments, and overrides") {
  ConfigFile cfg = parse_config_text("a = 1\n# noise\nb = two words\na = 3\n");
  CHECK(cfg.get_int("a") == 3);
  CHECK(cfg.get_string("b") == "two words");
  CHECK(cfg.get_string("missing", "fallback") == "fallback");
  CHECK(cfg.get_double("a", 9.0) == 3.0);
  CHECK_THROWS_AS(cfg.get_string("missing"), std::invalid_argument);
}

TEST_CASE("config matrices split rows on semicolons") {
  ConfigFile cfg = parse_config_text(kGoodText);
  auto matrix = cfg.get_matrix("drive_time");
  REQUIRE(matrix.size() == 3);
  CHECK(matrix[1][2] == 6.0);
  auto walks = cfg.get_doubles("walk_time");
  CHECK(walks == std::vector<double>{5.0, 8.0});
}

TEST_CASE("well-formed network config has no violations") {
  ConfigFile cfg = parse_config_text(kGoodText);
  CHECK(network_violations(cfg).empty());
  ParkingNetwork net = network_from_config(cfg);
  CHECK(net.n_lots == 2);
  CHECK(net.drive(1, 2) == 6.0);
  CHECK(net.prob(2) == 0.9);
}

TEST_CASE("the packaged fixture file loads cleanly") {
  ParkingNetwork net = load_network(kFixtures + "/network.cfg");
  CHECK(net.n_lots == 2);
  CHECK(net.wait_time == 5.0);
}

TEST_CASE("a zero probability names the violated model assumption") {
  ConfigFile cfg = parse_config_text(kGoodText);
  cfg.entries["initial_probs"] = "0 0.9";
  auto violations = network_violations(cfg);
  REQUIRE(!violations.empty());
  bool mentions_positive = false;
  for (const auto& v : violations) {
    if (v.find("(0,1]") != std::string::npos) mentions_positive = true;
  }
  CHECK(mentions_positive);
  CHECK_THROWS_AS(network_from_config(cfg), std::invalid_argument);
}

TEST_CASE("a misshapen drive matrix is a shape violation") {
  ConfigFile cfg = parse_config_text(kGoodText);
  cfg.entries["drive_time"] = "0 10 ; 10 0";
  auto violations = network_violations(cfg);
  REQUIRE(!violations.empty());
  bool mentions_shape = false;
  for (const auto& v : violations) {
    if (v.find("x") != std::string::npos || v.find("shape") != std::string::npos ||
        v.find("3") != std::string::npos) {
      mentions_shape = true;
    }
  }
  CHECK(mentions_shape);
}

TEST_CASE("negative times are violations") {
  ConfigFile cfg = parse_config_text(kGoodText);
  cfg.entries["walk_time"] = "-5 8";
  CHECK(!network_violations(cfg).empty());
}

TEST_CASE("an unreadable file is an error") {
  CHECK_THROWS(load_config("/nonexistent/park.cfg"));
}

TEST_CASE("fmt_double round trips through parse_double") {
  for (double x : {0.0, 1.0 / 3.0, -17.25, 1e-300, 123456789.123456789}) {
    CHECK(parse_double(fmt_double(x)) == x);
  }
  CHECK(fmt_double(0.5) == "0.5");
  CHECK_THROWS_AS(parse_double("12abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int("1.5"), std::invalid_argument);
  CHECK(parse_int("-42") == -42);
}

TEST_CASE("csv reader handles quotes, CRLF, and blank lines") {
  std::istringstream in("a,b\r\n1,\"x,y\"\n\n2,\"he said \"\"hi\"\"\"\n");
  CsvTable table = read_csv(in);
  CHECK(table.header == std::vector<std::string>{"a", "b"});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0][1] == "x,y");
  CHECK(table.rows[1][1] == "he said \"hi\"");
  CHECK(table.column("b") == 1);
  CHECK_THROWS_AS(table.column("zzz"), std::invalid_argument);
}

TEST_CASE("csv writer quotes only what needs quoting") {
  std::ostringstream out;
  std::vector<std::string> fields = {"plain", "with,comma", "with\"quote"};
  write_csv_row(out, fields);
  CHECK(out.str() == "plain,\"with,comma\",\"with\"\"quote\"\n");
}
