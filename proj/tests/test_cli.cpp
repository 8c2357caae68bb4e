#include <doctest.h>

#include <nlohmann/json.hpp>

#include "dephasing/cli.hpp"
#include "test_util.hpp"

using namespace dephasing;
using namespace dephasing::cli;
using nlohmann::json;

namespace {

std::string minimal_zurek() {
  return R"({"command":"zurek","zurek":{"couplings":[0.95,0.61],"lambda":0.001}})";
}

// First "# config: ..." comment line of a CSV artifact, parsed back to JSON.
json embedded_config(const std::string& csv) {
  const std::string tag = "# config: ";
  const std::size_t pos = csv.find(tag);
  REQUIRE(pos != std::string::npos);
  const std::size_t end = csv.find('\n', pos);
  return json::parse(csv.substr(pos + tag.size(), end - pos - tag.size()));
}

} // namespace

TEST_CASE("parse_config: minimal zurek config gets defaults") {
  const RunConfig cfg = parse_config(minimal_zurek());
  CHECK(cfg.command == Command::zurek);
  REQUIRE(cfg.zurek.has_value());
  CHECK(cfg.zurek->lambda == doctest::Approx(0.001));
  CHECK(cfg.horizon == 0.0); // resolved at render time
  CHECK(cfg.samples == 0);
  CHECK(cfg.format == OutputFormat::csv);

  // The rendered artifact embeds the resolved defaults.
  RunConfig small = cfg;
  small.samples = 50; // keep the test fast; horizon still defaults
  const json conf = embedded_config(render_output(small));
  const double gap = min_gap(cfg.zurek->couplings);
  CHECK(conf["time"]["horizon"].get<double>() == doctest::Approx(1e4 / gap));
  CHECK(conf["time"]["samples"].get<int>() == 50);

  const json full = embedded_config(render_output(parse_config(
      R"({"command":"zurek","zurek":{"couplings":[0.95,0.61],"lambda":0.001},"time":{"samples":10}})")));
  CHECK(full["time"]["samples"].get<int>() == 10);
}

TEST_CASE("parse_config: non-Hermitian matrix error names the entry") {
  const std::string text = R"({"command":"analyze",
    "model":{"h_int":[[[1,0],[0,1]],[[0,1],[2,0]]],
             "h_env":[[[0,0],[0,0]],[[0,0],[0,0]]]}})";
  try {
    parse_config(text);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("h_int") != std::string::npos);
    CHECK(what.find("(0,1)") != std::string::npos);
  }
}

TEST_CASE("parse_config: inline model round-trips through resolved_config") {
  const std::string text = R"({"command":"analyze",
    "model":{"h_int":[[[1.25,0],[0.5,-0.125]],[[0.5,0.125],[2,0]]],
             "h_env":[[[0,0],[0,0.75]],[[0,-0.75],[-1,0]]]},
    "output":{"format":"json"},"seed":7})";
  const RunConfig once = parse_config(text);
  const json serialized = resolved_config(once);
  const RunConfig twice = parse_config(serialized.dump());
  CHECK(resolved_config(twice) == serialized);
  CHECK(render_output(once) == render_output(twice));
}

TEST_CASE("parse_config rejects unknown keys at every level") {
  CHECK_THROWS_AS(parse_config(R"({"command":"simulate","bogus":1})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"command":"zurek","zurek":{"couplings":[1.0],"lambda":0,"extra":2}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"command":"zurek","zurek":{"couplings":[1.0]},"time":{"dt":0.1}})"),
      ConfigError);
}

TEST_CASE("parse_config rejects malformed pieces") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"command":"teleport"})"), ConfigError);
  // Both model sources at once.
  CHECK_THROWS_AS(
      parse_config(
        R"({"command":"simulate","zurek":{"couplings":[1.0]},
            "model":{"h_int":[[[1,0]]],"h_env":[[[0,0]]]}})"),
      ConfigError);
  // Degenerate Zurek spectrum is caught at parse time.
  CHECK_THROWS_AS(
      parse_config(R"({"command":"zurek","zurek":{"couplings":[1.0,1.0]}})"),
      NumericalError);
  // Complex scalar with wrong arity.
  CHECK_THROWS_AS(
      parse_config(
        R"({"command":"simulate","zurek":{"couplings":[1.0]},"qubit":{"a":[1],"b":[0,0]}})"),
      ConfigError);
}

TEST_CASE("render_output: analyze on commuting diagonals reports full block") {
  const std::string text = R"({"command":"analyze",
    "model":{"h_int":[[[1,0],[0,0]],[[0,0],[2,0]]],
             "h_env":[[[3,0],[0,0]],[[0,0],[4,0]]]},
    "output":{"format":"json"}})";
  const json out = json::parse(render_output(parse_config(text)));
  CHECK(out["exists"].get<bool>());
  CHECK(out["block_dim"].get<int>() == 2);
  CHECK(out["groups"].size() == 2);
  CHECK(out["meta"]["version"].get<std::string>() == kVersion);

  // analyze is a JSON report; CSV is rejected.
  CHECK_THROWS_AS(render_output(parse_config(
                      R"({"command":"analyze",
      "model":{"h_int":[[[1,0],[0,0]],[[0,0],[2,0]]],
               "h_env":[[[3,0],[0,0]],[[0,0],[4,0]]]}})")),
                  ConfigError);
}

TEST_CASE("render_output: zurek at lambda = 0 keeps the echo column at 1") {
  const std::string text = R"({"command":"zurek",
    "zurek":{"couplings":[0.9,0.4],"lambda":0},
    "time":{"horizon":50,"samples":200},
    "output":{"format":"json"}})";
  const json out = json::parse(render_output(parse_config(text)));
  for (const auto& value : out["echo_exact"]) {
    CHECK(value.get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(out["exact_average"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("render_output: optimize at alpha = 0.5236 reports cos(pi/6)") {
  const std::string text = R"({"command":"optimize","alpha":0.5236,
    "budgets":{"sphere_samples":600,"time_samples":256},
    "output":{"format":"json"}})";
  const json out = json::parse(render_output(parse_config(text)));
  CHECK(out["r_min"].get<double>() == doctest::Approx(0.8660).epsilon(2e-3));
  CHECK(out["regime"].get<std::string>() == "perpendicular");
  CHECK(std::abs(out["v_star"]["y"].get<double>()) > 0.999);
}

TEST_CASE("render_output: prep-error columns satisfy bound <= analytic") {
  const std::string text = R"({"command":"prep-error","epsilon":0.01,"spins":3,
    "time":{"samples":2000}})";
  const std::string csv = render_output(parse_config(text));
  const std::size_t header = csv.find("bound,analytic_average,numeric_average");
  REQUIRE(header != std::string::npos);
  double bound = 0.0, analytic = 0.0, numeric = 0.0;
  const std::string row = csv.substr(csv.find('\n', header) + 1);
  REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf", &bound, &analytic,
                      &numeric) == 3);
  CHECK(bound == doctest::Approx(std::pow(0.99 * 0.99 + 0.01 * 0.01, 3)));
  CHECK(analytic >= bound - 1e-12);
  CHECK(std::abs(numeric - analytic) < 1e-2);
}

TEST_CASE("render_output is byte-identical for identical config and seed") {
  const std::string text = R"({"command":"simulate",
    "zurek":{"couplings":[0.9,0.4],"lambda":0.01},
    "time":{"horizon":20,"samples":500},"seed":42})";
  const std::string a = render_output(parse_config(text));
  const std::string b = render_output(parse_config(text));
  CHECK(a == b);
  CHECK(a.find("t,re_r,im_r,abs_r,echo,purity") != std::string::npos);
}
