// dephasing_lab: pure-dephasing qubit-environment toolbox.
//
// Commands: simulate, analyze, zurek, prep-error, optimize, sweep.
// A JSON config file drives everything; common parameters also have
// command-line shortcuts that are merged into the config document.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dephasing/cli.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw dephasing::ConfigError("cannot read config file \"" + path + "\"");
  }
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

json load_base_config(const std::string& config_path) {
  if (config_path.empty()) {
    return json::object();
  }
  json doc;
  try {
    doc = json::parse(read_file(config_path));
  } catch (const json::parse_error& e) {
    throw dephasing::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw dephasing::ConfigError("config must be a JSON object");
  }
  return doc;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"pure-dephasing simulator: decoherence-free state analysis, "
               "Zurek spin-bath dynamics, Bloch min-max optimization"};
  app.require_subcommand(0, 1);
  app.fallthrough(); // global flags may follow the subcommand

  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "output path (default stdout)");
  app.add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed recorded in output");

  auto* simulate = app.add_subcommand("simulate", "trajectory of r(t), echo, purity");
  auto* analyze = app.add_subcommand("analyze", "decoherence-free subspace report");

  auto* zurek = app.add_subcommand("zurek", "exact vs perturbative spin-bath echo");
  std::vector<double> couplings;
  double lambda = 0.0;
  zurek->add_option("--couplings", couplings, "spin couplings g_k")->delimiter(',');
  zurek->add_option("--lambda", lambda, "self-evolution strength");

  double horizon = 0.0;
  int samples = 0;
  for (auto* sub : {simulate, zurek}) {
    sub->add_option("--horizon", horizon, "time horizon");
    sub->add_option("--samples", samples, "number of time samples");
  }

  auto* prep = app.add_subcommand("prep-error", "imperfect-preparation averages");
  double epsilon = 0.0;
  int spins = 0;
  prep->add_option("--epsilon", epsilon, "per-spin error bound on |beta|^2")->required();
  prep->add_option("--n", spins, "number of bath spins");

  auto* optimize = app.add_subcommand("optimize", "min-max Bloch initial state");
  double alpha = 0.0;
  optimize->add_option("--alpha", alpha, "field half-angle in rad")->required();

  auto* sweep = app.add_subcommand("sweep", "optimize over an alpha grid");
  double alpha_min = 0.0, alpha_max = 0.0;
  int points = 0;
  sweep->add_option("--alpha-min", alpha_min, "grid start (rad)");
  sweep->add_option("--alpha-max", alpha_max, "grid end (rad)");
  sweep->add_option("--points", points, "grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; anything else is a config error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    json doc = load_base_config(config_path);

    if (simulate->parsed()) doc["command"] = "simulate";
    if (analyze->parsed()) doc["command"] = "analyze";
    if (zurek->parsed()) {
      doc["command"] = "zurek";
      if (!couplings.empty()) {
        doc["zurek"]["couplings"] = couplings;
      }
      if (zurek->count("--lambda") > 0) {
        doc["zurek"]["lambda"] = lambda;
      }
    }
    if (prep->parsed()) {
      doc["command"] = "prep-error";
      doc["epsilon"] = epsilon;
      if (spins > 0) {
        doc["spins"] = spins;
      }
    }
    if (optimize->parsed()) {
      doc["command"] = "optimize";
      doc["alpha"] = alpha;
    }
    if (sweep->parsed()) {
      doc["command"] = "sweep";
      if (sweep->count("--alpha-min") > 0) doc["alpha_grid"]["min"] = alpha_min;
      if (sweep->count("--alpha-max") > 0) doc["alpha_grid"]["max"] = alpha_max;
      if (sweep->count("--points") > 0) doc["alpha_grid"]["points"] = points;
      if (!doc.contains("alpha_grid")) {
        doc["alpha_grid"] = {{"min", 0.05}, {"max", 1.52}, {"points", 25}};
      } else {
        if (!doc["alpha_grid"].contains("min")) doc["alpha_grid"]["min"] = 0.05;
        if (!doc["alpha_grid"].contains("max")) doc["alpha_grid"]["max"] = 1.52;
        if (!doc["alpha_grid"].contains("points")) doc["alpha_grid"]["points"] = 25;
      }
    }
    if (horizon > 0.0) doc["time"]["horizon"] = horizon;
    if (samples > 0) doc["time"]["samples"] = samples;
    if (!out_path.empty()) doc["output"]["path"] = out_path;
    if (!format.empty()) doc["output"]["format"] = format;
    if (seed_opt->count() > 0) doc["seed"] = seed;

    if (!doc.contains("command")) {
      throw dephasing::ConfigError("no command given (subcommand or config \"command\")");
    }

    const dephasing::cli::RunConfig cfg = dephasing::cli::parse_config(doc.dump());
    dephasing::cli::run(cfg);
    return 0;
  } catch (const dephasing::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dephasing::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const dephasing::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
