#include "dephasing/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dephasing::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key \"" + item.key() + "\" in " + context);
    }
  }
}

double require_number(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ConfigError(std::string("missing or non-numeric \"") + key + "\" in " + context);
  }
  return obj[key].get<double>();
}

Complex parse_complex(const json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number()) {
    throw ConfigError("complex numbers are [re, im] pairs; bad value in " + context);
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

ComplexMatrix parse_matrix(const json& value, const std::string& context) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError(context + " must be a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(value.size());
  ComplexMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = value[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw ConfigError(context + " must be square; row " + std::to_string(r) +
                        " has the wrong length");
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      m(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                              context + "[" + std::to_string(r) + "][" +
                                  std::to_string(c) + "]");
    }
  }
  return m;
}

void check_hermitian(const ComplexMatrix& m, const std::string& context) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::Index worst_r = 0, worst_c = 0;
  double worst = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double asym = std::abs(m(r, c) - std::conj(m(c, r)));
      if (asym > worst) {
        worst = asym;
        worst_r = r;
        worst_c = c;
      }
    }
  }
  if (worst > 1e-12 * scale) {
    throw ValidationError(context + " is not Hermitian: entry (" +
                          std::to_string(worst_r) + "," + std::to_string(worst_c) +
                          ") differs from its conjugate transpose by " + fmt(worst));
  }
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const ComplexVector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(complex_to_json(v[i]));
  }
  return arr;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Complex> parse_complex_list(const json& value, const std::string& context) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError(context + " must be a nonempty array");
  }
  std::vector<Complex> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(parse_complex(value[i], context + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Default couplings when prep-error is run without an explicit list:
// decreasing geometric sequence with ratio 1/pi, which admits no signed-sum
// cancellations, so the omega_x stay distinct.
std::vector<double> default_couplings(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  const double ratio = 1.0 / kPi;
  double value = 0.95;
  for (int k = 0; k < n; ++k) {
    g[static_cast<std::size_t>(k)] = value;
    value *= ratio;
  }
  return g;
}

} // namespace

Command command_from_string(const std::string& name) {
  if (name == "simulate") return Command::simulate;
  if (name == "analyze") return Command::analyze;
  if (name == "zurek") return Command::zurek;
  if (name == "prep-error") return Command::prep_error;
  if (name == "optimize") return Command::optimize;
  if (name == "sweep") return Command::sweep;
  throw ConfigError("unknown command \"" + name + "\"");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::simulate: return "simulate";
    case Command::analyze: return "analyze";
    case Command::zurek: return "zurek";
    case Command::prep_error: return "prep-error";
    case Command::optimize: return "optimize";
    case Command::sweep: return "sweep";
  }
  return "unknown";
}

std::string to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  check_keys(doc,
             {"command", "model", "zurek", "time", "initial_state", "qubit",
              "alpha", "alpha_grid", "epsilon", "spins", "product_state",
              "output", "seed", "tolerances", "budgets"},
             "config");

  RunConfig cfg;
  if (!doc.contains("command") || !doc["command"].is_string()) {
    throw ConfigError("config requires a \"command\" string");
  }
  cfg.command = command_from_string(doc["command"].get<std::string>());

  if (doc.contains("model")) {
    const json& m = doc["model"];
    check_keys(m, {"h_int", "h_env"}, "model");
    if (!m.contains("h_int") || !m.contains("h_env")) {
      throw ConfigError("model requires both \"h_int\" and \"h_env\"");
    }
    InlineModel inline_model;
    inline_model.h_int = parse_matrix(m["h_int"], "model.h_int");
    inline_model.h_env = parse_matrix(m["h_env"], "model.h_env");
    check_hermitian(inline_model.h_int, "model.h_int");
    check_hermitian(inline_model.h_env, "model.h_env");
    if (inline_model.h_int.rows() != inline_model.h_env.rows()) {
      throw ValidationError("model.h_int and model.h_env dimensions differ");
    }
    cfg.model = std::move(inline_model);
  }

  if (doc.contains("zurek")) {
    const json& z = doc["zurek"];
    check_keys(z, {"couplings", "lambda"}, "zurek");
    if (!z.contains("couplings") || !z["couplings"].is_array() ||
        z["couplings"].empty()) {
      throw ConfigError("zurek.couplings must be a nonempty number array");
    }
    ZurekConfig zc;
    for (const auto& g : z["couplings"]) {
      if (!g.is_number()) {
        throw ConfigError("zurek.couplings must contain only numbers");
      }
      zc.couplings.push_back(g.get<double>());
    }
    zc.lambda = z.contains("lambda") ? require_number(z, "lambda", "zurek") : 0.0;
    if (zc.n() > kMaxZurekSpins) {
      throw ConfigError("zurek supports at most 12 spins (dense diagonalization)");
    }
    min_gap(zc.couplings); // degenerate spectra rejected at parse time
    cfg.zurek = std::move(zc);
  }

  if (cfg.model && cfg.zurek) {
    throw ConfigError("config must name exactly one model source (model or zurek)");
  }
  const bool needs_model = cfg.command == Command::simulate ||
                           cfg.command == Command::analyze ||
                           cfg.command == Command::zurek;
  if (needs_model && !cfg.model && !cfg.zurek) {
    throw ConfigError("command \"" + to_string(cfg.command) +
                      "\" requires a model source (model or zurek)");
  }
  if (cfg.command == Command::zurek && !cfg.zurek) {
    throw ConfigError("command \"zurek\" requires zurek parameters");
  }

  if (doc.contains("time")) {
    const json& t = doc["time"];
    check_keys(t, {"horizon", "samples"}, "time");
    if (t.contains("horizon")) {
      cfg.horizon = require_number(t, "horizon", "time");
      if (!(cfg.horizon > 0.0)) {
        throw ConfigError("time.horizon must be positive");
      }
    }
    if (t.contains("samples")) {
      const double s = require_number(t, "samples", "time");
      cfg.samples = static_cast<int>(s);
      if (cfg.samples < 2 || static_cast<double>(cfg.samples) != s) {
        throw ConfigError("time.samples must be an integer >= 2");
      }
    }
  }

  if (doc.contains("initial_state")) {
    const std::vector<Complex> amps =
        parse_complex_list(doc["initial_state"], "initial_state");
    ComplexVector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = amps[i];
    }
    cfg.initial_state = std::move(v);
  }

  if (doc.contains("qubit")) {
    const json& q = doc["qubit"];
    check_keys(q, {"a", "b"}, "qubit");
    if (!q.contains("a") || !q.contains("b")) {
      throw ConfigError("qubit requires both \"a\" and \"b\"");
    }
    cfg.qubit_a = parse_complex(q["a"], "qubit.a");
    cfg.qubit_b = parse_complex(q["b"], "qubit.b");
    QubitAmplitudes check(cfg.qubit_a, cfg.qubit_b); // unit-norm validation
    (void)check;
  }

  if (doc.contains("alpha")) {
    cfg.alpha = require_number(doc, "alpha", "config");
  }
  if (cfg.command == Command::optimize) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < kPi / 2.0)) {
      throw ConfigError("optimize requires alpha in (0, pi/2)");
    }
  }

  if (doc.contains("alpha_grid")) {
    const json& g = doc["alpha_grid"];
    check_keys(g, {"min", "max", "points"}, "alpha_grid");
    cfg.alpha_grid.min = require_number(g, "min", "alpha_grid");
    cfg.alpha_grid.max = require_number(g, "max", "alpha_grid");
    cfg.alpha_grid.points = static_cast<int>(require_number(g, "points", "alpha_grid"));
    if (!(cfg.alpha_grid.min > 0.0 && cfg.alpha_grid.max < kPi / 2.0 &&
          cfg.alpha_grid.min < cfg.alpha_grid.max && cfg.alpha_grid.points >= 2)) {
      throw ConfigError("alpha_grid must satisfy 0 < min < max < pi/2, points >= 2");
    }
  }

  if (doc.contains("epsilon")) {
    cfg.epsilon = require_number(doc, "epsilon", "config");
  }
  if (doc.contains("spins")) {
    const double n = require_number(doc, "spins", "config");
    cfg.spins = static_cast<int>(n);
    if (cfg.spins < 1 || static_cast<double>(cfg.spins) != n) {
      throw ConfigError("spins must be a positive integer");
    }
  }

  if (doc.contains("product_state")) {
    const json& p = doc["product_state"];
    check_keys(p, {"alphas", "betas"}, "product_state");
    if (!p.contains("alphas") || !p.contains("betas")) {
      throw ConfigError("product_state requires \"alphas\" and \"betas\"");
    }
    cfg.preparation = ProductState(
        parse_complex_list(p["alphas"], "product_state.alphas"),
        parse_complex_list(p["betas"], "product_state.betas"));
  }

  if (cfg.command == Command::prep_error) {
    if (!doc.contains("epsilon")) {
      throw ConfigError("prep-error requires \"epsilon\"");
    }
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 0.5)) {
      throw ConfigError("epsilon must lie in [0, 1/2]");
    }
    if (cfg.preparation) {
      cfg.spins = cfg.preparation->n();
    } else if (cfg.spins < 1) {
      throw ConfigError("prep-error requires \"spins\" (or an explicit product_state)");
    }
    if (cfg.zurek && cfg.zurek->lambda != 0.0) {
      throw ConfigError("prep-error analysis is defined at lambda = 0");
    }
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) {
      if (!o["path"].is_string()) {
        throw ConfigError("output.path must be a string");
      }
      cfg.out_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
      if (f == "csv") {
        cfg.format = OutputFormat::csv;
      } else if (f == "json") {
        cfg.format = OutputFormat::json;
      } else {
        throw ConfigError("output.format must be \"csv\" or \"json\"");
      }
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ConfigError("seed must be a non-negative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    check_keys(t, {"cluster", "intersection", "coherence"}, "tolerances");
    if (t.contains("cluster")) {
      cfg.tolerances.cluster = require_number(t, "cluster", "tolerances");
    }
    if (t.contains("intersection")) {
      cfg.tolerances.intersection = require_number(t, "intersection", "tolerances");
    }
    if (t.contains("coherence")) {
      cfg.tolerances.coherence = require_number(t, "coherence", "tolerances");
    }
  }

  if (doc.contains("budgets")) {
    const json& b = doc["budgets"];
    check_keys(b, {"sphere_samples", "time_samples"}, "budgets");
    if (b.contains("sphere_samples")) {
      cfg.sphere_samples = static_cast<int>(require_number(b, "sphere_samples", "budgets"));
    }
    if (b.contains("time_samples")) {
      cfg.time_samples = static_cast<int>(require_number(b, "time_samples", "budgets"));
    }
  }

  return cfg;
}

nlohmann::json resolved_config(const RunConfig& cfg) {
  json out;
  out["command"] = to_string(cfg.command);
  if (cfg.model) {
    out["model"] = {{"h_int", matrix_to_json(cfg.model->h_int)},
                    {"h_env", matrix_to_json(cfg.model->h_env)}};
  }
  if (cfg.zurek) {
    out["zurek"] = {{"couplings", cfg.zurek->couplings},
                    {"lambda", cfg.zurek->lambda}};
  }
  // Unset time entries (0 = command default) are resolved at render time;
  // omit them so a resolved config stays parseable.
  json time = json::object();
  if (cfg.horizon > 0.0) {
    time["horizon"] = cfg.horizon;
  }
  if (cfg.samples > 0) {
    time["samples"] = cfg.samples;
  }
  if (!time.empty()) {
    out["time"] = std::move(time);
  }
  if (cfg.initial_state) {
    out["initial_state"] = vector_to_json(*cfg.initial_state);
  }
  out["qubit"] = {{"a", complex_to_json(cfg.qubit_a)},
                  {"b", complex_to_json(cfg.qubit_b)}};
  if (cfg.command == Command::optimize) {
    out["alpha"] = cfg.alpha;
  }
  if (cfg.command == Command::sweep) {
    out["alpha_grid"] = {{"min", cfg.alpha_grid.min},
                         {"max", cfg.alpha_grid.max},
                         {"points", cfg.alpha_grid.points}};
  }
  if (cfg.command == Command::prep_error) {
    out["epsilon"] = cfg.epsilon;
    out["spins"] = cfg.spins;
  }
  out["output"] = {{"path", cfg.out_path}, {"format", to_string(cfg.format)}};
  out["seed"] = cfg.seed;
  out["tolerances"] = {{"cluster", cfg.tolerances.cluster},
                       {"intersection", cfg.tolerances.intersection},
                       {"coherence", cfg.tolerances.coherence}};
  if (cfg.command == Command::optimize || cfg.command == Command::sweep) {
    out["budgets"] = {{"sphere_samples", cfg.sphere_samples},
                      {"time_samples", cfg.time_samples}};
  }
  return out;
}

namespace {

DephasingModel build_model(const RunConfig& cfg) {
  if (cfg.model) {
    return DephasingModel(HermitianOperator(cfg.model->h_int),
                          HermitianOperator(cfg.model->h_env));
  }
  if (cfg.zurek) {
    return build_zurek(*cfg.zurek);
  }
  throw ConfigError("no model source in config");
}

StateVector initial_state(const RunConfig& cfg, Eigen::Index dim) {
  if (cfg.initial_state) {
    if (cfg.initial_state->size() != dim) {
      throw ValidationError("initial_state dimension does not match the model");
    }
    return StateVector(*cfg.initial_state);
  }
  return StateVector::basis(dim, 0);
}

std::string csv_header(const RunConfig& cfg) {
  std::ostringstream out;
  out << "# dephasing-lab " << kVersion << "\n";
  out << "# config: " << resolved_config(cfg).dump() << "\n";
  return out.str();
}

json json_meta(const RunConfig& cfg) {
  return json{{"version", kVersion}, {"config", resolved_config(cfg)}};
}

std::vector<double> time_grid(double horizon, int samples) {
  std::vector<double> times(static_cast<std::size_t>(samples));
  const double dt = horizon / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    times[static_cast<std::size_t>(i)] = i * dt;
  }
  return times;
}

std::string render_simulate(RunConfig cfg) {
  const DephasingModel model = build_model(cfg);
  const StateVector I = initial_state(cfg, model.dim());
  if (cfg.horizon <= 0.0) {
    cfg.horizon = default_horizon(model);
  }
  if (cfg.samples == 0) {
    cfg.samples = 1000;
  }
  const QubitAmplitudes amps(cfg.qubit_a, cfg.qubit_b);
  const TrajectoryRecord rec =
      trajectory(model, I, amps, time_grid(cfg.horizon, cfg.samples));

  if (cfg.format == OutputFormat::json) {
    json out;
    out["meta"] = json_meta(cfg);
    out["times"] = rec.times;
    json r = json::array();
    for (const Complex& z : rec.r_values) {
      r.push_back(complex_to_json(z));
    }
    out["r"] = std::move(r);
    out["echo"] = rec.echo;
    out["purity"] = rec.purity;
    return out.dump(2) + "\n";
  }

  std::ostringstream out;
  out << csv_header(cfg) << "t,re_r,im_r,abs_r,echo,purity\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const Complex r = rec.r_values[i];
    out << fmt(rec.times[i]) << ',' << fmt(r.real()) << ',' << fmt(r.imag())
        << ',' << fmt(std::abs(r)) << ',' << fmt(rec.echo[i]) << ','
        << fmt(rec.purity[i]) << '\n';
  }
  return out.str();
}

std::string render_analyze(const RunConfig& cfg) {
  if (cfg.format == OutputFormat::csv) {
    throw ConfigError("analyze emits a JSON report; use format \"json\"");
  }
  const DephasingModel model = build_model(cfg);
  const DfsReport report =
      decoherence_free_states(model, cfg.tolerances.intersection);

  json out;
  out["meta"] = json_meta(cfg);
  out["exists"] = report.exists;
  out["block_dim"] = report.block_dim;
  json groups = json::array();
  for (const auto& group : report.groups) {
    json basis = json::array();
    for (const auto& v : group.basis) {
      basis.push_back(vector_to_json(v.amplitudes()));
    }
    groups.push_back(json{{"delta", group.delta}, {"basis", std::move(basis)}});
  }
  out["groups"] = std::move(groups);
  return out.dump(2) + "\n";
}

std::string render_zurek(RunConfig cfg) {
  const ZurekConfig& zc = *cfg.zurek;
  const double gap = min_gap(zc.couplings);
  if (std::abs(zc.lambda) > 0.1 * gap) {
    std::cerr << "warning: lambda = " << zc.lambda
              << " is large against min gap " << gap
              << "; perturbative columns are unreliable\n";
  }
  if (cfg.horizon <= 0.0) {
    cfg.horizon = 1e4 / gap;
  }
  if (cfg.samples == 0) {
    cfg.samples = 100000;
  }

  const DephasingModel model = build_zurek(zc);
  const StateVector I = initial_state(cfg, model.dim());
  const EchoSeries series(model, I);
  const PerturbativeEcho perturbative(zc);

  const std::vector<double> times = time_grid(cfg.horizon, cfg.samples);
  std::vector<double> exact(times.size()), approx(times.size());
  double exact_sum = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    exact[i] = std::norm(series.r(times[i]));
    approx[i] = perturbative.echo(times[i]);
    exact_sum += exact[i];
  }
  const double exact_average = exact_sum / static_cast<double>(times.size());
  const double perturbative_avg = perturbative.average();

  if (cfg.format == OutputFormat::json) {
    json out;
    out["meta"] = json_meta(cfg);
    out["times"] = times;
    out["echo_exact"] = exact;
    out["echo_perturbative"] = approx;
    out["exact_average"] = exact_average;
    out["perturbative_average"] = perturbative_avg;
    return out.dump(2) + "\n";
  }

  std::ostringstream out;
  out << csv_header(cfg);
  out << "# exact_average: " << fmt(exact_average) << "\n";
  out << "# perturbative_average: " << fmt(perturbative_avg) << "\n";
  out << "t,echo_exact,echo_perturbative\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << fmt(times[i]) << ',' << fmt(exact[i]) << ',' << fmt(approx[i]) << '\n';
  }
  return out.str();
}

std::string render_prep_error(RunConfig cfg) {
  std::vector<double> couplings =
      cfg.zurek ? cfg.zurek->couplings : default_couplings(cfg.spins);
  if (static_cast<int>(couplings.size()) != cfg.spins) {
    throw ConfigError("zurek.couplings length must equal spins");
  }
  ProductState prep = cfg.preparation.value_or(ProductState(
      std::vector<Complex>(static_cast<std::size_t>(cfg.spins),
                           std::sqrt(1.0 - cfg.epsilon)),
      std::vector<Complex>(static_cast<std::size_t>(cfg.spins),
                           std::sqrt(cfg.epsilon))));
  for (const Complex& beta : prep.betas) {
    if (std::norm(beta) > cfg.epsilon + 1e-12) {
      throw ValidationError("product_state has |beta_k|^2 above epsilon");
    }
  }

  const double gap = min_gap(couplings);
  if (cfg.horizon <= 0.0) {
    cfg.horizon = 1e4 / gap;
  }
  if (cfg.samples == 0) {
    cfg.samples = 100000;
  }

  const double bound = preparation_bound(cfg.epsilon, cfg.spins);
  const double analytic = product_average_echo(couplings, prep);
  ZurekConfig zc;
  zc.couplings = couplings;
  zc.lambda = 0.0;
  const DephasingModel model = build_zurek(zc);
  const double numeric =
      time_averaged_echo(model, product_state(prep), cfg.horizon, cfg.samples);

  if (cfg.format == OutputFormat::json) {
    json out;
    out["meta"] = json_meta(cfg);
    out["couplings"] = couplings;
    out["bound"] = bound;
    out["analytic_average"] = analytic;
    out["numeric_average"] = numeric;
    return out.dump(2) + "\n";
  }
  std::ostringstream out;
  out << csv_header(cfg) << "bound,analytic_average,numeric_average\n"
      << fmt(bound) << ',' << fmt(analytic) << ',' << fmt(numeric) << '\n';
  return out.str();
}

std::string render_optimize(const RunConfig& cfg) {
  const FieldPair fields(cfg.alpha);
  const BlochOptimum opt =
      optimize_initial_state(fields, cfg.sphere_samples, cfg.time_samples);
  const double theoretical = theoretical_rmin(cfg.alpha);

  if (cfg.format == OutputFormat::json) {
    json out;
    out["meta"] = json_meta(cfg);
    out["alpha"] = cfg.alpha;
    out["r_min"] = opt.r_min;
    out["v_star"] = {{"x", opt.v_star.x}, {"y", opt.v_star.y}, {"z", opt.v_star.z}};
    out["t_worst"] = opt.t_worst;
    out["regime"] = to_string(opt.regime);
    out["theoretical_r_min"] = theoretical;
    return out.dump(2) + "\n";
  }
  std::ostringstream out;
  out << csv_header(cfg)
      << "alpha_rad,r_min,v_x,v_y,v_z,t_worst,theoretical_r_min,regime\n"
      << fmt(cfg.alpha) << ',' << fmt(opt.r_min) << ',' << fmt(opt.v_star.x)
      << ',' << fmt(opt.v_star.y) << ',' << fmt(opt.v_star.z) << ','
      << fmt(opt.t_worst) << ',' << fmt(theoretical) << ','
      << to_string(opt.regime) << '\n';
  return out.str();
}

int sweep_threads() {
  if (const char* env = std::getenv("DEPHASING_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) {
      return n;
    }
  }
  return 0;
}

std::string render_sweep(const RunConfig& cfg) {
  std::vector<double> alphas(static_cast<std::size_t>(cfg.alpha_grid.points));
  const double step = (cfg.alpha_grid.max - cfg.alpha_grid.min) /
                      (cfg.alpha_grid.points - 1);
  for (int i = 0; i < cfg.alpha_grid.points; ++i) {
    alphas[static_cast<std::size_t>(i)] = cfg.alpha_grid.min + i * step;
  }
  SweepBudgets budgets;
  budgets.sphere_samples = cfg.sphere_samples;
  budgets.time_samples = cfg.time_samples;
  budgets.threads = sweep_threads();
  const std::vector<SweepRow> rows = alpha_sweep(alphas, budgets);

  if (cfg.format == OutputFormat::json) {
    json out;
    out["meta"] = json_meta(cfg);
    json arr = json::array();
    for (const auto& row : rows) {
      arr.push_back(json{{"alpha_rad", row.alpha},
                         {"r_min", row.r_min},
                         {"v_star", {{"x", row.v_star.x}, {"y", row.v_star.y}, {"z", row.v_star.z}}},
                         {"t_worst", row.t_worst},
                         {"theoretical_r_min", row.theoretical},
                         {"regime", to_string(row.regime)}});
    }
    out["rows"] = std::move(arr);
    return out.dump(2) + "\n";
  }

  std::ostringstream out;
  out << csv_header(cfg)
      << "alpha_rad,r_min,v_x,v_y,v_z,t_worst,theoretical_r_min,regime\n";
  for (const auto& row : rows) {
    out << fmt(row.alpha) << ',' << fmt(row.r_min) << ',' << fmt(row.v_star.x)
        << ',' << fmt(row.v_star.y) << ',' << fmt(row.v_star.z) << ','
        << fmt(row.t_worst) << ',' << fmt(row.theoretical) << ','
        << to_string(row.regime) << '\n';
  }
  return out.str();
}

} // namespace

std::string render_output(const RunConfig& config) {
  switch (config.command) {
    case Command::simulate: return render_simulate(config);
    case Command::analyze: return render_analyze(config);
    case Command::zurek: return render_zurek(config);
    case Command::prep_error: return render_prep_error(config);
    case Command::optimize: return render_optimize(config);
    case Command::sweep: return render_sweep(config);
  }
  throw ConfigError("unhandled command");
}

void run(const RunConfig& config) {
  const std::string artifact = render_output(config);
  if (config.out_path.empty() || config.out_path == "-") {
    std::cout << artifact;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) {
    throw ConfigError("cannot open output path \"" + config.out_path + "\"");
  }
  file << artifact;
}

} // namespace dephasing::cli
