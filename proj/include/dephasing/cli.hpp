#ifndef DEPHASING_CLI_HPP
#define DEPHASING_CLI_HPP

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dephasing/analyzer.hpp"
#include "dephasing/bloch.hpp"
#include "dephasing/zurek.hpp"

namespace dephasing::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { simulate, analyze, zurek, prep_error, optimize, sweep };
enum class OutputFormat { csv, json };

Command command_from_string(const std::string& name);
std::string to_string(Command command);
std::string to_string(OutputFormat format);

struct InlineModel {
  ComplexMatrix h_int;
  ComplexMatrix h_env;
};

struct AlphaGrid {
  double min = 0.05;
  double max = 1.52;
  int points = 25;
};

struct Tolerances {
  double cluster = 0.0;            // 0 = 1e-9 * spectral range
  double intersection = 1e-9;      // PQP eigenvalue threshold
  double coherence = 1e-9;         // verify_coherence tolerance
};

struct RunConfig {
  Command command = Command::simulate;
  std::optional<InlineModel> model;
  std::optional<ZurekConfig> zurek;
  double horizon = 0.0; // 0 = default (1e4 / smallest frequency gap)
  int samples = 0;      // 0 = per-command default
  std::optional<ComplexVector> initial_state;
  Complex qubit_a{1.0 / std::numbers::sqrt2, 0.0};
  Complex qubit_b{1.0 / std::numbers::sqrt2, 0.0};
  double alpha = 0.0;
  AlphaGrid alpha_grid;
  double epsilon = 0.0;
  int spins = 0;
  std::optional<ProductState> preparation;
  std::string out_path; // empty = stdout
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  int sphere_samples = 2000;
  int time_samples = 512;
};

// Parses and validates a JSON config document; unknown keys are rejected
// and defaults are filled in.
RunConfig parse_config(const std::string& text);

// The fully resolved config as JSON, embedded into every output artifact.
nlohmann::json resolved_config(const RunConfig& config);

// Renders the command's output artifact (CSV or JSON text).
std::string render_output(const RunConfig& config);

// Renders and writes to config.out_path (stdout when empty).
void run(const RunConfig& config);

} // namespace dephasing::cli

#endif
