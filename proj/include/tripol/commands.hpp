#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripol/circuit.hpp"
#include "tripol/criteria.hpp"
#include "tripol/fit.hpp"
#include "tripol/mc.hpp"

namespace tripol::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumerical = 2,
  kExitFitNotConverged = 3,
};

/// 2 for NumericalError, 1 for everything else (validation, parse, I/O).
int exit_code_for(const std::exception& e);

struct GainSetting {
  bool optimal = true;
  GainVector fixed;
};

struct McSettings {
  std::size_t n = 1'000'000;
  std::uint64_t seed = 1;
  mc::StokesEval eval = mc::StokesEval::linearized;
  std::vector<double> ratios;
  bool serial = false;
};

struct SweepSettings {
  std::string param = "r_common";
  double from = 0.0;
  double to = 1.5;
  std::size_t steps = 16;
};

struct FitSettings {
  std::optional<std::array<double, 3>> targets;
  std::optional<std::array<double, 3>> sigmas;
  FitModel model = FitModel::symmetric;
};

/// Everything a command needs. The network is either a circuit (inline text
/// or file) or the GHZ preset; never both.
struct RunConfig {
  std::optional<std::string> circuit_text;
  std::optional<std::string> circuit_file;

  NetworkParams params{};
  double alpha_c = 1.0;
  double alpha_a = 0.0;
  double theta = 0.0;
  double eta = 1.0;

  GainSetting gains;
  FormMode form = FormMode::reduced;
  McSettings mc;
  SweepSettings sweep;
  FitSettings fit;
  std::optional<std::string> out;

  bool uses_preset() const { return !circuit_text && !circuit_file; }
};

/// Applies `overrides` to `file_config` as a JSON merge patch and validates
/// the result. Unknown keys are errors.
RunConfig load_run_config(const nlohmann::json& file_config,
                          const nlohmann::json& overrides = nlohmann::json::object());

/// Resolved config in the same schema load_run_config accepts.
nlohmann::json to_json(const RunConfig& config);

struct Network {
  CircuitSpec spec;
  CompiledCircuit compiled;
  bool preset = false;
};

/// Preset (with a loss element per mode when eta < 1) or the parsed circuit.
Network resolve_network(const RunConfig& config);

struct CommandOutput {
  std::string text;         // stdout or --out
  std::string diagnostics;  // stderr
  int exit_code = kExitOk;
};

CommandOutput cmd_simulate(const RunConfig& config);
CommandOutput cmd_gains(const RunConfig& config);
CommandOutput cmd_fit(const RunConfig& config);
CommandOutput cmd_mc(const RunConfig& config);
CommandOutput cmd_compile(const RunConfig& config, bool dump);

struct SweepRow {
  double param = 0.0;
  std::array<double, 3> I{};
  double sum = 0.0;
  GainVector gains;
};

struct SweepCrossing {
  double lo = 0.0;  // adjacent grid points bracketing sum == 2
  double hi = 0.0;
  double refined = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepCrossing> crossings;
};

inline constexpr double kBisectionTolerance = 1e-10;

/// Grid evaluation by covariance propagation, rows in grid order, plus every
/// bracketed crossing of I1 + I2 + I3 = 2 refined by bisection.
SweepResult run_sweep(const RunConfig& config);

std::string sweep_csv(const std::vector<SweepRow>& rows);
CommandOutput cmd_sweep(const RunConfig& config);

/// 12 significant digits, locale-independent.
std::string format_csv_number(double value);

}  // namespace tripol::cli
