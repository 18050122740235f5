#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tripol/criteria.hpp"

namespace tripol {

/// Reduced parameterizations of the three inputs. Three I values cannot pin
/// six noise parameters, so fits always run under one of these.
enum class FitModel {
  symmetric,  // (r, r') shared by all inputs
  two_group,  // (r1, r1') for a1, (r23, r23') shared by a2 and a3
  with_loss,  // symmetric plus a shared detection efficiency eta
};

std::string_view to_string(FitModel model);
FitModel parse_fit_model(std::string_view name);

struct GainPolicy {
  bool optimal = true;
  double fixed = 0.0;

  static GainPolicy optimal_gains() { return {}; }
  static GainPolicy fixed_gain(double g) { return {false, g}; }
};

struct FitTargets {
  std::array<double, 3> values{};
  std::optional<std::array<double, 3>> sigmas;  // inverse-variance weights when present
};

struct FitOptions {
  double size_tolerance = 1e-8;
  std::size_t max_evaluations = 10000;  // per start
  double convergence_rms = 0.02;
  /// Weight of the sum of r' in the first pass. Among equally good fits it
  /// selects the one with the least excess noise; a second pass without it
  /// removes any bias it introduces.
  double excess_noise_weight = 1e-2;
};

struct FitStart {
  std::vector<double> initial;
  std::vector<double> final;
  double objective = 0.0;
  std::size_t evaluations = 0;
  bool simplex_converged = false;
};

struct FitResult {
  FitModel model = FitModel::symmetric;
  GainPolicy gain_policy;
  NetworkParams params{};
  double eta = 1.0;
  std::array<double, 3> fitted_I{};
  GainVector gains;
  double residual = 0.0;  // unweighted RMS of I_model - I_target
  std::size_t evaluations = 0;
  std::size_t best_start = 0;
  bool simplex_converged = false;
  bool converged = false;  // residual <= convergence_rms
  std::vector<FitStart> starts;
};

struct ForwardModel {
  std::array<double, 3> I{};
  GainVector gains;
};

/// Closed-form I for the given inputs and efficiency under the gain policy.
ForwardModel forward_model(const NetworkParams& params, double eta, const GainPolicy& policy);

/// Derivative-free fit of the model's parameters to the target I values.
FitResult fit_parameters(const FitTargets& targets, FitModel model, const GainPolicy& policy,
                         const FitOptions& options = {});

}  // namespace tripol
