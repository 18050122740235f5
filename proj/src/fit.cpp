#include "tripol/fit.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <array>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "tripol/error.hpp"

namespace tripol {

namespace {

constexpr double kRMax = 2.0;
constexpr double kEtaMin = 1e-3;
constexpr std::array<double, 5> kStartFractions{0.1, 0.3, 0.5, 0.7, 0.9};
constexpr double kInitialStep = 0.15;

struct Bound {
  double lo;
  double hi;
};

struct Layout {
  std::vector<Bound> bounds;
  std::vector<std::size_t> excess_noise_slots;  // indices of r' parameters
};

Layout layout_for(FitModel model) {
  switch (model) {
    case FitModel::symmetric:
      return {{{0.0, kRMax}, {0.0, kRMax}}, {1}};
    case FitModel::two_group:
      return {{{0.0, kRMax}, {0.0, kRMax}, {0.0, kRMax}, {0.0, kRMax}}, {1, 3}};
    case FitModel::with_loss:
      return {{{0.0, kRMax}, {0.0, kRMax}, {kEtaMin, 1.0}}, {1}};
  }
  throw InvalidArgument("unknown fit model");
}

// Box constraints by reflection: u is measured in box widths and folded back
// into [0, 1] as a triangle wave, so the map stays linear at the bounds.
double to_box(double u, Bound b) {
  double t = std::fmod(std::abs(u), 2.0);
  if (t > 1.0) t = 2.0 - t;
  return b.lo + (b.hi - b.lo) * t;
}

double from_box(double x, Bound b) { return std::clamp((x - b.lo) / (b.hi - b.lo), 0.0, 1.0); }

struct Decoded {
  NetworkParams params{};
  double eta = 1.0;
};

Decoded decode(FitModel model, const std::vector<double>& x) {
  Decoded d;
  switch (model) {
    case FitModel::symmetric:
      d.params.fill({x[0], x[1]});
      break;
    case FitModel::two_group:
      d.params = {ModeParams{x[0], x[1]}, ModeParams{x[2], x[3]}, ModeParams{x[2], x[3]}};
      break;
    case FitModel::with_loss:
      d.params.fill({x[0], x[1]});
      d.eta = x[2];
      break;
  }
  return d;
}

struct Problem {
  FitModel model;
  GainPolicy policy;
  Layout layout;
  std::array<double, 3> targets;
  std::array<double, 3> weights;
  double excess_noise_weight = 0.0;
  std::size_t evaluations = 0;

  std::vector<double> physical(const gsl_vector* u) const {
    std::vector<double> x(layout.bounds.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = to_box(gsl_vector_get(u, i), layout.bounds[i]);
    return x;
  }

  double objective(const std::vector<double>& x) const {
    const Decoded d = decode(model, x);
    const ForwardModel fm = forward_model(d.params, d.eta, policy);
    double f = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      const double e = fm.I[j] - targets[j];
      f += weights[j] * e * e;
    }
    for (std::size_t slot : layout.excess_noise_slots) f += excess_noise_weight * x[slot];
    return std::isfinite(f) ? f : std::numeric_limits<double>::max();
  }
};

double gsl_objective(const gsl_vector* u, void* params) {
  auto* p = static_cast<Problem*>(params);
  ++p->evaluations;
  return p->objective(p->physical(u));
}

struct SimplexRun {
  std::vector<double> u;
  double objective = 0.0;
  std::size_t evaluations = 0;
  bool size_converged = false;
};

SimplexRun run_simplex(Problem problem, const std::vector<double>& u0, double step,
                       const FitOptions& options) {
  const std::size_t dim = u0.size();
  gsl_multimin_function fn{&gsl_objective, dim, &problem};

  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* steps = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x, i, u0[i]);
    gsl_vector_set(steps, i, step);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, x, steps);

  SimplexRun run;
  while (problem.evaluations < options.max_evaluations) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_fminimizer_size(s) < options.size_tolerance) {
      run.size_converged = true;
      break;
    }
  }
  run.u.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) run.u[i] = gsl_vector_get(s->x, i);
  run.objective = s->fval;
  run.evaluations = problem.evaluations;

  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(steps);
  gsl_vector_free(x);
  return run;
}

}  // namespace

std::string_view to_string(FitModel model) {
  switch (model) {
    case FitModel::symmetric:
      return "symmetric";
    case FitModel::two_group:
      return "two_group";
    case FitModel::with_loss:
      return "with_loss";
  }
  return "unknown";
}

FitModel parse_fit_model(std::string_view name) {
  if (name == "symmetric") return FitModel::symmetric;
  if (name == "two_group") return FitModel::two_group;
  if (name == "with_loss") return FitModel::with_loss;
  throw InvalidArgument("unknown fit model '" + std::string(name) +
                        "' (expected symmetric, two_group or with_loss)");
}

ForwardModel forward_model(const NetworkParams& params, double eta, const GainPolicy& policy) {
  const NoiseFactors f = noise_factors(params, eta);
  ForwardModel out;
  out.gains = policy.optimal ? optimal_gains(f) : GainVector::uniform(policy.fixed);
  out.I = closed_form_I(f, out.gains);
  return out;
}

FitResult fit_parameters(const FitTargets& targets, FitModel model, const GainPolicy& policy,
                         const FitOptions& options) {
  for (double t : targets.values) {
    if (!(t > 0.0 && t < 4.0)) {
      throw InvalidArgument("fit targets must lie in (0, 4), got " + std::to_string(t));
    }
  }
  std::array<double, 3> weights{1.0, 1.0, 1.0};
  if (targets.sigmas) {
    double mean = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      const double s = (*targets.sigmas)[j];
      if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("target uncertainties must be > 0");
      weights[j] = 1.0 / (s * s);
      mean += weights[j] / 3.0;
    }
    for (double& w : weights) w /= mean;
  }
  if (!policy.optimal && !std::isfinite(policy.fixed)) throw InvalidArgument("fixed gain must be finite");

  gsl_set_error_handler_off();

  Problem base{model, policy, layout_for(model), targets.values, weights, 0.0, 0};
  const std::size_t dim = base.layout.bounds.size();

  FitResult result;
  result.model = model;
  result.gain_policy = policy;
  result.starts.resize(kStartFractions.size());

  // Starts are independent; results are merged below in start order.
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < kStartFractions.size(); ++k) {
    std::vector<double> u0(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const Bound b = base.layout.bounds[i];
      u0[i] = from_box(b.lo + kStartFractions[k] * (b.hi - b.lo), b);
    }
    Problem tie_break = base;
    tie_break.excess_noise_weight = options.excess_noise_weight;
    const SimplexRun first = run_simplex(tie_break, u0, kInitialStep, options);
    const SimplexRun polish = run_simplex(base, first.u, 1e-3, options);

    FitStart& start = result.starts[k];
    for (std::size_t i = 0; i < dim; ++i) {
      start.initial.push_back(to_box(u0[i], base.layout.bounds[i]));
      start.final.push_back(to_box(polish.u[i], base.layout.bounds[i]));
    }
    start.objective = polish.objective;
    start.evaluations = first.evaluations + polish.evaluations;
    start.simplex_converged = polish.size_converged;
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < result.starts.size(); ++k) {
    if (result.starts[k].objective < result.starts[best].objective) best = k;
  }
  for (const FitStart& s : result.starts) result.evaluations += s.evaluations;
  result.best_start = best;
  result.simplex_converged = result.starts[best].simplex_converged;

  const Decoded d = decode(model, result.starts[best].final);
  result.params = d.params;
  result.eta = d.eta;
  const ForwardModel fm = forward_model(d.params, d.eta, policy);
  result.fitted_I = fm.I;
  result.gains = fm.gains;
  double ss = 0.0;
  for (std::size_t j = 0; j < 3; ++j) ss += (fm.I[j] - targets.values[j]) * (fm.I[j] - targets.values[j]);
  result.residual = std::sqrt(ss / 3.0);
  result.converged = result.residual <= options.convergence_rms;
  return result;
}

}  // namespace tripol
