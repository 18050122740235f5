#include <doctest.h>

#include <cmath>

#include "tripol/error.hpp"
#include "tripol/fit.hpp"

using namespace tripol;

TEST_CASE("coherent targets give r = 0") {
  const FitResult r = fit_parameters({{1.0, 1.0, 1.0}, std::nullopt}, FitModel::symmetric,
                                     GainPolicy::optimal_gains());
  CHECK(r.converged);
  CHECK(r.residual < 1e-10);
  CHECK(r.params[0].r < 1e-3);
  CHECK(r.model == FitModel::symmetric);
  CHECK(r.starts.size() == 5);
}

TEST_CASE("round trip through the closed form") {
  NetworkParams truth;
  truth.fill({0.6, 0.0});
  const std::array<double, 3> target = forward_model(truth, 1.0, GainPolicy::optimal_gains()).I;
  CHECK(target[0] == doctest::Approx(0.36669).epsilon(1e-5));
  const FitResult r = fit_parameters({target, std::nullopt}, FitModel::symmetric, GainPolicy::optimal_gains());
  CHECK(r.converged);
  CHECK(std::abs(r.params[0].r - 0.6) <= 1e-3);
  CHECK(r.params[0].r_prime <= 1e-3);
  CHECK(r.params[0] == r.params[1]);
  CHECK(r.params[1] == r.params[2]);
}

TEST_CASE("targets (0.42, 0.41, 0.42) in the symmetric model") {
  const FitResult r = fit_parameters({{0.42, 0.41, 0.42}, std::nullopt}, FitModel::symmetric,
                                     GainPolicy::optimal_gains());
  CHECK(r.converged);
  // I1 = I2 = I3 in this model; the best common value is the mean 1.25/3.
  CHECK(r.residual <= 0.005);
  CHECK(r.residual == doctest::Approx(0.01 * std::sqrt(2.0) / 3.0).epsilon(1e-6));
  const double sum = r.fitted_I[0] + r.fitted_I[1] + r.fitted_I[2];
  CHECK(std::abs(sum - 1.25) <= 0.01);
  for (double i : r.fitted_I) CHECK(i == doctest::Approx(1.25 / 3.0).epsilon(1e-6));
}

TEST_CASE("weights follow the target uncertainties") {
  // A tight I2 pulls the common value towards 0.41.
  const FitResult r = fit_parameters({{0.42, 0.41, 0.42}, std::array<double, 3>{0.08, 0.001, 0.08}},
                                     FitModel::symmetric, GainPolicy::optimal_gains());
  CHECK(r.fitted_I[1] == doctest::Approx(0.41).epsilon(1e-3));
  CHECK_THROWS_AS(fit_parameters({{0.4, 0.4, 0.4}, std::array<double, 3>{0.1, 0.0, 0.1}}, FitModel::symmetric,
                                 GainPolicy::optimal_gains()),
                  InvalidArgument);
}

TEST_CASE("two-group and loss models") {
  NetworkParams truth{ModeParams{0.3, 0.1}, ModeParams{0.8, 0.0}, ModeParams{0.8, 0.0}};
  const auto target = forward_model(truth, 1.0, GainPolicy::optimal_gains()).I;
  const FitResult two = fit_parameters({target, std::nullopt}, FitModel::two_group, GainPolicy::optimal_gains());
  CHECK(two.converged);
  CHECK(two.residual < 1e-6);
  CHECK(two.params[1] == two.params[2]);

  NetworkParams sym;
  sym.fill({0.9, 0.0});
  const auto lossy = forward_model(sym, 0.7, GainPolicy::optimal_gains()).I;
  const FitResult wl = fit_parameters({lossy, std::nullopt}, FitModel::with_loss, GainPolicy::optimal_gains());
  CHECK(wl.converged);
  CHECK(wl.residual < 1e-6);
  CHECK(wl.eta > 0.0);
  CHECK(wl.eta <= 1.0);
}

TEST_CASE("fixed gain policy") {
  NetworkParams truth;
  truth.fill({0.5, 0.0});
  const auto target = forward_model(truth, 1.0, GainPolicy::fixed_gain(1.0)).I;
  const FitResult r = fit_parameters({target, std::nullopt}, FitModel::symmetric, GainPolicy::fixed_gain(1.0));
  CHECK(r.converged);
  CHECK(r.gains == GainVector::uniform(1.0));
  CHECK(std::abs(r.params[0].r - 0.5) <= 1e-3);
}

TEST_CASE("unreachable targets do not converge") {
  const FitResult r = fit_parameters({{0.1, 3.0, 0.1}, std::nullopt}, FitModel::symmetric,
                                     GainPolicy::optimal_gains());
  CHECK_FALSE(r.converged);
  CHECK(r.residual > 0.02);
  for (const auto& m : r.params) {
    CHECK(m.r >= 0.0);
    CHECK(m.r <= 2.0);
    CHECK(m.r_prime >= 0.0);
  }
}

TEST_CASE("target and model validation") {
  CHECK_THROWS_AS(fit_parameters({{0.0, 0.5, 0.5}, std::nullopt}, FitModel::symmetric, GainPolicy::optimal_gains()),
                  InvalidArgument);
  CHECK_THROWS_AS(fit_parameters({{0.5, 4.0, 0.5}, std::nullopt}, FitModel::symmetric, GainPolicy::optimal_gains()),
                  InvalidArgument);
  CHECK(parse_fit_model("two_group") == FitModel::two_group);
  CHECK(to_string(FitModel::with_loss) == "with_loss");
  CHECK_THROWS_AS(parse_fit_model("free"), InvalidArgument);
}

TEST_CASE("fits are deterministic") {
  const FitTargets t{{0.5, 0.45, 0.47}, std::nullopt};
  const FitResult a = fit_parameters(t, FitModel::two_group, GainPolicy::optimal_gains());
  const FitResult b = fit_parameters(t, FitModel::two_group, GainPolicy::optimal_gains());
  CHECK(a.params == b.params);
  CHECK(a.residual == b.residual);
  CHECK(a.best_start == b.best_start);
}
