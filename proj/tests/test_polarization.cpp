#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "tripol/circuit.hpp"
#include "tripol/criteria.hpp"
#include "tripol/error.hpp"
#include "tripol/polarization.hpp"

using namespace tripol;

namespace {

BrightBeam beam(double alpha_c, double alpha_a, double theta = 0.0) {
  return {"b", ModeId(0), ModeId(1), alpha_c, alpha_a, theta};
}

GaussianState squeezed_h(double r, SqueezeAxis axis = SqueezeAxis::amplitude) {
  return set_dopa_output(vacuum_state(2), ModeId(0), {r, 0.0, axis});
}

}  // namespace

TEST_CASE("Stokes means") {
  const StokesVector v = stokes_means(beam(1.0, 0.0));
  CHECK(v == StokesVector{1.0, -1.0, 0.0, 0.0});
  const StokesVector d = stokes_means(beam(1.0, 1.0));
  CHECK(d[0] == 2.0);
  CHECK(d[1] == 0.0);
  CHECK(d[2] == 2.0);
  CHECK(d[3] == 0.0);
  const StokesVector p = stokes_means(beam(1.0, std::sqrt(1.0 / 30.0)));
  CHECK(p[0] == doctest::Approx(31.0 / 30.0));
  CHECK(p[2] == doctest::Approx(2.0 / std::sqrt(30.0)));
  // Field evaluation agrees with the means at zero fluctuation.
  const BrightBeam b = beam(2.0, 0.3, 0.7);
  const StokesVector f = stokes_from_fluctuations(b, 0.0, 0.0);
  const StokesVector m = stokes_means(b);
  for (std::size_t k = 0; k < 4; ++k) CHECK(f[k] == doctest::Approx(m[k]));
  // Poincare sphere for pure fields.
  const StokesVector s = stokes_from_fields({0.3, -0.4}, {1.2, 0.5}, 0.9);
  CHECK(s[0] * s[0] == doctest::Approx(s[1] * s[1] + s[2] * s[2] + s[3] * s[3]));
}

TEST_CASE("full forms are the derivative of the exact Stokes functions") {
  auto g = oracle::rng(23);
  const double h = 1e-6;
  for (int i = 0; i < 40; ++i) {
    const BrightBeam b = beam(oracle::uniform(g, 0.5, 5), oracle::uniform(g, 0, 1), oracle::uniform(g, -3, 3));
    Eigen::Vector4d dir;
    for (int k = 0; k < 4; ++k) dir(k) = oracle::uniform(g, -1, 1);
    const std::complex<double> dh(dir(0), dir(1));
    const std::complex<double> dv(dir(2), dir(3));
    const StokesVector up = stokes_from_fluctuations(b, h * dh, h * dv);
    const StokesVector dn = stokes_from_fluctuations(b, -h * dh, -h * dv);
    for (std::size_t k = 0; k < 4; ++k) {
      const Eigen::VectorXd c = stokes_fluctuation_form(b, static_cast<StokesIndex>(k), 2, FormMode::full);
      const double numeric = (up[k] - dn[k]) / (2 * h);
      CHECK(c.dot(dir) == doctest::Approx(numeric).epsilon(1e-7));
    }
  }
}

TEST_CASE("reduced keeps only the alpha_c terms") {
  const BrightBeam b = beam(3.0, 0.5);
  const Eigen::VectorXd s2 = stokes_fluctuation_form(b, StokesIndex::S2, 2);
  const Eigen::VectorXd s3 = stokes_fluctuation_form(b, StokesIndex::S3, 2);
  const Eigen::VectorXd s0 = stokes_fluctuation_form(b, StokesIndex::S0, 2);
  CHECK(s2(0) == 6.0);
  CHECK(s2.cwiseAbs().sum() == 6.0);
  CHECK(std::abs(s3(1)) == 6.0);
  CHECK(s3.cwiseAbs().sum() == 6.0);
  CHECK(s0(2) == 6.0);
  CHECK(s0.cwiseAbs().sum() == 6.0);
  CHECK_THROWS_AS(stokes_fluctuation_form(b, StokesIndex::S2, 1), InvalidArgument);
}

TEST_CASE("Stokes variances of single beams") {
  // Vacuum H mode at alpha_c = 1 sits at the shot-noise level <S0> = 1.
  const GaussianState vac = vacuum_state(2);
  const BrightBeam b = beam(1.0, 0.0);
  CHECK(linear_form_variance(vac, stokes_fluctuation_form(b, StokesIndex::S2, 2)) == doctest::Approx(1.0));
  CHECK(linear_form_variance(vac, stokes_fluctuation_form(b, StokesIndex::S3, 2)) == doctest::Approx(1.0));

  const GaussianState sq = squeezed_h(0.5);
  CHECK(linear_form_variance(sq, stokes_fluctuation_form(b, StokesIndex::S2, 2)) ==
        doctest::Approx(std::exp(-1.0)));
  CHECK(linear_form_variance(sq, stokes_fluctuation_form(b, StokesIndex::S3, 2)) ==
        doctest::Approx(std::exp(1.0)));

  // S0 and S1 carry only the V-mode amplitude noise: 4 alpha_c^2 Var(X+_V).
  const BrightBeam b2 = beam(2.5, 0.0);
  GaussianState v_sq = set_dopa_output(vacuum_state(2), ModeId(1), {0.3, 0.0, SqueezeAxis::amplitude});
  const double expected = 4 * 2.5 * 2.5 * std::exp(-0.6) / 4;
  CHECK(linear_form_variance(v_sq, stokes_fluctuation_form(b2, StokesIndex::S0, 2)) == doctest::Approx(expected));
  CHECK(linear_form_variance(v_sq, stokes_fluctuation_form(b2, StokesIndex::S1, 2)) == doctest::Approx(expected));
}

TEST_CASE("S2 + S3 variance does not depend on theta") {
  auto g = oracle::rng(29);
  GaussianState s = set_dopa_output(vacuum_state(2), ModeId(0), {0.8, 0.3, SqueezeAxis::amplitude});
  s = apply_transform(s, phase_shift_transform(2, ModeId(0), 0.4));
  for (FormMode mode : {FormMode::reduced, FormMode::full}) {
    double ref = -1.0;
    for (int i = 0; i < 20; ++i) {
      const BrightBeam b = beam(1.7, 0.2, oracle::uniform(g, -M_PI, M_PI));
      const double total = linear_form_variance(s, stokes_fluctuation_form(b, StokesIndex::S2, 2, mode)) +
                           linear_form_variance(s, stokes_fluctuation_form(b, StokesIndex::S3, 2, mode));
      if (ref < 0) ref = total;
      CHECK(total == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("combination variances") {
  // Two coherent beams: S2 difference is two independent shot-noise units.
  const GaussianState vac = vacuum_state(4);
  const std::vector<BrightBeam> two{{"p", ModeId(0), ModeId(2), 1.5, 0.0, 0.0},
                                    {"q", ModeId(1), ModeId(3), 1.5, 0.0, 0.0}};
  const std::vector<StokesTerm> diff{{0, StokesIndex::S2, 1.0}, {1, StokesIndex::S2, -1.0}};
  CHECK(stokes_combination_variance(vac, two, diff) == doctest::Approx(2 * 1.5 * 1.5));
  const std::vector<StokesTerm> none{{0, StokesIndex::S2, 0.0}, {1, StokesIndex::S3, 0.0}};
  CHECK(stokes_combination_variance(vac, two, none) == 0.0);
  const std::vector<StokesTerm> bad{{2, StokesIndex::S2, 1.0}};
  CHECK_THROWS_AS(stokes_combination_variance(vac, two, bad), InvalidArgument);

  // GHZ: S2(d2) - S2(d3) only sees a3, with weight 2 in variance.
  NetworkParams p;
  p[2].r = 0.6;
  const CompiledCircuit c = compile_circuit(ghz_preset(ghz_squeezers(p), 1.0, 0.0));
  const std::vector<StokesTerm> d23{{1, StokesIndex::S2, 1.0}, {2, StokesIndex::S2, -1.0}};
  CHECK(stokes_combination_variance(c.state, c.beams, d23) == doctest::Approx(2 * std::exp(-1.2)));
  CHECK(stokes_combination_variance(c.state, c.beams, d23) == doctest::Approx(0.60239).epsilon(1e-5));
}

TEST_CASE("shot-noise normalization") {
  const std::vector<BrightBeam> unit{beam(1.0, 0.0), beam(1.0, 0.0)};
  CHECK(snl_denominator(unit) == 4.0);
  const std::vector<BrightBeam> dim_pair{beam(std::sqrt(30.0), 1.0), beam(std::sqrt(30.0), 1.0)};
  CHECK(snl_denominator(dim_pair) == doctest::Approx(116.0));
  const std::vector<BrightBeam> equal{beam(1.0, 1.0)};
  CHECK(snl_denominator(equal) == 0.0);
  const std::vector<BrightBeam> mixed{beam(1.0, 0.0), beam(1.1, 0.0)};
  CHECK_THROWS_AS(snl_denominator(mixed), UnsupportedConfiguration);
  CHECK_THROWS_AS(snl_denominator({}), InvalidArgument);
}

TEST_CASE("coherent beams sit exactly at the shot-noise limit") {
  for (double alpha_c : {0.3, 1.0, 7.0}) {
    const CompiledCircuit c = compile_circuit(ghz_preset(ghz_squeezers({}), alpha_c, 0.0));
    for (const BrightBeam& b : c.beams) {
      for (StokesIndex k : {StokesIndex::S2, StokesIndex::S3}) {
        const double v = linear_form_variance(c.state, stokes_fluctuation_form(b, k, c.state.n_modes()));
        CHECK(std::abs(v - alpha_c * alpha_c) <= 1e-12 * alpha_c * alpha_c);
      }
    }
    const CriteriaResult r = evaluate_criteria(c.state, c.beams, GainVector::uniform(0.0));
    for (double i : r.I) CHECK(std::abs(i - 1.0) <= 1e-12);
  }
}

TEST_CASE("reduced versus full forms at alpha_a^2/alpha_c^2 = 1/30") {
  // Coherent inputs, zero gains: every variance picks up the alpha_a terms of
  // the V vacuum, so full gives (1 + rho)/(1 - rho) and reduced 1/(1 - rho).
  const double rho = 1.0 / 30.0;
  const CompiledCircuit c = compile_circuit(ghz_preset(ghz_squeezers({}), 1.0, std::sqrt(rho)));
  const CriteriaResult approx = evaluate_criteria(c.state, c.beams, GainVector::uniform(0.0), FormMode::reduced);
  const CriteriaResult full = evaluate_criteria(c.state, c.beams, GainVector::uniform(0.0), FormMode::full);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(approx.I[j] == doctest::Approx(1.0 / (1.0 - rho)).epsilon(1e-12));
    CHECK(full.I[j] == doctest::Approx((1.0 + rho) / (1.0 - rho)).epsilon(1e-12));
    CHECK(full.I[j] / approx.I[j] - 1.0 == doctest::Approx(rho).epsilon(1e-12));
  }

  // Squeezed inputs: the dropped alpha_a terms carry anti-squeezed noise, and
  // the relative difference grows with r.
  NetworkParams p;
  p.fill({0.6, 0.0});
  const CompiledCircuit s = compile_circuit(ghz_preset(ghz_squeezers(p), 1.0, std::sqrt(rho)));
  const GainVector g = optimal_gains_numeric(s.state, s.beams);
  const double rel = evaluate_criteria(s.state, s.beams, g, FormMode::full).I[0] /
                         evaluate_criteria(s.state, s.beams, g, FormMode::reduced).I[0] - 1.0;
  CHECK(rel > rho);
  CHECK(rel < 0.2);
}
