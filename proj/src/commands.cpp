#include "tripol/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <boost/math/tools/roots.hpp>

#include "tripol/error.hpp"

namespace tripol::cli {

using nlohmann::json;

namespace {

// ---- config reading ----

void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw InvalidArgument("config: '" + std::string(where) + "' must be an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw InvalidArgument("config: unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

std::string key_path(std::string_view where, std::string_view key) {
  return where.empty() ? std::string(key) : std::string(where) + "." + std::string(key);
}

double read_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw InvalidArgument("config: '" + path + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InvalidArgument("config: '" + path + "' must be finite");
  return x;
}

void read_double(const json& obj, std::string_view where, const char* key, double& dst) {
  if (obj.contains(key)) dst = read_number(obj.at(key), key_path(where, key));
}

std::uint64_t read_count(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw InvalidArgument("config: '" + path + "' must be a non-negative integer");
}

std::string read_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw InvalidArgument("config: '" + path + "' must be a string");
  return v.get<std::string>();
}

std::array<double, 3> read_triple(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) {
    throw InvalidArgument("config: '" + path + "' must be an array of three numbers");
  }
  return {read_number(v[0], path), read_number(v[1], path), read_number(v[2], path)};
}

GainSetting read_gains(const json& v) {
  GainSetting g;
  if (v.is_string()) {
    if (v.get<std::string>() != "optimal") {
      throw InvalidArgument("config: 'gains' must be \"optimal\", a number or three numbers");
    }
    return g;
  }
  g.optimal = false;
  if (v.is_number()) {
    g.fixed = GainVector::uniform(read_number(v, "gains"));
  } else {
    g.fixed.g = read_triple(v, "gains");
  }
  return g;
}

FormMode parse_form(const std::string& name) {
  if (name == "reduced") return FormMode::reduced;
  if (name == "full") return FormMode::full;
  throw InvalidArgument("unknown form '" + name + "' (expected reduced or full)");
}

std::string_view form_name(FormMode m) { return m == FormMode::full ? "full" : "reduced"; }

std::string_view stokes_name(StokesIndex k) {
  static constexpr std::array<std::string_view, 4> names{"S0", "S1", "S2", "S3"};
  return names[static_cast<std::size_t>(k)];
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- JSON helpers ----

json estimate_json(const mc::Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

json stokes_json(const StokesVector& v) {
  return {{"S0", v[0]}, {"S1", v[1]}, {"S2", v[2]}, {"S3", v[3]}};
}

json params_json(const NetworkParams& p) {
  json out = json::array();
  for (const ModeParams& m : p) out.push_back({{"r", m.r}, {"r_prime", m.r_prime}});
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

GainVector resolve_gains(const RunConfig& c, const CompiledCircuit& net) {
  return c.gains.optimal ? optimal_gains_numeric(net.state, net.beams, c.form) : c.gains.fixed;
}

std::string fixed5(double v) {
  if (std::abs(v) < 5e-6) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 5);
  return std::string(buf, res.ptr);
}

std::string complex5(double re, double im) {
  if (std::abs(im) < 5e-6) return fixed5(re);
  std::string s = fixed5(re);
  s += im < 0.0 ? "-" : "+";
  s += fixed5(std::abs(im));
  s += "i";
  return s;
}

// ---- sweep ----

void apply_sweep_value(RunConfig& c, const std::string& param, double v) {
  if (param == "r_common") {
    for (ModeParams& m : c.params) m.r = v;
  } else if (param == "r_prime_common") {
    for (ModeParams& m : c.params) m.r_prime = v;
  } else if (param == "g_common") {
    c.gains.optimal = false;
    c.gains.fixed = GainVector::uniform(v);
  } else if (param == "eta") {
    c.eta = v;
  } else {
    throw InvalidArgument("unknown sweep parameter '" + param +
                          "' (expected r_common, r_prime_common, g_common or eta)");
  }
}

SweepRow sweep_point(const RunConfig& base, double v) {
  RunConfig c = base;
  apply_sweep_value(c, base.sweep.param, v);
  const Network net = resolve_network(c);
  const GainVector g = resolve_gains(c, net.compiled);
  const CriteriaResult res = evaluate_criteria(net.compiled.state, net.compiled.beams, g, c.form);
  return {v, res.I, res.sum, g};
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kExitNumerical;
  return kExitValidation;
}

RunConfig load_run_config(const json& file_config, const json& overrides) {
  json j = file_config.is_null() ? json::object() : file_config;
  if (!j.is_object()) throw InvalidArgument("config: top level must be a JSON object");
  j.merge_patch(overrides);
  check_keys(j, "config", {"circuit_text", "circuit_file", "preset", "gains", "form", "mc", "sweep", "fit", "out"});

  RunConfig c;
  if (j.contains("circuit_text")) c.circuit_text = read_string(j["circuit_text"], "circuit_text");
  if (j.contains("circuit_file")) c.circuit_file = read_string(j["circuit_file"], "circuit_file");
  if (c.circuit_text && c.circuit_file) {
    throw InvalidArgument("config: give either circuit_text or circuit_file, not both");
  }
  if (j.contains("preset")) {
    if (!c.uses_preset()) {
      throw InvalidArgument("config: a circuit and preset parameters were both given; use one");
    }
    const json& p = j["preset"];
    check_keys(p, "preset", {"r1", "rp1", "r2", "rp2", "r3", "rp3", "alpha_c", "alpha_a", "theta", "eta"});
    const std::array<const char*, 3> rk{"r1", "r2", "r3"};
    const std::array<const char*, 3> rpk{"rp1", "rp2", "rp3"};
    for (std::size_t i = 0; i < 3; ++i) {
      read_double(p, "preset", rk[i], c.params[i].r);
      read_double(p, "preset", rpk[i], c.params[i].r_prime);
    }
    read_double(p, "preset", "alpha_c", c.alpha_c);
    read_double(p, "preset", "alpha_a", c.alpha_a);
    read_double(p, "preset", "theta", c.theta);
    read_double(p, "preset", "eta", c.eta);
  }
  for (const ModeParams& m : c.params) SqueezerSpec{m.r, m.r_prime, SqueezeAxis::amplitude}.validate();
  if (!(c.eta >= 0.0 && c.eta <= 1.0)) throw InvalidArgument("config: 'preset.eta' must lie in [0, 1]");

  if (j.contains("gains")) c.gains = read_gains(j["gains"]);
  if (j.contains("form")) c.form = parse_form(read_string(j["form"], "form"));

  if (j.contains("mc")) {
    const json& m = j["mc"];
    check_keys(m, "mc", {"n", "seed", "eval", "ratios", "serial"});
    if (m.contains("n")) c.mc.n = static_cast<std::size_t>(read_count(m["n"], "mc.n"));
    if (m.contains("seed")) c.mc.seed = read_count(m["seed"], "mc.seed");
    if (m.contains("eval")) c.mc.eval = mc::parse_stokes_eval(read_string(m["eval"], "mc.eval"));
    if (m.contains("ratios")) {
      if (!m["ratios"].is_array()) throw InvalidArgument("config: 'mc.ratios' must be an array");
      for (const json& r : m["ratios"]) c.mc.ratios.push_back(read_number(r, "mc.ratios"));
    }
    if (m.contains("serial")) {
      if (!m["serial"].is_boolean()) throw InvalidArgument("config: 'mc.serial' must be true or false");
      c.mc.serial = m["serial"].get<bool>();
    }
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, "sweep", {"param", "from", "to", "steps"});
    if (s.contains("param")) c.sweep.param = read_string(s["param"], "sweep.param");
    read_double(s, "sweep", "from", c.sweep.from);
    read_double(s, "sweep", "to", c.sweep.to);
    if (s.contains("steps")) c.sweep.steps = static_cast<std::size_t>(read_count(s["steps"], "sweep.steps"));
  }
  if (j.contains("fit")) {
    const json& f = j["fit"];
    check_keys(f, "fit", {"targets", "sigmas", "model"});
    if (f.contains("targets")) c.fit.targets = read_triple(f["targets"], "fit.targets");
    if (f.contains("sigmas")) c.fit.sigmas = read_triple(f["sigmas"], "fit.sigmas");
    if (f.contains("model")) c.fit.model = parse_fit_model(read_string(f["model"], "fit.model"));
  }
  if (j.contains("out")) c.out = read_string(j["out"], "out");
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  if (c.circuit_text) j["circuit_text"] = *c.circuit_text;
  if (c.circuit_file) j["circuit_file"] = *c.circuit_file;
  if (c.uses_preset()) {
    j["preset"] = {{"r1", c.params[0].r},  {"rp1", c.params[0].r_prime}, {"r2", c.params[1].r},
                   {"rp2", c.params[1].r_prime}, {"r3", c.params[2].r},  {"rp3", c.params[2].r_prime},
                   {"alpha_c", c.alpha_c}, {"alpha_a", c.alpha_a},     {"theta", c.theta},
                   {"eta", c.eta}};
  }
  if (c.gains.optimal) {
    j["gains"] = "optimal";
  } else {
    j["gains"] = c.gains.fixed.g;
  }
  j["form"] = form_name(c.form);
  j["mc"] = {{"n", c.mc.n}, {"seed", c.mc.seed}, {"eval", mc::to_string(c.mc.eval)},
             {"ratios", c.mc.ratios}, {"serial", c.mc.serial}};
  j["sweep"] = {{"param", c.sweep.param}, {"from", c.sweep.from}, {"to", c.sweep.to},
                {"steps", c.sweep.steps}};
  json fit = {{"model", to_string(c.fit.model)}};
  if (c.fit.targets) fit["targets"] = *c.fit.targets;
  if (c.fit.sigmas) fit["sigmas"] = *c.fit.sigmas;
  j["fit"] = fit;
  if (c.out) j["out"] = *c.out;
  return j;
}

Network resolve_network(const RunConfig& c) {
  CircuitSpec spec;
  if (c.uses_preset()) {
    spec = ghz_preset(ghz_squeezers(c.params), c.alpha_c, c.alpha_a, c.theta);
    if (c.eta != 1.0) {
      for (const char* m : {"a1", "a2", "a3"}) spec.append(circuit::Loss{m, c.eta});
    }
  } else {
    if (c.eta != 1.0) {
      throw InvalidArgument("eta applies to the preset only; add loss statements to the circuit");
    }
    if (c.circuit_file) {
      const std::string text = read_file(*c.circuit_file);
      try {
        spec = parse_circuit(text);
      } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), *c.circuit_file + ": " + e.reason());
      }
    } else {
      spec = parse_circuit(*c.circuit_text);
    }
  }
  CompiledCircuit compiled = compile_circuit(spec);
  return {std::move(spec), std::move(compiled), c.uses_preset()};
}

CommandOutput cmd_simulate(const RunConfig& c) {
  const Network net = resolve_network(c);
  const GaussianState& state = net.compiled.state;
  const std::vector<BrightBeam>& beams = net.compiled.beams;

  json report;
  report["config"] = to_json(c);
  json warnings = net.spec.warnings();
  json bj = json::array();
  for (const BrightBeam& b : beams) {
    StokesVector var{};
    for (std::size_t k = 0; k < 4; ++k) {
      var[k] = linear_form_variance(
          state, stokes_fluctuation_form(b, static_cast<StokesIndex>(k), state.n_modes(), c.form));
    }
    bj.push_back({{"name", b.name}, {"mean", stokes_json(stokes_means(b))}, {"variance", stokes_json(var)}});
  }
  report["beams"] = bj;
  if (beams.size() != 3) {
    warnings.push_back("criteria need exactly three beams; got " + std::to_string(beams.size()));
    report["warnings"] = warnings;
    return {dump(report), {}, kExitOk};
  }
  report["warnings"] = warnings;

  const GainVector gains = resolve_gains(c, net.compiled);
  const CriteriaResult res = evaluate_criteria(state, beams, gains, c.form);
  report["gains"] = gains.g;
  report["I_propagated"] = res.I;
  report["snl"] = res.snl;
  report["sum"] = res.sum;
  report["inseparable"] = res.inseparable;
  report["genuine"] = res.genuine;
  if (net.preset) {
    const std::array<double, 3> cf = closed_form_I(noise_factors(c.params, c.eta), gains);
    double diff = 0.0;
    for (std::size_t j = 0; j < 3; ++j) diff = std::max(diff, std::abs(cf[j] - res.I[j]));
    report["I_closed_form"] = cf;
    report["closed_form_max_abs_diff"] = diff;
  }
  return {dump(report), {}, kExitOk};
}

CommandOutput cmd_gains(const RunConfig& c) {
  const Network net = resolve_network(c);
  json report;
  report["config"] = to_json(c);
  json numeric = json::array();
  for (std::size_t j = 0; j < 3; ++j) {
    const OptimalGain g = optimal_gain_numeric(net.compiled.state, net.compiled.beams, j, c.form);
    numeric.push_back({{"gain", g.gain}, {"I_min", g.minimum}});
  }
  report["numeric"] = numeric;
  if (net.preset) {
    const NoiseFactors f = noise_factors(c.params, c.eta);
    const GainVector g = optimal_gains(f);
    report["closed_form"] = {{"gains", g.g}, {"I_min", closed_form_I(f, g)}};
  }
  return {dump(report), {}, kExitOk};
}

CommandOutput cmd_fit(const RunConfig& c) {
  if (!c.fit.targets) throw InvalidArgument("fit needs targets (--targets I1,I2,I3)");
  GainPolicy policy = GainPolicy::optimal_gains();
  if (!c.gains.optimal) {
    const GainVector& g = c.gains.fixed;
    if (g[0] != g[1] || g[1] != g[2]) {
      throw InvalidArgument("fit supports optimal gains or one fixed gain shared by all criteria");
    }
    policy = GainPolicy::fixed_gain(g[0]);
  }
  const FitResult r = fit_parameters({*c.fit.targets, c.fit.sigmas}, c.fit.model, policy);

  json report;
  report["config"] = to_json(c);
  report["model"] = to_string(r.model);
  report["gain_policy"] = policy.optimal ? json("optimal") : json({{"fixed", policy.fixed}});
  report["params"] = params_json(r.params);
  report["eta"] = r.eta;
  report["targets"] = *c.fit.targets;
  report["fitted_I"] = r.fitted_I;
  report["gains"] = r.gains.g;
  report["residual_rms"] = r.residual;
  report["evaluations"] = r.evaluations;
  report["best_start"] = r.best_start;
  report["simplex_converged"] = r.simplex_converged;
  report["converged"] = r.converged;
  const GenuineCheck g = genuine_bound_check(r.fitted_I[0], r.fitted_I[1], r.fitted_I[2]);
  report["sum"] = g.sum;
  report["genuine"] = g.genuine;
  report["inseparable"] = inseparable_verdict(r.fitted_I);
  json starts = json::array();
  for (const FitStart& s : r.starts) {
    starts.push_back({{"initial", s.initial},
                      {"final", s.final},
                      {"objective", s.objective},
                      {"evaluations", s.evaluations},
                      {"simplex_converged", s.simplex_converged}});
  }
  report["starts"] = starts;

  CommandOutput out{dump(report), {}, kExitOk};
  if (!r.converged) {
    out.exit_code = kExitFitNotConverged;
    out.diagnostics = "fit did not converge: best RMS residual " + std::to_string(r.residual) +
                      " exceeds 0.02\n";
  }
  return out;
}

CommandOutput cmd_mc(const RunConfig& c) {
  const Network net = resolve_network(c);
  const GaussianState& state = net.compiled.state;
  const std::vector<BrightBeam>& beams = net.compiled.beams;
  mc::McOptions opt;
  opt.n = c.mc.n;
  opt.seed = c.mc.seed;
  opt.eval = c.mc.eval;
  opt.form = c.form;
  opt.exec = c.mc.serial ? mc::Exec::serial : mc::Exec::parallel;

  const GainVector gains = resolve_gains(c, net.compiled);
  const CriteriaResult analytic = evaluate_criteria(state, beams, gains, c.form);
  const mc::McCriteria est = mc::mc_criteria(state, beams, gains, opt);

  json report;
  report["config"] = to_json(c);
  report["gains"] = gains.g;
  report["I_analytic"] = analytic.I;
  json ij = json::array();
  json zj = json::array();
  for (std::size_t j = 0; j < 3; ++j) {
    ij.push_back(estimate_json(est.I[j]));
    zj.push_back(est.I[j].se > 0.0 ? (est.I[j].value - analytic.I[j]) / est.I[j].se : 0.0);
  }
  report["I"] = ij;
  report["z"] = zj;
  report["snl"] = est.snl;

  json bj = json::array();
  for (const mc::BeamStokes& b : mc::mc_stokes(state, beams, opt)) {
    json mean = json::object();
    json var = json::object();
    for (std::size_t k = 0; k < 4; ++k) {
      const std::string name(stokes_name(static_cast<StokesIndex>(k)));
      mean[name] = estimate_json(b.mean[k]);
      var[name] = estimate_json(b.variance[k]);
    }
    bj.push_back({{"name", b.name}, {"mean", mean}, {"variance", var}});
  }
  report["beams"] = bj;

  if (!c.mc.ratios.empty()) {
    json rows = json::array();
    for (const mc::LinearizationRow& row : mc::validate_linearization(state, beams, c.mc.ratios, opt)) {
      json entries = json::array();
      for (const mc::LinearizationEntry& e : row.entries) {
        entries.push_back({{"beam", e.beam},
                           {"stokes", stokes_name(e.k)},
                           {"exact", e.exact},
                           {"full", e.full},
                           {"reduced", e.approx},
                           {"deviation_full", e.deviation_full},
                           {"deviation_reduced", e.deviation_approx}});
      }
      rows.push_back({{"ratio", row.ratio},
                      {"alpha_a", row.alpha_a},
                      {"max_deviation_full", row.max_deviation_full},
                      {"max_deviation_reduced", row.max_deviation_approx},
                      {"entries", entries}});
    }
    report["linearization"] = rows;
  }
  return {dump(report), {}, kExitOk};
}

CommandOutput cmd_compile(const RunConfig& c, bool dump_transfer) {
  const Network net = resolve_network(c);
  const CompiledCircuit& cc = net.compiled;
  const std::size_t n_net = net.spec.n_modes();
  std::ostringstream os;
  os << "modes: " << n_net << "\n";
  for (const std::string& m : net.spec.mode_names()) os << "  " << m << "\n";
  os << "beams: " << cc.beams.size() << "\n";
  for (const BrightBeam& b : cc.beams) {
    os << "  " << b.name << " h=" << cc.mode_names[b.h_mode.index] << " v=" << cc.mode_names[b.v_mode.index]
       << " alpha_c=" << format_number(b.alpha_c) << " alpha_a=" << format_number(b.alpha_a)
       << " theta=" << format_number(b.theta) << "\n";
  }
  os << "state modes: " << cc.state.n_modes() << "\n";
  os << "lossless: " << (cc.lossless ? "yes" : "no") << "\n";
  if (dump_transfer) {
    os << "mixing coefficients (output <-";
    for (const std::string& m : net.spec.mode_names()) os << " " << m;
    os << "):\n";
    const Eigen::MatrixXd& t = cc.transfer;
    for (std::size_t i = 0; i < n_net; ++i) {
      os << "  " << net.spec.mode_names()[i] << ":";
      for (std::size_t k = 0; k < n_net; ++k) {
        // a_out,i = sum_k u_ik a_in,k with u = T(X+_i, X+_k) + i T(X-_i, X+_k)
        const double re = t(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * k));
        const double im = t(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(2 * k));
        os << " " << complex5(re, im);
      }
      os << "\n";
    }
  }
  std::string diag;
  for (const std::string& w : net.spec.warnings()) diag += "warning: " + w + "\n";
  return {os.str(), diag, kExitOk};
}

std::string format_csv_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "param,I1,I2,I3,sum,g1,g2,g3\n";
  for (const SweepRow& r : rows) {
    out += format_csv_number(r.param);
    for (double v : r.I) out += "," + format_csv_number(v);
    out += "," + format_csv_number(r.sum);
    for (double g : r.gains.g) out += "," + format_csv_number(g);
    out += "\n";
  }
  return out;
}

SweepResult run_sweep(const RunConfig& c) {
  if (!c.uses_preset()) throw InvalidArgument("sweep runs over the GHZ preset parameters; drop the circuit");
  if (c.sweep.steps < 2) throw InvalidArgument("sweep needs steps >= 2");
  RunConfig probe = c;
  apply_sweep_value(probe, c.sweep.param, c.sweep.from);

  const std::size_t steps = c.sweep.steps;
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = c.sweep.from + (c.sweep.to - c.sweep.from) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  grid.back() = c.sweep.to;

  SweepResult result;
  result.rows.resize(steps);
  std::vector<std::exception_ptr> errors(steps);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < steps; ++i) {
    try {
      result.rows[i] = sweep_point(c, grid[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  auto excess = [&](double v) { return sweep_point(c, v).sum - 2.0; };
  for (std::size_t i = 0; i + 1 < steps; ++i) {
    const double a = result.rows[i].sum - 2.0;
    const double b = result.rows[i + 1].sum - 2.0;
    if (a == 0.0) {
      result.crossings.push_back({grid[i], grid[i], grid[i]});
    } else if (a * b < 0.0) {
      const auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= kBisectionTolerance; };
      const auto [lo, hi] = boost::math::tools::bisect(excess, grid[i], grid[i + 1], tol);
      result.crossings.push_back({grid[i], grid[i + 1], 0.5 * (lo + hi)});
    }
  }
  if (result.rows.back().sum - 2.0 == 0.0) {
    result.crossings.push_back({grid.back(), grid.back(), grid.back()});
  }
  return result;
}

CommandOutput cmd_sweep(const RunConfig& c) {
  const SweepResult r = run_sweep(c);
  std::ostringstream diag;
  diag.precision(10);
  if (r.crossings.empty()) {
    diag << "sweep " << c.sweep.param << ": I1+I2+I3 does not cross 2 on the grid\n";
  }
  for (const SweepCrossing& x : r.crossings) {
    diag << "sweep " << c.sweep.param << ": I1+I2+I3 crosses 2 between " << x.lo << " and " << x.hi
         << "; bisection gives " << c.sweep.param << " = " << x.refined << "\n";
  }
  return {sweep_csv(r.rows), diag.str(), kExitOk};
}

}  // namespace tripol::cli
