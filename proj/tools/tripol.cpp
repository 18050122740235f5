// tripol: command-line front end for the tripartite polarization workbench.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tripol/commands.hpp"
#include "tripol/error.hpp"

namespace {

using nlohmann::json;
using tripol::cli::RunConfig;

// Flag values become a JSON merge patch over the --config document, applied
// in registration order.
class Overrides {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& help,
                   std::function<void(json&, const T&)> apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    actions_.push_back({opt, [value, apply](json& patch) { apply(patch, *value); }});
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, const std::string& help,
                    std::function<void(json&)> apply) {
    CLI::Option* opt = app->add_flag(name, help);
    actions_.push_back({opt, std::move(apply)});
    return opt;
  }

  json patch() const {
    json p = json::object();
    for (const auto& [opt, apply] : actions_) {
      if (opt->count() > 0) apply(p);
    }
    return p;
  }

 private:
  std::vector<std::pair<CLI::Option*, std::function<void(json&)>>> actions_;
};

json parse_gains(const std::string& text) {
  if (text == "optimal") return "optimal";
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    double v = 0.0;
    const char* first = text.data() + pos;
    const char* last = text.data() + comma;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      throw tripol::InvalidArgument("--gains expects 'optimal', one number or three comma-separated numbers");
    }
    values.push_back(v);
    pos = comma + 1;
  }
  if (values.size() == 1) return values[0];
  if (values.size() == 3) return values;
  throw tripol::InvalidArgument("--gains expects 'optimal', one number or three comma-separated numbers");
}

struct Common {
  std::string config_path;
  Overrides overrides;
  bool preset_flag = false;
  bool circuit_flag = false;
};

void add_io(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON run configuration");
  c.overrides.add<std::string>(app, "--out", "Write the result here instead of stdout",
                               [](json& p, const std::string& v) { p["out"] = v; });
}

void add_network(CLI::App* app, Common& c, bool with_preset) {
  c.overrides.add<std::string>(app, "--circuit", "Circuit file",
                               [&c](json& p, const std::string& v) {
                                 c.circuit_flag = true;
                                 p["circuit_file"] = v;
                                 p["circuit_text"] = nullptr;
                               });
  c.overrides.add<std::string>(app, "--circuit-text", "Inline circuit program",
                               [&c](json& p, const std::string& v) {
                                 c.circuit_flag = true;
                                 p["circuit_text"] = v;
                                 p["circuit_file"] = nullptr;
                               });
  if (!with_preset) return;
  auto preset = [&c](json& p, const char* key, double v) {
    c.preset_flag = true;
    p["preset"][key] = v;
  };
  c.overrides.add<double>(app, "--r", "Squeezing parameter of all three inputs",
                          [preset](json& p, const double& v) {
                            for (const char* k : {"r1", "r2", "r3"}) preset(p, k, v);
                          });
  c.overrides.add<double>(app, "--rp", "Excess anti-squeezing of all three inputs",
                          [preset](json& p, const double& v) {
                            for (const char* k : {"rp1", "rp2", "rp3"}) preset(p, k, v);
                          });
  for (const char* key : {"r1", "rp1", "r2", "rp2", "r3", "rp3", "alpha_c", "alpha_a", "theta", "eta"}) {
    std::string flag = std::string("--") + key;
    for (char& ch : flag) {
      if (ch == '_') ch = '-';
    }
    c.overrides.add<double>(app, flag, std::string("Preset ") + key,
                            [preset, key](json& p, const double& v) { preset(p, key, v); });
  }
}

void add_gains(CLI::App* app, Common& c) {
  c.overrides.add<std::string>(app, "--gains", "optimal | g | g1,g2,g3",
                               [](json& p, const std::string& v) { p["gains"] = parse_gains(v); });
  c.overrides.add<std::string>(app, "--form", "reduced | full",
                               [](json& p, const std::string& v) { p["form"] = v; });
}

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw tripol::InvalidArgument("cannot read config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw tripol::InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tripartite polarization entanglement workbench"};
  app.require_subcommand(1);
  Common common;
  Overrides& ov = common.overrides;

  CLI::App* simulate = app.add_subcommand("simulate", "Propagate the network and evaluate I1, I2, I3");
  CLI::App* sweep = app.add_subcommand("sweep", "CSV of I1, I2, I3 over one preset parameter");
  CLI::App* gains = app.add_subcommand("gains", "Optimal gains, numeric and closed form");
  CLI::App* fit = app.add_subcommand("fit", "Fit squeezing parameters to measured I values");
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimates of the criteria");
  CLI::App* compile = app.add_subcommand("compile", "Compile a circuit and print its structure");

  for (CLI::App* sub : {simulate, sweep, gains, fit, mc, compile}) add_io(sub, common);
  for (CLI::App* sub : {simulate, gains, mc}) {
    add_network(sub, common, true);
    add_gains(sub, common);
  }
  add_network(sweep, common, true);
  add_gains(sweep, common);
  add_network(compile, common, true);

  ov.add<std::string>(sweep, "--param", "r_common | r_prime_common | g_common | eta",
                      [](json& p, const std::string& v) { p["sweep"]["param"] = v; });
  ov.add<double>(sweep, "--from", "First grid value", [](json& p, const double& v) { p["sweep"]["from"] = v; });
  ov.add<double>(sweep, "--to", "Last grid value", [](json& p, const double& v) { p["sweep"]["to"] = v; });
  ov.add<std::size_t>(sweep, "--steps", "Grid points (>= 2)",
                      [](json& p, const std::size_t& v) { p["sweep"]["steps"] = v; });

  ov.add<std::vector<double>>(fit, "--targets", "I1,I2,I3", [](json& p, const std::vector<double>& v) {
      p["fit"]["targets"] = v;
    })->delimiter(',')->expected(3);
  ov.add<std::vector<double>>(fit, "--sigmas", "Uncertainties of the targets",
                              [](json& p, const std::vector<double>& v) { p["fit"]["sigmas"] = v; })
      ->delimiter(',')
      ->expected(3);
  ov.add<std::string>(fit, "--model", "symmetric | two_group | with_loss",
                      [](json& p, const std::string& v) { p["fit"]["model"] = v; });
  ov.add<std::string>(fit, "--gains", "optimal | g",
                      [](json& p, const std::string& v) { p["gains"] = parse_gains(v); });

  ov.add<std::size_t>(mc, "--n", "Samples (>= 1000)", [](json& p, const std::size_t& v) { p["mc"]["n"] = v; });
  ov.add<std::uint64_t>(mc, "--seed", "Random seed",
                        [](json& p, const std::uint64_t& v) { p["mc"]["seed"] = v; });
  ov.add<std::string>(mc, "--eval", "linearized | exact",
                      [](json& p, const std::string& v) { p["mc"]["eval"] = v; });
  ov.add<std::vector<double>>(mc, "--ratios", "alpha_a^2/alpha_c^2 values for the linearization check",
                              [](json& p, const std::vector<double>& v) { p["mc"]["ratios"] = v; })
      ->delimiter(',');
  ov.flag(mc, "--serial", "Use the single-threaded reference kernel",
          [](json& p) { p["mc"]["serial"] = true; });

  bool dump = false;
  compile->add_flag("--dump", dump, "Print the mixing coefficients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : tripol::cli::kExitValidation;
  }

  try {
    json patch = ov.patch();
    if (common.circuit_flag && !common.preset_flag) patch["preset"] = nullptr;
    if (common.preset_flag && !common.circuit_flag) {
      patch["circuit_file"] = nullptr;
      patch["circuit_text"] = nullptr;
    }
    const RunConfig config = tripol::cli::load_run_config(read_config(common.config_path), patch);

    tripol::cli::CommandOutput out;
    if (*simulate) out = tripol::cli::cmd_simulate(config);
    else if (*sweep) out = tripol::cli::cmd_sweep(config);
    else if (*gains) out = tripol::cli::cmd_gains(config);
    else if (*fit) out = tripol::cli::cmd_fit(config);
    else if (*mc) out = tripol::cli::cmd_mc(config);
    else out = tripol::cli::cmd_compile(config, dump);

    std::cerr << out.diagnostics;
    if (config.out) {
      std::ofstream f(*config.out, std::ios::binary);
      if (!f) throw tripol::InvalidArgument("cannot write '" + *config.out + "'");
      f << out.text;
    } else {
      std::cout << out.text;
    }
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tripol::cli::exit_code_for(e);
  }
}
