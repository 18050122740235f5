#include "tripol/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <map>
#include <sstream>
#include <system_error>
#include <utility>

#include "tripol/error.hpp"

namespace tripol {

using namespace circuit;

namespace {

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  return head(s.front()) && std::all_of(s.begin() + 1, s.end(), tail);
}

const char* axis_name(SqueezeAxis axis) { return axis == SqueezeAxis::amplitude ? "amp" : "phase"; }

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::optional<ModeId> CircuitSpec::find_mode(std::string_view name) const {
  const auto it = std::find(mode_names_.begin(), mode_names_.end(), name);
  if (it == mode_names_.end()) return std::nullopt;
  return ModeId(static_cast<std::size_t>(it - mode_names_.begin()));
}

std::vector<BeamDecl> CircuitSpec::beams() const {
  std::vector<BeamDecl> out;
  for (const Element& e : elements_) {
    if (const auto* b = std::get_if<BeamDecl>(&e)) out.push_back(*b);
  }
  return out;
}

std::optional<std::string> CircuitSpec::check(const Element& element) const {
  auto unknown = [&](const std::string& m) -> std::optional<std::string> {
    if (!contains(mode_names_, m)) return "unknown mode '" + m + "'";
    return std::nullopt;
  };
  return std::visit(
      [&](const auto& e) -> std::optional<std::string> {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ModeDecl>) {
          if (!is_identifier(e.name)) return "invalid mode name '" + e.name + "'";
          if (contains(mode_names_, e.name)) return "duplicate mode '" + e.name + "'";
        } else if constexpr (std::is_same_v<T, Squeeze>) {
          if (auto err = unknown(e.mode)) return err;
          if (!(e.spec.r >= 0.0) || !std::isfinite(e.spec.r)) return "negative r";
          if (!(e.spec.r_prime >= 0.0) || !std::isfinite(e.spec.r_prime)) return "negative rp";
          if (contains(squeezed_, e.mode)) return "mode '" + e.mode + "' is already squeezed";
          if (contains(touched_, e.mode)) {
            return "squeeze on mode '" + e.mode + "' after it entered the network";
          }
        } else if constexpr (std::is_same_v<T, BeamSplit>) {
          if (auto err = unknown(e.m1)) return err;
          if (auto err = unknown(e.m2)) return err;
          if (e.m1 == e.m2) return "beam splitter needs two distinct modes";
          if (static_cast<std::uint64_t>(e.r_parts) + e.t_parts == 0) {
            return "ratio rt=0:0 cannot be normalized to R+T=1";
          }
          if (!std::isfinite(e.phase)) return "phase must be finite";
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          if (auto err = unknown(e.mode)) return err;
          if (!std::isfinite(e.radians)) return "phase must be finite";
        } else if constexpr (std::is_same_v<T, Loss>) {
          if (auto err = unknown(e.mode)) return err;
          if (!(e.eta >= 0.0 && e.eta <= 1.0)) return "eta must lie in [0, 1]";
        } else if constexpr (std::is_same_v<T, BeamDecl>) {
          if (!is_identifier(e.name)) return "invalid beam name '" + e.name + "'";
          if (contains(beam_names_, e.name)) return "duplicate beam '" + e.name + "'";
          if (auto err = unknown(e.h_mode)) return err;
          if (contains(bound_h_modes_, e.h_mode)) {
            return "mode '" + e.h_mode + "' is already bound to a beam";
          }
          if (!(e.alpha_c > 0.0) || !std::isfinite(e.alpha_c)) return "alpha_c must be > 0";
          if (!(e.alpha_a >= 0.0) || !std::isfinite(e.alpha_a)) return "alpha_a must be >= 0";
          if (!std::isfinite(e.theta)) return "theta must be finite";
        }
        return std::nullopt;
      },
      element);
}

void CircuitSpec::append(Element element) {
  if (auto err = check(element)) throw InvalidArgument(*err);
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ModeDecl>) {
          mode_names_.push_back(e.name);
        } else if constexpr (std::is_same_v<T, Squeeze>) {
          squeezed_.push_back(e.mode);
        } else if constexpr (std::is_same_v<T, BeamSplit>) {
          touched_.push_back(e.m1);
          touched_.push_back(e.m2);
        } else if constexpr (std::is_same_v<T, PhaseShift> || std::is_same_v<T, Loss>) {
          touched_.push_back(e.mode);
        } else if constexpr (std::is_same_v<T, BeamDecl>) {
          beam_names_.push_back(e.name);
          bound_h_modes_.push_back(e.h_mode);
          if (e.alpha_a * e.alpha_a > 0.1 * e.alpha_c * e.alpha_c) {
            warnings_.push_back("beam '" + e.name +
                                "': alpha_a^2/alpha_c^2 > 0.1, outside the bright-beam regime");
          }
        }
      },
      element);
  elements_.push_back(std::move(element));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

class LineParser {
 public:
  LineParser(std::size_t line, std::vector<Token> tokens, const CircuitSpec& spec)
      : line_(line), tokens_(std::move(tokens)), spec_(spec) {}

  Element parse() {
    const std::string_view kw = tokens_[0].text;
    if (kw == "mode") return parse_mode();
    if (kw == "squeeze") return parse_squeeze();
    if (kw == "bs") return parse_bs();
    if (kw == "phase") return parse_phase();
    if (kw == "loss") return parse_loss();
    if (kw == "beam") return parse_beam();
    fail(tokens_[0], "unknown statement '" + std::string(kw) + "'");
  }

  [[noreturn]] void fail(const Token& at, const std::string& reason) const {
    throw ParseError(line_, at.column, reason);
  }

  const Token& statement() const { return tokens_[0]; }

 private:
  void expect_count(std::size_t positional, std::size_t keyed) {
    const std::size_t want = 1 + positional + keyed;
    if (tokens_.size() < want) {
      fail(tokens_.back(), "'" + std::string(tokens_[0].text) + "' expects " +
                               std::to_string(want - 1) + " arguments, got " +
                               std::to_string(tokens_.size() - 1));
    }
    if (tokens_.size() > want) fail(tokens_[want], "unexpected argument '" +
                                                       std::string(tokens_[want].text) + "'");
  }

  std::string mode_ref(const Token& t) const {
    std::string name(t.text);
    if (!spec_.find_mode(name)) fail(t, "unknown mode '" + name + "'");
    return name;
  }

  /// key=value arguments after the positional ones, in any order, each exactly once.
  std::map<std::string, Token> keyed(std::size_t first, std::initializer_list<std::string_view> keys) {
    std::map<std::string, Token> out;
    for (std::size_t i = first; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      const auto eq = t.text.find('=');
      if (eq == std::string_view::npos) fail(t, "expected key=value, got '" + std::string(t.text) + "'");
      const std::string key(t.text.substr(0, eq));
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        fail(t, "unknown argument '" + key + "'");
      }
      if (out.count(key)) fail(t, "duplicate argument '" + key + "'");
      out.emplace(key, Token{t.text.substr(eq + 1), t.column + eq + 1});
    }
    for (std::string_view k : keys) {
      if (!out.count(std::string(k))) fail(statement(), "missing argument '" + std::string(k) + "'");
    }
    return out;
  }

  double number(const Token& t) const {
    std::string_view s = t.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail(t, "malformed number '" + std::string(t.text) + "'");
    }
    return v;
  }

  std::uint32_t ratio_part(const Token& t, std::string_view s) const {
    std::uint32_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      fail(t, "malformed ratio '" + std::string(t.text) + "', expected rt=<int>:<int>");
    }
    return v;
  }

  Element parse_mode() {
    expect_count(1, 0);
    return ModeDecl{std::string(tokens_[1].text)};
  }

  Element parse_squeeze() {
    expect_count(1, 3);
    Squeeze sq;
    sq.mode = mode_ref(tokens_[1]);
    auto args = keyed(2, {"r", "rp", "axis"});
    sq.spec.r = number(args.at("r"));
    if (sq.spec.r < 0.0) fail(args.at("r"), "negative r");
    sq.spec.r_prime = number(args.at("rp"));
    if (sq.spec.r_prime < 0.0) fail(args.at("rp"), "negative rp");
    const Token& axis = args.at("axis");
    if (axis.text == "amp") {
      sq.spec.axis = SqueezeAxis::amplitude;
    } else if (axis.text == "phase") {
      sq.spec.axis = SqueezeAxis::phase;
    } else {
      fail(axis, "axis must be 'amp' or 'phase', got '" + std::string(axis.text) + "'");
    }
    return sq;
  }

  Element parse_bs() {
    expect_count(2, 2);
    BeamSplit bs;
    bs.m1 = mode_ref(tokens_[1]);
    bs.m2 = mode_ref(tokens_[2]);
    auto args = keyed(3, {"rt", "phase"});
    const Token& rt = args.at("rt");
    const auto colon = rt.text.find(':');
    if (colon == std::string_view::npos) {
      fail(rt, "malformed ratio '" + std::string(rt.text) + "', expected rt=<int>:<int>");
    }
    bs.r_parts = ratio_part(rt, rt.text.substr(0, colon));
    bs.t_parts = ratio_part(rt, rt.text.substr(colon + 1));
    if (static_cast<std::uint64_t>(bs.r_parts) + bs.t_parts == 0) {
      fail(rt, "ratio rt=0:0 cannot be normalized to R+T=1");
    }
    bs.phase = number(args.at("phase"));
    return bs;
  }

  Element parse_phase() {
    expect_count(2, 0);
    return PhaseShift{mode_ref(tokens_[1]), number(tokens_[2])};
  }

  Element parse_loss() {
    expect_count(1, 1);
    Loss loss;
    loss.mode = mode_ref(tokens_[1]);
    auto args = keyed(2, {"eta"});
    loss.eta = number(args.at("eta"));
    if (!(loss.eta >= 0.0 && loss.eta <= 1.0)) fail(args.at("eta"), "eta must lie in [0, 1]");
    return loss;
  }

  Element parse_beam() {
    expect_count(1, 4);
    BeamDecl b;
    b.name = std::string(tokens_[1].text);
    auto args = keyed(2, {"h", "alpha_c", "alpha_a", "theta"});
    b.h_mode = mode_ref(args.at("h"));
    b.alpha_c = number(args.at("alpha_c"));
    if (!(b.alpha_c > 0.0)) fail(args.at("alpha_c"), "alpha_c must be > 0");
    b.alpha_a = number(args.at("alpha_a"));
    if (b.alpha_a < 0.0) fail(args.at("alpha_a"), "alpha_a must be >= 0");
    b.theta = number(args.at("theta"));
    return b;
  }

  std::size_t line_;
  std::vector<Token> tokens_;
  const CircuitSpec& spec_;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back(Token{line.substr(start, i - start), start + 1});
  }
  return out;
}

}  // namespace

CircuitSpec parse_circuit(std::string_view text) {
  CircuitSpec spec;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;

    std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) continue;
    LineParser parser(line_no, std::move(tokens), spec);
    Element element = parser.parse();
    if (auto err = spec.check(element)) parser.fail(parser.statement(), *err);
    spec.append(std::move(element));
  }
  return spec;
}

std::string print_circuit(const CircuitSpec& spec) {
  std::ostringstream os;
  for (const Element& element : spec.elements()) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, ModeDecl>) {
            os << "mode " << e.name;
          } else if constexpr (std::is_same_v<T, Squeeze>) {
            os << "squeeze " << e.mode << " r=" << format_number(e.spec.r)
               << " rp=" << format_number(e.spec.r_prime) << " axis=" << axis_name(e.spec.axis);
          } else if constexpr (std::is_same_v<T, BeamSplit>) {
            os << "bs " << e.m1 << ' ' << e.m2 << " rt=" << e.r_parts << ':' << e.t_parts
               << " phase=" << format_number(e.phase);
          } else if constexpr (std::is_same_v<T, PhaseShift>) {
            os << "phase " << e.mode << ' ' << format_number(e.radians);
          } else if constexpr (std::is_same_v<T, Loss>) {
            os << "loss " << e.mode << " eta=" << format_number(e.eta);
          } else if constexpr (std::is_same_v<T, BeamDecl>) {
            os << "beam " << e.name << " h=" << e.h_mode << " alpha_c=" << format_number(e.alpha_c)
               << " alpha_a=" << format_number(e.alpha_a) << " theta=" << format_number(e.theta);
          }
          os << '\n';
        },
        element);
  }
  return os.str();
}

CompiledCircuit compile_circuit(const CircuitSpec& spec) {
  const std::size_t n = spec.n_modes();
  if (n == 0) throw InvalidArgument("circuit declares no modes");
  auto mode = [&](const std::string& name) {
    const auto id = spec.find_mode(name);
    if (!id) throw InvalidArgument("unknown mode '" + name + "'");
    return *id;
  };

  GaussianState state = vacuum_state(n);
  for (const Element& element : spec.elements()) {
    if (const auto* sq = std::get_if<Squeeze>(&element)) {
      state = set_dopa_output(state, mode(sq->mode), sq->spec);
    }
  }

  const auto dim = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXd transfer = Eigen::MatrixXd::Identity(dim, dim);
  bool lossless = true;
  for (const Element& element : spec.elements()) {
    if (const auto* bs = std::get_if<BeamSplit>(&element)) {
      const auto s = beamsplitter_transform(n, mode(bs->m1), mode(bs->m2), bs->reflectivity(), bs->phase);
      state = apply_transform(state, s);
      transfer = s.matrix() * transfer;
    } else if (const auto* ps = std::get_if<PhaseShift>(&element)) {
      const auto s = phase_shift_transform(n, mode(ps->mode), ps->radians);
      state = apply_transform(state, s);
      transfer = s.matrix() * transfer;
    } else if (const auto* loss = std::get_if<Loss>(&element)) {
      const ModeId m = mode(loss->mode);
      state = loss_channel(state, m, loss->eta);
      transfer.middleRows<2>(static_cast<Eigen::Index>(m.plus())) *= std::sqrt(loss->eta);
      lossless = lossless && loss->eta == 1.0;
    }
  }

  const std::vector<BeamDecl> decls = spec.beams();
  CompiledCircuit out{append_vacuum_modes(state, decls.size()), {}, spec.mode_names(),
                      std::move(transfer), lossless};
  for (std::size_t k = 0; k < decls.size(); ++k) {
    const BeamDecl& d = decls[k];
    BrightBeam beam{d.name, mode(d.h_mode), ModeId(n + k), d.alpha_c, d.alpha_a, d.theta};
    beam.validate();
    out.beams.push_back(std::move(beam));
    out.mode_names.push_back(d.name + ".v");
  }
  return out;
}

CircuitSpec ghz_preset(const std::array<SqueezerSpec, 3>& specs, double alpha_c, double alpha_a,
                       double theta) {
  CircuitSpec spec;
  const std::array<std::string, 3> modes = {"a1", "a2", "a3"};
  for (const auto& m : modes) spec.append(ModeDecl{m});
  for (std::size_t i = 0; i < 3; ++i) spec.append(Squeeze{modes[i], specs[i]});
  spec.append(BeamSplit{"a1", "a2", 1, 2, 0.0});
  spec.append(BeamSplit{"a1", "a3", 1, 1, 0.0});
  spec.append(BeamDecl{"d1", "a2", alpha_c, alpha_a, theta});
  spec.append(BeamDecl{"d2", "a1", alpha_c, alpha_a, theta});
  spec.append(BeamDecl{"d3", "a3", alpha_c, alpha_a, theta});

  if (specs[0].axis != SqueezeAxis::phase) {
    spec.add_warning("GHZ preset expects a phase-squeezed input on a1");
  }
  for (std::size_t i = 1; i < 3; ++i) {
    if (specs[i].axis != SqueezeAxis::amplitude) {
      spec.add_warning("GHZ preset expects an amplitude-squeezed input on " + modes[i]);
    }
  }
  return spec;
}

CircuitSpec ghz_preset(const std::array<SqueezerSpec, 3>& specs) {
  return ghz_preset(specs, 1.0, std::sqrt(kDefaultIntensityRatio), 0.0);
}

}  // namespace tripol
