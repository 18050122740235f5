#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "tripol/gaussian.hpp"
#include "tripol/polarization.hpp"

namespace tripol {

namespace circuit {

struct ModeDecl {
  std::string name;
  friend bool operator==(const ModeDecl&, const ModeDecl&) = default;
};

struct Squeeze {
  std::string mode;
  SqueezerSpec spec;
  friend bool operator==(const Squeeze&, const Squeeze&) = default;
};

/// Reflectivity is given as an integer ratio R:T and normalized so R + T = 1.
struct BeamSplit {
  std::string m1;
  std::string m2;
  std::uint32_t r_parts = 1;
  std::uint32_t t_parts = 1;
  double phase = 0.0;

  double reflectivity() const {
    return static_cast<double>(r_parts) / (static_cast<double>(r_parts) + t_parts);
  }
  friend bool operator==(const BeamSplit&, const BeamSplit&) = default;
};

struct PhaseShift {
  std::string mode;
  double radians = 0.0;
  friend bool operator==(const PhaseShift&, const PhaseShift&) = default;
};

struct Loss {
  std::string mode;
  double eta = 1.0;
  friend bool operator==(const Loss&, const Loss&) = default;
};

struct BeamDecl {
  std::string name;
  std::string h_mode;
  double alpha_c = 1.0;
  double alpha_a = 0.0;
  double theta = 0.0;
  friend bool operator==(const BeamDecl&, const BeamDecl&) = default;
};

using Element = std::variant<ModeDecl, Squeeze, BeamSplit, PhaseShift, Loss, BeamDecl>;

}  // namespace circuit

/// Ordered, validated list of circuit elements. Every append re-checks the
/// element against what was declared before it.
class CircuitSpec {
 public:
  /// Throws InvalidArgument with the reason if the element is not valid here.
  void append(circuit::Element element);

  /// Reason the element would be rejected, or nullopt if it is valid.
  std::optional<std::string> check(const circuit::Element& element) const;

  const std::vector<circuit::Element>& elements() const { return elements_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  std::size_t n_modes() const { return mode_names_.size(); }
  const std::vector<std::string>& mode_names() const { return mode_names_; }
  std::optional<ModeId> find_mode(std::string_view name) const;
  std::vector<circuit::BeamDecl> beams() const;

  /// Structural equality; warnings are not compared.
  friend bool operator==(const CircuitSpec& a, const CircuitSpec& b) {
    return a.elements_ == b.elements_;
  }

 private:
  std::vector<circuit::Element> elements_;
  std::vector<std::string> warnings_;
  std::vector<std::string> mode_names_;
  std::vector<std::string> beam_names_;
  std::vector<std::string> bound_h_modes_;
  std::vector<std::string> squeezed_;
  std::vector<std::string> touched_;
};

/// Parses the line-oriented circuit language. Throws ParseError with the
/// line and column of the first offending token.
CircuitSpec parse_circuit(std::string_view text);

/// Canonical text form; parse_circuit(print_circuit(s)) == s.
std::string print_circuit(const CircuitSpec& spec);

struct CompiledCircuit {
  /// Network modes first (declaration order), then one vacuum V mode per beam.
  GaussianState state;
  std::vector<BrightBeam> beams;
  std::vector<std::string> mode_names;
  /// Linear quadrature map of the network (input -> output), including the
  /// sqrt(eta) amplitude scaling of loss elements. Symplectic when lossless.
  Eigen::MatrixXd transfer;
  bool lossless = true;
};

CompiledCircuit compile_circuit(const CircuitSpec& spec);

inline constexpr double kDefaultIntensityRatio = 1.0 / 30.0;

/// Three-mode GHZ-like network: mode 1 phase-squeezed, modes 2 and 3
/// amplitude-squeezed, BS1 (R:T = 1:2) on a1/a2 then BS2 (1:1) on a1/a3.
/// Beams d1, d2, d3 take the outputs on a2, a1, a3 respectively.
CircuitSpec ghz_preset(const std::array<SqueezerSpec, 3>& specs, double alpha_c, double alpha_a,
                       double theta = 0.0);

/// Preset with alpha_c = 1 and alpha_a^2 / alpha_c^2 = 1/30.
CircuitSpec ghz_preset(const std::array<SqueezerSpec, 3>& specs);

/// Formats a double in the shortest form that parses back to the same value.
std::string format_number(double value);

}  // namespace tripol
