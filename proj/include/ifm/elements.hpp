#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ifm/state.hpp"

namespace ifm {

// Element conventions (fixed once, asserted by the dark-port tests):
//   beam splitter on (a, b):  [[sqrt(1-R), i sqrt(R)], [i sqrt(R), sqrt(1-R)]]
//   mirror:                   multiply the mode amplitude by i
//   phase shifter:            multiply by e^{i phi}
//   absorber:                 live amplitude *= t; the removed branch
//                             a * sqrt(1-|t|^2) goes to the ledger
// A beam splitter with R = 1 acts as a routing mirror between two rails.

struct BeamSplitter {
  std::string mode_a;
  std::string mode_b;
  double reflectivity = 0.5;
  bool operator==(const BeamSplitter&) const = default;
};

struct Mirror {
  std::string mode;
  bool operator==(const Mirror&) const = default;
};

struct PhaseShift {
  std::string mode;
  double phase = 0.0;  // radians
  bool operator==(const PhaseShift&) const = default;
};

/// Partial or total blocker. t = 0 is an opaque object (the ultra-sensitive
/// bomb); |t| = 1 is fully transparent. Complex t allows phase objects.
struct Absorber {
  std::string mode;
  Complex transmission{0.0, 0.0};
  bool operator==(const Absorber&) const = default;
};

/// Detector name -> mode it watches. Ordered by name for stable reporting.
struct DetectorSet {
  std::map<std::string, std::string> monitors;
  bool operator==(const DetectorSet&) const = default;
};

struct OpticalElement {
  std::string id;
  std::variant<BeamSplitter, Mirror, PhaseShift, Absorber, DetectorSet> kind;
  bool operator==(const OpticalElement&) const = default;
};

/// Modes an element reads or writes (detector sets count their monitored modes).
std::vector<std::string> touched_modes(const OpticalElement& element);

/// Timed sequence of element groups acting on a fixed mode space. Elements
/// within one step act on disjoint modes; an empty step is free propagation.
class Circuit {
public:
  Circuit(ModeSpace space, std::vector<std::vector<OpticalElement>> steps);

  const ModeSpace& space() const { return space_; }
  const std::vector<std::vector<OpticalElement>>& steps() const { return steps_; }
  std::size_t step_count() const { return steps_.size(); }

  /// The last detector set in the circuit, if any.
  std::optional<DetectorSet> detectors() const;

  /// This circuit followed by `tail` (same mode space).
  Circuit concatenated(const Circuit& tail) const;

  bool operator==(const Circuit& other) const {
    return space_ == other.space_ && steps_ == other.steps_;
  }

private:
  ModeSpace space_;
  std::vector<std::vector<OpticalElement>> steps_;
};

struct OutcomeDistribution {
  /// Detector name -> probability, in detector-set order.
  std::vector<std::pair<std::string, double>> detector_probs;
  double explosion_prob = 0.0;
  /// Live probability left on modes no detector watches.
  double residual_prob = 0.0;

  double prob(const std::string& detector) const;
  double total() const;
};

/// Evolve a state through one element. Absorbers move the removed branch to
/// the ledger, stamped with the element id and time step, so that total
/// probability is conserved.
PureState apply_element(const PureState& state, const OpticalElement& element, int time_step);

/// Same action without the copy; long repeated-cycle protocols use this.
void apply_element_in_place(PureState& state, const OpticalElement& element, int time_step);

/// Adjoint of the element's action on the live sector (absorbers multiply by
/// conj(t); no ledger is written). Used for backward-evolving states.
PureState apply_element_adjoint(const PureState& state, const OpticalElement& element);

struct RunResult {
  PureState final;
  /// State after each step; empty for an empty circuit.
  std::vector<PureState> trajectory;
};

RunResult run_circuit(const Circuit& circuit, const PureState& input);

OutcomeDistribution measure(const PureState& final, const DetectorSet& detectors);

// ---------------------------------------------------------------------------
// Mach-Zehnder builder.
//
// Four modes: "src" (input rail), "up" / "low" (the two arms), "out" (the
// bright output rail). Layout, step by step:
//   0   splitter r1 on (src, low)
//   1   routing mirror src -> up, plain mirror on low
//   2.. arm slots (free propagation; the object absorber sits in one slot)
//   n   plain mirror on up, routing mirror low -> out
//   n+1 recombiner r2 on (up, out)        [omitted in the open configuration]
//   n+2 detectors  D1 -> out, D2 -> up
//
// With r2 = 1 - r1 the empty interferometer cancels exactly on the upper
// rail, so D2 is the dark port and D1 collects everything. In this
// convention the derived matching phase is identically zero.
// ---------------------------------------------------------------------------

struct MziSpec {
  double r1 = 0.5;
  /// Second-splitter reflectivity; defaults to the matched value 1 - r1.
  std::optional<double> r2;
  /// Absorber in the lower arm; 0 = opaque bomb, absent = empty interferometer.
  std::optional<Complex> object_t;
  int arm_steps = 3;
  /// Arm slot (0-based) holding the object.
  int object_step = 1;
  /// False: open (Wheeler) configuration without the recombiner.
  bool second_splitter = true;
};

struct MziCircuit {
  Circuit circuit;
  double r1 = 0.5;
  double r2 = 0.5;
  bool matched = false;
  /// Arm phase required for the dark port to cancel; zero in this convention.
  double matching_phase = 0.0;
  /// Trajectory cuts (state after k steps) at which amplitudes sit in the arms.
  std::size_t first_arm_cut = 0;
  std::size_t last_arm_cut = 0;

  static constexpr const char* kSource = "src";
  static constexpr const char* kUpperArm = "up";
  static constexpr const char* kLowerArm = "low";
  static constexpr const char* kBrightRail = "out";
  static constexpr const char* kBrightDetector = "D1";
  static constexpr const char* kDarkDetector = "D2";
};

double matched_second_reflectivity(double r1);

MziCircuit build_mzi(const MziSpec& spec);
MziCircuit build_mzi(double r1, double r2, std::optional<Complex> object_t = std::nullopt);

}  // namespace ifm
