#include "ifm/elements.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace ifm {

namespace {

constexpr double kUnitSlack = 1e-12;

void check_reflectivity(const std::string& id, double r) {
  if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
    throw std::invalid_argument("beam splitter '" + id + "': reflectivity " +
                                std::to_string(r) + " outside [0, 1]");
  }
}

void check_transmission(const std::string& id, Complex t) {
  if (!std::isfinite(t.real()) || !std::isfinite(t.imag()) ||
      std::norm(t) > 1.0 + kUnitSlack) {
    throw std::invalid_argument("absorber '" + id + "': |t| exceeds 1");
  }
}

void check_mode(const ModeSpace& space, const std::string& id, const std::string& mode) {
  if (!space.contains(mode)) {
    throw std::invalid_argument("element '" + id + "': unknown mode '" + mode + "'");
  }
}

void validate_element(const ModeSpace& space, const OpticalElement& element) {
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          if (kind.mode_a == kind.mode_b) {
            throw std::invalid_argument("beam splitter '" + element.id +
                                        "' must couple two distinct modes");
          }
          check_mode(space, element.id, kind.mode_a);
          check_mode(space, element.id, kind.mode_b);
          check_reflectivity(element.id, kind.reflectivity);
        } else if constexpr (std::is_same_v<T, Mirror>) {
          check_mode(space, element.id, kind.mode);
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          check_mode(space, element.id, kind.mode);
          if (!std::isfinite(kind.phase)) {
            throw std::invalid_argument("phase shift '" + element.id + "': non-finite phase");
          }
        } else if constexpr (std::is_same_v<T, Absorber>) {
          check_mode(space, element.id, kind.mode);
          check_transmission(element.id, kind.transmission);
        } else if constexpr (std::is_same_v<T, DetectorSet>) {
          if (kind.monitors.empty()) {
            throw std::invalid_argument("detector set '" + element.id + "' is empty");
          }
          for (const auto& [name, mode] : kind.monitors) {
            if (name.empty()) {
              throw std::invalid_argument("detector set '" + element.id +
                                          "' has an unnamed detector");
            }
            check_mode(space, element.id, mode);
          }
        }
      },
      element.kind);
}

// new_a = sqrt(1-R) a + i sqrt(R) b ; new_b = i sqrt(R) a + sqrt(1-R) b
void splitter_forward(PureState& s, std::size_t a, std::size_t b, double r) {
  const double ct = std::sqrt(1.0 - r);
  const double st = std::sqrt(r);
  const Complex va = s.amplitude(a);
  const Complex vb = s.amplitude(b);
  s.set_amplitude(a, ct * va + Complex{0.0, st} * vb);
  s.set_amplitude(b, Complex{0.0, st} * va + ct * vb);
}

void splitter_adjoint(PureState& s, std::size_t a, std::size_t b, double r) {
  const double ct = std::sqrt(1.0 - r);
  const double st = std::sqrt(r);
  const Complex va = s.amplitude(a);
  const Complex vb = s.amplitude(b);
  s.set_amplitude(a, ct * va + Complex{0.0, -st} * vb);
  s.set_amplitude(b, Complex{0.0, -st} * va + ct * vb);
}

}  // namespace

std::vector<std::string> touched_modes(const OpticalElement& element) {
  return std::visit(
      [](const auto& kind) -> std::vector<std::string> {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          return {kind.mode_a, kind.mode_b};
        } else if constexpr (std::is_same_v<T, Mirror>) {
          return {kind.mode};
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          return {kind.mode};
        } else if constexpr (std::is_same_v<T, Absorber>) {
          return {kind.mode};
        } else {
          std::vector<std::string> modes;
          for (const auto& [name, mode] : kind.monitors) modes.push_back(mode);
          return modes;
        }
      },
      element.kind);
}

Circuit::Circuit(ModeSpace space, std::vector<std::vector<OpticalElement>> steps)
    : space_(std::move(space)), steps_(std::move(steps)) {
  for (std::size_t s = 0; s < steps_.size(); ++s) {
    std::set<std::string> used;
    for (const auto& element : steps_[s]) {
      validate_element(space_, element);
      for (const auto& mode : touched_modes(element)) {
        if (!used.insert(mode).second) {
          throw std::invalid_argument("step " + std::to_string(s) + ": mode '" + mode +
                                      "' touched by two elements");
        }
      }
    }
  }
}

std::optional<DetectorSet> Circuit::detectors() const {
  std::optional<DetectorSet> found;
  for (const auto& step : steps_) {
    for (const auto& element : step) {
      if (const auto* d = std::get_if<DetectorSet>(&element.kind)) {
        found = *d;
      }
    }
  }
  return found;
}

Circuit Circuit::concatenated(const Circuit& tail) const {
  if (space_ != tail.space_) {
    throw std::invalid_argument("cannot concatenate circuits over different mode spaces");
  }
  auto steps = steps_;
  steps.insert(steps.end(), tail.steps_.begin(), tail.steps_.end());
  return Circuit(space_, std::move(steps));
}

double OutcomeDistribution::prob(const std::string& detector) const {
  for (const auto& [name, p] : detector_probs) {
    if (name == detector) return p;
  }
  throw std::invalid_argument("no detector named '" + detector + "'");
}

double OutcomeDistribution::total() const {
  double t = explosion_prob + residual_prob;
  for (const auto& [name, p] : detector_probs) t += p;
  return t;
}

void apply_element_in_place(PureState& state, const OpticalElement& element, int time_step) {
  validate_element(state.space(), element);
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          splitter_forward(state, state.space().index_of(kind.mode_a),
                           state.space().index_of(kind.mode_b), kind.reflectivity);
        } else if constexpr (std::is_same_v<T, Mirror>) {
          const auto i = state.space().index_of(kind.mode);
          state.set_amplitude(i, Complex{0.0, 1.0} * state.amplitude(i));
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          const auto i = state.space().index_of(kind.mode);
          state.set_amplitude(i, std::polar(1.0, kind.phase) * state.amplitude(i));
        } else if constexpr (std::is_same_v<T, Absorber>) {
          const auto i = state.space().index_of(kind.mode);
          const Complex a = state.amplitude(i);
          const double keep = std::min(std::norm(kind.transmission), 1.0);
          const double branch = std::sqrt(1.0 - keep);
          const Complex removed = a * branch;
          state.set_amplitude(i, a * kind.transmission);
          if (std::norm(removed) > 0.0) {
            state.append_absorption(
                AbsorptionRecord{element.id, time_step, removed, std::norm(removed)});
          }
        } else if constexpr (std::is_same_v<T, DetectorSet>) {
          // Detector sets label modes for measurement; no action on the state.
        }
      },
      element.kind);
}

PureState apply_element(const PureState& state, const OpticalElement& element, int time_step) {
  PureState next = state;
  apply_element_in_place(next, element, time_step);
  return next;
}

PureState apply_element_adjoint(const PureState& state, const OpticalElement& element) {
  validate_element(state.space(), element);
  PureState next = state;
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          splitter_adjoint(next, state.space().index_of(kind.mode_a),
                           state.space().index_of(kind.mode_b), kind.reflectivity);
        } else if constexpr (std::is_same_v<T, Mirror>) {
          const auto i = state.space().index_of(kind.mode);
          next.set_amplitude(i, Complex{0.0, -1.0} * next.amplitude(i));
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          const auto i = state.space().index_of(kind.mode);
          next.set_amplitude(i, std::polar(1.0, -kind.phase) * next.amplitude(i));
        } else if constexpr (std::is_same_v<T, Absorber>) {
          const auto i = state.space().index_of(kind.mode);
          next.set_amplitude(i, std::conj(kind.transmission) * next.amplitude(i));
        } else if constexpr (std::is_same_v<T, DetectorSet>) {
        }
      },
      element.kind);
  return next;
}

RunResult run_circuit(const Circuit& circuit, const PureState& input) {
  if (input.space() != circuit.space()) {
    throw std::invalid_argument("input state space does not match circuit space");
  }
  std::vector<PureState> trajectory;
  trajectory.reserve(circuit.step_count());
  PureState current = input;
  int step_index = 0;
  for (const auto& step : circuit.steps()) {
    for (const auto& element : step) {
      apply_element_in_place(current, element, step_index);
    }
    trajectory.push_back(current);
    ++step_index;
  }
  return RunResult{current, std::move(trajectory)};
}

OutcomeDistribution measure(const PureState& final, const DetectorSet& detectors) {
  std::set<std::string> seen_modes;
  for (const auto& [name, mode] : detectors.monitors) {
    if (!final.space().contains(mode)) {
      throw std::invalid_argument("detector '" + name + "' watches unknown mode '" + mode + "'");
    }
    if (!seen_modes.insert(mode).second) {
      throw std::invalid_argument("two detectors watch mode '" + mode + "'");
    }
  }
  OutcomeDistribution dist;
  double detected = 0.0;
  for (const auto& [name, mode] : detectors.monitors) {
    const double p = std::norm(final.amplitude(mode));
    dist.detector_probs.emplace_back(name, p);
    detected += p;
  }
  dist.explosion_prob = explosion_measure(final);
  dist.residual_prob = live_probability(final) - detected;
  if (dist.residual_prob < 0.0) dist.residual_prob = 0.0;
  return dist;
}

double matched_second_reflectivity(double r1) { return 1.0 - r1; }

MziCircuit build_mzi(const MziSpec& spec) {
  check_reflectivity("BS1", spec.r1);
  const double r2 = spec.r2.value_or(matched_second_reflectivity(spec.r1));
  check_reflectivity("BS2", r2);
  if (spec.arm_steps < 1) {
    throw std::invalid_argument("interferometer needs at least one arm step");
  }
  if (spec.object_step < 0 || spec.object_step >= spec.arm_steps) {
    throw std::invalid_argument("object step outside the arm");
  }

  const std::string src = MziCircuit::kSource;
  const std::string up = MziCircuit::kUpperArm;
  const std::string low = MziCircuit::kLowerArm;
  const std::string out = MziCircuit::kBrightRail;

  std::vector<std::vector<OpticalElement>> steps;
  steps.push_back({OpticalElement{"BS1", BeamSplitter{src, low, spec.r1}}});
  steps.push_back({OpticalElement{"M_in", BeamSplitter{src, up, 1.0}},
                   OpticalElement{"M_low", Mirror{low}}});
  for (int k = 0; k < spec.arm_steps; ++k) {
    if (spec.object_t && k == spec.object_step) {
      steps.push_back({OpticalElement{"OBJ", Absorber{low, *spec.object_t}}});
    } else {
      steps.push_back({});
    }
  }
  steps.push_back({OpticalElement{"M_up", Mirror{up}},
                   OpticalElement{"M_out", BeamSplitter{low, out, 1.0}}});
  if (spec.second_splitter) {
    steps.push_back({OpticalElement{"BS2", BeamSplitter{up, out, r2}}});
  }
  steps.push_back({OpticalElement{
      "DET", DetectorSet{{{MziCircuit::kBrightDetector, out}, {MziCircuit::kDarkDetector, up}}}}});

  MziCircuit mzi{Circuit(ModeSpace({src, up, low, out}), std::move(steps))};
  mzi.r1 = spec.r1;
  mzi.r2 = r2;
  mzi.matched = spec.second_splitter && r2 == matched_second_reflectivity(spec.r1);
  mzi.matching_phase = 0.0;
  mzi.first_arm_cut = 2;
  mzi.last_arm_cut = 2 + static_cast<std::size_t>(spec.arm_steps);
  return mzi;
}

MziCircuit build_mzi(double r1, double r2, std::optional<Complex> object_t) {
  MziSpec spec;
  spec.r1 = r1;
  spec.r2 = r2;
  spec.object_t = object_t;
  return build_mzi(spec);
}

}  // namespace ifm
