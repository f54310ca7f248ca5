#include "ifm/composite.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace ifm {

CompositeState::CompositeState(ModeSpace space_a, ModeSpace space_b,
                               std::vector<Complex> amplitudes,
                               std::vector<AbsorptionRecord> ledger)
    : space_a_(std::move(space_a)),
      space_b_(std::move(space_b)),
      amplitudes_(std::move(amplitudes)),
      ledger_(std::move(ledger)) {
  if (amplitudes_.size() != space_a_.size() * space_b_.size()) {
    throw std::invalid_argument("amplitude count does not match pair count");
  }
}

Complex CompositeState::amplitude(std::size_t a, std::size_t b) const {
  return amplitudes_.at(a * space_b_.size() + b);
}

Complex CompositeState::amplitude(const std::string& mode_a, const std::string& mode_b) const {
  return amplitude(space_a_.index_of(mode_a), space_b_.index_of(mode_b));
}

void CompositeState::set_amplitude(std::size_t a, std::size_t b, Complex value) {
  amplitudes_.at(a * space_b_.size() + b) = value;
}

double CompositeState::live_probability() const {
  double p = 0.0;
  for (const auto& amp : amplitudes_) p += std::norm(amp);
  return p;
}

double CompositeState::explosion_measure() const {
  double p = 0.0;
  for (const auto& rec : ledger_) p += rec.measure;
  return p;
}

double CompositeState::total_probability() const {
  return live_probability() + explosion_measure();
}

CompositeState tensor(const PureState& a, const PureState& b) {
  if (!a.ledger().empty() || !b.ledger().empty()) {
    throw std::invalid_argument("tensor factors must carry empty ledgers");
  }
  std::vector<Complex> amps(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      amps[i * b.size() + j] = a.amplitude(i) * b.amplitude(j);
    }
  }
  return CompositeState(a.space(), b.space(), std::move(amps));
}

namespace {

// Lift a single-factor map over all slices of the composite amplitudes. The
// slice for a fixed "other" index behaves exactly like a PureState of the
// acted-on factor, so the single-particle element code is reused verbatim.
template <typename Apply>
CompositeState lift(const CompositeState& state, Factor which, Apply apply_one) {
  const ModeSpace& acted = which == Factor::A ? state.space_a() : state.space_b();
  const ModeSpace& other = which == Factor::A ? state.space_b() : state.space_a();
  CompositeState next = state;
  for (std::size_t o = 0; o < other.size(); ++o) {
    std::vector<Complex> slice(acted.size());
    for (std::size_t m = 0; m < acted.size(); ++m) {
      slice[m] = which == Factor::A ? state.amplitude(m, o) : state.amplitude(o, m);
    }
    PureState part(acted, std::move(slice));
    PureState mapped = apply_one(part, other.label(o));
    for (std::size_t m = 0; m < acted.size(); ++m) {
      if (which == Factor::A) {
        next.set_amplitude(m, o, mapped.amplitude(m));
      } else {
        next.set_amplitude(o, m, mapped.amplitude(m));
      }
    }
    for (const auto& rec : mapped.ledger()) {
      next.append_absorption(rec);
    }
  }
  return next;
}

}  // namespace

CompositeState apply_local(const CompositeState& state, Factor which,
                           const OpticalElement& element, int time_step) {
  return lift(state, which, [&](const PureState& part, const std::string&) {
    return apply_element(part, element, time_step);
  });
}

CompositeState apply_local_adjoint(const CompositeState& state, Factor which,
                                   const OpticalElement& element) {
  return lift(state, which, [&](const PureState& part, const std::string&) {
    return apply_element_adjoint(part, element);
  });
}

CompositeState coincidence_absorb(const CompositeState& state, const std::string& mode_a,
                                  const std::string& mode_b, int time_step) {
  const std::size_t a = state.space_a().index_of(mode_a);
  const std::size_t b = state.space_b().index_of(mode_b);
  const Complex amp = state.amplitude(a, b);
  CompositeState next = state;
  if (std::norm(amp) > 0.0) {
    next.set_amplitude(a, b, Complex{0.0, 0.0});
    next.append_absorption(AbsorptionRecord{"coincidence(" + mode_a + "," + mode_b + ")",
                                            time_step, amp, std::norm(amp)});
  }
  return next;
}

CompositeCircuit::CompositeCircuit(ModeSpace space_a, ModeSpace space_b,
                                   std::vector<CompositeStep> steps, DetectorSet detectors_a,
                                   DetectorSet detectors_b)
    : space_a_(std::move(space_a)),
      space_b_(std::move(space_b)),
      steps_(std::move(steps)),
      detectors_a_(std::move(detectors_a)),
      detectors_b_(std::move(detectors_b)) {
  // Element validity is enforced on application; here only the coincidence
  // pairs are checked against the two spaces.
  for (const auto& step : steps_) {
    for (const auto& [ma, mb] : step.coincidences) {
      space_a_.index_of(ma);
      space_b_.index_of(mb);
    }
  }
}

CompositeRun run_composite(const CompositeCircuit& circuit, const CompositeState& input) {
  if (input.space_a() != circuit.space_a() || input.space_b() != circuit.space_b()) {
    throw std::invalid_argument("input state spaces do not match circuit spaces");
  }
  CompositeState current = input;
  std::vector<CompositeState> trajectory;
  trajectory.reserve(circuit.step_count());
  int index = 0;
  for (const auto& step : circuit.steps()) {
    for (const auto& element : step.a_elements) {
      current = apply_local(current, Factor::A, element, index);
    }
    for (const auto& element : step.b_elements) {
      current = apply_local(current, Factor::B, element, index);
    }
    for (const auto& [ma, mb] : step.coincidences) {
      current = coincidence_absorb(current, ma, mb, index);
    }
    trajectory.push_back(current);
    ++index;
  }
  return CompositeRun{current, std::move(trajectory)};
}

double JointOutcome::prob(const std::string& detector_a, const std::string& detector_b) const {
  for (const auto& [pair, p] : probs) {
    if (pair.first == detector_a && pair.second == detector_b) return p;
  }
  throw std::invalid_argument("no joint outcome (" + detector_a + ", " + detector_b + ")");
}

double JointOutcome::total() const {
  double t = explosion_prob + residual_prob;
  for (const auto& [pair, p] : probs) t += p;
  return t;
}

JointOutcome measure_joint(const CompositeState& final, const DetectorSet& detectors_a,
                           const DetectorSet& detectors_b) {
  std::set<std::string> seen_a;
  for (const auto& [name, mode] : detectors_a.monitors) {
    final.space_a().index_of(mode);
    if (!seen_a.insert(mode).second) {
      throw std::invalid_argument("two detectors watch mode '" + mode + "'");
    }
  }
  std::set<std::string> seen_b;
  for (const auto& [name, mode] : detectors_b.monitors) {
    final.space_b().index_of(mode);
    if (!seen_b.insert(mode).second) {
      throw std::invalid_argument("two detectors watch mode '" + mode + "'");
    }
  }
  JointOutcome joint;
  double detected = 0.0;
  for (const auto& [name_a, mode_a] : detectors_a.monitors) {
    for (const auto& [name_b, mode_b] : detectors_b.monitors) {
      const double p = std::norm(final.amplitude(mode_a, mode_b));
      joint.probs.push_back({{name_a, name_b}, p});
      detected += p;
    }
  }
  joint.explosion_prob = final.explosion_measure();
  joint.residual_prob = final.live_probability() - detected;
  if (joint.residual_prob < 0.0) joint.residual_prob = 0.0;
  return joint;
}

namespace {

CompositeState backward_initial(const CompositeCircuit& circuit, const std::string& mode_a,
                                const std::string& mode_b) {
  std::vector<Complex> amps(circuit.space_a().size() * circuit.space_b().size(),
                            Complex{0.0, 0.0});
  CompositeState state(circuit.space_a(), circuit.space_b(), std::move(amps));
  state.set_amplitude(circuit.space_a().index_of(mode_a), circuit.space_b().index_of(mode_b),
                      Complex{1.0, 0.0});
  return state;
}

// Backward state at every cut. Adjoint of a composite step applies the
// coincidence projector first (it acts last going forward), then the element
// adjoints.
std::vector<CompositeState> backward_states(const CompositeCircuit& circuit,
                                            const std::string& mode_a,
                                            const std::string& mode_b) {
  std::vector<CompositeState> cuts(circuit.step_count() + 1,
                                   backward_initial(circuit, mode_a, mode_b));
  CompositeState current = cuts.back();
  for (std::size_t s = circuit.step_count(); s-- > 0;) {
    const auto& step = circuit.steps()[s];
    for (const auto& [ma, mb] : step.coincidences) {
      const std::size_t a = current.space_a().index_of(ma);
      const std::size_t b = current.space_b().index_of(mb);
      current.set_amplitude(a, b, Complex{0.0, 0.0});
    }
    for (auto it = step.b_elements.rbegin(); it != step.b_elements.rend(); ++it) {
      current = apply_local_adjoint(current, Factor::B, *it);
    }
    for (auto it = step.a_elements.rbegin(); it != step.a_elements.rend(); ++it) {
      current = apply_local_adjoint(current, Factor::A, *it);
    }
    cuts[s] = current;
  }
  return cuts;
}

}  // namespace

double composite_abl(const CompositeCircuit& circuit, const CompositeState& input,
                     const std::string& detector_a, const std::string& detector_b,
                     std::size_t cut,
                     const std::vector<std::pair<std::string, std::string>>& projector_pairs) {
  if (cut > circuit.step_count()) {
    throw std::invalid_argument("cut beyond circuit end");
  }
  const auto it_a = circuit.detectors_a().monitors.find(detector_a);
  const auto it_b = circuit.detectors_b().monitors.find(detector_b);
  if (it_a == circuit.detectors_a().monitors.end() ||
      it_b == circuit.detectors_b().monitors.end()) {
    throw std::invalid_argument("unknown joint detector (" + detector_a + ", " + detector_b +
                                ")");
  }
  const auto run = run_composite(circuit, input);
  if (std::norm(run.final.amplitude(it_a->second, it_b->second)) <= kMeasureZeroThreshold) {
    throw ConditioningError("post-selection impossible: joint click (" + detector_a + ", " +
                            detector_b + ") has zero amplitude");
  }

  const CompositeState forward =
      cut == 0 ? input : run.trajectory.at(cut - 1);
  const CompositeState backward =
      backward_states(circuit, it_a->second, it_b->second).at(cut);

  std::vector<bool> inside(forward.size(), false);
  for (const auto& [ma, mb] : projector_pairs) {
    inside[forward.space_a().index_of(ma) * forward.space_b().size() +
           forward.space_b().index_of(mb)] = true;
  }
  Complex in{0.0, 0.0};
  Complex out{0.0, 0.0};
  for (std::size_t a = 0; a < forward.space_a().size(); ++a) {
    for (std::size_t b = 0; b < forward.space_b().size(); ++b) {
      const Complex term = std::conj(backward.amplitude(a, b)) * forward.amplitude(a, b);
      (inside[a * forward.space_b().size() + b] ? in : out) += term;
    }
  }
  const double p_in = std::norm(in);
  const double p_out = std::norm(out);
  if (p_in + p_out < kMeasureZeroThreshold) {
    throw ConditioningError("ABL undefined for this selection");
  }
  return p_in / (p_in + p_out);
}

NestedIfmReport nested_ifm(double reflectivity, bool coupled) {
  if (!(reflectivity > 0.0) || !(reflectivity < 1.0)) {
    throw std::invalid_argument("nested interferometer reflectivity must lie in (0, 1)");
  }
  MziSpec spec;
  spec.r1 = reflectivity;
  const MziCircuit mzi_a = build_mzi(spec);
  const MziCircuit mzi_b = build_mzi(spec);

  // Shared working area: both particles' lower arms cross in the middle arm
  // slot, an otherwise empty step that carries only the coincidence.
  const std::size_t shared_step = 3;
  std::vector<CompositeStep> steps;
  const auto& steps_a = mzi_a.circuit.steps();
  const auto& steps_b = mzi_b.circuit.steps();
  for (std::size_t s = 0; s < steps_a.size(); ++s) {
    CompositeStep step;
    step.a_elements = steps_a[s];
    step.b_elements = steps_b[s];
    if (coupled && s == shared_step) {
      step.coincidences.push_back({MziCircuit::kLowerArm, MziCircuit::kLowerArm});
    }
    steps.push_back(std::move(step));
  }
  CompositeCircuit circuit(mzi_a.circuit.space(), mzi_b.circuit.space(), std::move(steps),
                           *mzi_a.circuit.detectors(), *mzi_b.circuit.detectors());

  const CompositeState input = tensor(make_state(mzi_a.circuit.space(), MziCircuit::kSource),
                                      make_state(mzi_b.circuit.space(), MziCircuit::kSource));
  const auto run = run_composite(circuit, input);

  NestedIfmReport report;
  report.reflectivity = reflectivity;
  report.coupled = coupled;
  report.joint = measure_joint(run.final, circuit.detectors_a(), circuit.detectors_b());
  report.p_both_dark = report.joint.prob(MziCircuit::kDarkDetector, MziCircuit::kDarkDetector);

  if (report.p_both_dark > kMeasureZeroThreshold) {
    const std::string low = MziCircuit::kLowerArm;
    std::vector<std::pair<std::string, std::string>> object_in, photon_in, both_in;
    for (const auto& label : circuit.space_a().labels()) object_in.push_back({label, low});
    for (const auto& label : circuit.space_b().labels()) photon_in.push_back({low, label});
    both_in.push_back({low, low});

    const std::string dark = MziCircuit::kDarkDetector;
    const std::size_t cut = shared_step;  // just before the coincidence step
    report.abl_object = composite_abl(circuit, input, dark, dark, cut, object_in);
    report.abl_photon = composite_abl(circuit, input, dark, dark, cut, photon_in);
    report.abl_both = composite_abl(circuit, input, dark, dark, cut, both_in);
    report.conditionals_defined = true;
  } else {
    report.abl_object = report.abl_photon = report.abl_both =
        std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace ifm
