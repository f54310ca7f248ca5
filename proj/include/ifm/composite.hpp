#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ifm/elements.hpp"

namespace ifm {

enum class Factor { A, B };

/// Two-subsystem state: one complex amplitude per ordered pair of modes,
/// plus the shared absorption ledger (coincidence annihilations and local
/// absorbers both write to it).
class CompositeState {
public:
  CompositeState(ModeSpace space_a, ModeSpace space_b, std::vector<Complex> amplitudes,
                 std::vector<AbsorptionRecord> ledger = {});

  const ModeSpace& space_a() const { return space_a_; }
  const ModeSpace& space_b() const { return space_b_; }
  std::size_t size() const { return amplitudes_.size(); }

  Complex amplitude(std::size_t a, std::size_t b) const;
  Complex amplitude(const std::string& mode_a, const std::string& mode_b) const;
  void set_amplitude(std::size_t a, std::size_t b, Complex value);

  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  const std::vector<AbsorptionRecord>& ledger() const { return ledger_; }
  void append_absorption(AbsorptionRecord record) { ledger_.push_back(std::move(record)); }

  double live_probability() const;
  double explosion_measure() const;
  double total_probability() const;

private:
  ModeSpace space_a_;
  ModeSpace space_b_;
  std::vector<Complex> amplitudes_;  // row-major: [a * |B| + b]
  std::vector<AbsorptionRecord> ledger_;
};

/// Product state. Both inputs must carry empty ledgers.
CompositeState tensor(const PureState& a, const PureState& b);

/// Apply a single-particle element to one factor, for every fixed mode of the
/// other factor. Absorbers write one ledger record per affected pair.
CompositeState apply_local(const CompositeState& state, Factor which,
                           const OpticalElement& element, int time_step);

/// Live-sector adjoint of apply_local (no ledger writes).
CompositeState apply_local_adjoint(const CompositeState& state, Factor which,
                                   const OpticalElement& element);

/// Move the amplitude on exactly one (mode_a, mode_b) pair to the ledger:
/// both particles in the shared working area annihilate the branch.
CompositeState coincidence_absorb(const CompositeState& state, const std::string& mode_a,
                                  const std::string& mode_b, int time_step);

/// One composite time step: local elements on each factor, then any
/// coincidence absorptions. Steps of the two factors are aligned by index.
struct CompositeStep {
  std::vector<OpticalElement> a_elements;
  std::vector<OpticalElement> b_elements;
  std::vector<std::pair<std::string, std::string>> coincidences;
};

class CompositeCircuit {
public:
  CompositeCircuit(ModeSpace space_a, ModeSpace space_b, std::vector<CompositeStep> steps,
                   DetectorSet detectors_a, DetectorSet detectors_b);

  const ModeSpace& space_a() const { return space_a_; }
  const ModeSpace& space_b() const { return space_b_; }
  const std::vector<CompositeStep>& steps() const { return steps_; }
  std::size_t step_count() const { return steps_.size(); }
  const DetectorSet& detectors_a() const { return detectors_a_; }
  const DetectorSet& detectors_b() const { return detectors_b_; }

private:
  ModeSpace space_a_;
  ModeSpace space_b_;
  std::vector<CompositeStep> steps_;
  DetectorSet detectors_a_;
  DetectorSet detectors_b_;
};

struct CompositeRun {
  CompositeState final;
  std::vector<CompositeState> trajectory;
};

CompositeRun run_composite(const CompositeCircuit& circuit, const CompositeState& input);

struct JointOutcome {
  /// (detector_a, detector_b) -> probability, in detector order.
  std::vector<std::pair<std::pair<std::string, std::string>, double>> probs;
  double explosion_prob = 0.0;
  double residual_prob = 0.0;

  double prob(const std::string& detector_a, const std::string& detector_b) const;
  double total() const;
};

JointOutcome measure_joint(const CompositeState& final, const DetectorSet& detectors_a,
                           const DetectorSet& detectors_b);

/// ABL rule on the composite space: probability that an intermediate test at
/// `cut` finds the pair inside `projector_pairs`, conditioned on preparing
/// `input` and post-selecting the joint click (detector_a, detector_b).
double composite_abl(const CompositeCircuit& circuit, const CompositeState& input,
                     const std::string& detector_a, const std::string& detector_b,
                     std::size_t cut,
                     const std::vector<std::pair<std::string, std::string>>& projector_pairs);

/// Two matched interferometers sharing one working area: the probe photon's
/// lower arm crosses the arm of a second particle, and any branch with both
/// inside annihilates. Post-selecting both dark ports yields the paradoxical
/// conditional record: each particle separately certain to have been in the
/// working area, both together never.
struct NestedIfmReport {
  JointOutcome joint;
  double p_both_dark = 0.0;
  bool conditionals_defined = false;
  double abl_object = 0.0;
  double abl_photon = 0.0;
  double abl_both = 0.0;
  double reflectivity = 0.5;
  bool coupled = true;
};

NestedIfmReport nested_ifm(double reflectivity = 0.5, bool coupled = true);

}  // namespace ifm
