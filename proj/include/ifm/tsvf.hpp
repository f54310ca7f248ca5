#pragma once

#include <string>
#include <vector>

#include "ifm/elements.hpp"

namespace ifm {

/// Complex amplitudes over (mode, cut), where cut s is the moment after the
/// first s circuit steps. A circuit with S steps has S + 1 cuts.
class AmplitudeGrid {
public:
  AmplitudeGrid(ModeSpace space, std::size_t cuts);

  const ModeSpace& space() const { return space_; }
  std::size_t cuts() const { return cuts_; }

  Complex at(std::size_t mode, std::size_t cut) const;
  Complex at(const std::string& mode, std::size_t cut) const;
  void set(std::size_t mode, std::size_t cut, Complex value);

  /// The full state at one cut (live amplitudes only).
  std::vector<Complex> column(std::size_t cut) const;

private:
  ModeSpace space_;
  std::size_t cuts_;
  std::vector<Complex> values_;  // mode-major: values_[mode * cuts_ + cut]
};

/// Forward-evolving and backward-evolving amplitudes of a pre- and
/// post-selected run, sharing one (mode, cut) index set.
struct TwoStateRecord {
  AmplitudeGrid forward;
  AmplitudeGrid backward;
  /// <backward|forward>; constant across cuts.
  Complex overlap{0.0, 0.0};
  /// |overlap|^2 = probability of the post-selection on a forward run.
  double postselection_prob = 0.0;
};

/// |forward * backward| per (mode, cut). A zero entry certifies that the
/// run could leave no local record at that place and moment.
struct TraceMap {
  ModeSpace space;
  std::size_t cuts = 0;
  std::vector<double> values;  // mode-major, like AmplitudeGrid

  double at(std::size_t mode, std::size_t cut) const;
  double at(const std::string& mode, std::size_t cut) const;
  /// Largest entry on one mode across all cuts.
  double max_on_mode(const std::string& mode) const;
};

/// Forward amplitudes at every cut of the run.
AmplitudeGrid forward_grid(const Circuit& circuit, const PureState& input);

/// The post-selected detector's basis state evolved backward through the
/// adjoints of the circuit elements. Absorbers act through the conjugate of
/// their live transmission: post-selection on a detector excludes absorbed
/// branches. Rejects detectors the forward run cannot reach.
AmplitudeGrid backward_propagate(const Circuit& circuit, const PureState& input,
                                 const std::string& postselected);

TwoStateRecord two_state_record(const Circuit& circuit, const PureState& input,
                                const std::string& postselected);

TraceMap trace_map(const Circuit& circuit, const PureState& input,
                   const std::string& postselected);

/// Conditional probability that an intermediate projective test at `cut`
/// would find the system inside `projector_modes`, given both the
/// preparation and the post-selection. Dichotomic rule over {P, 1-P}.
double abl_probability(const Circuit& circuit, const PureState& input,
                       const std::string& postselected, std::size_t cut,
                       const std::vector<std::string>& projector_modes);

/// Grid as CSV: one row per mode, one column per cut.
std::string trace_map_csv(const TraceMap& map);

}  // namespace ifm
