#include "ifm/tsvf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ifm {

AmplitudeGrid::AmplitudeGrid(ModeSpace space, std::size_t cuts)
    : space_(std::move(space)), cuts_(cuts), values_(space_.size() * cuts, Complex{0.0, 0.0}) {}

Complex AmplitudeGrid::at(std::size_t mode, std::size_t cut) const {
  return values_.at(mode * cuts_ + cut);
}

Complex AmplitudeGrid::at(const std::string& mode, std::size_t cut) const {
  return at(space_.index_of(mode), cut);
}

void AmplitudeGrid::set(std::size_t mode, std::size_t cut, Complex value) {
  values_.at(mode * cuts_ + cut) = value;
}

std::vector<Complex> AmplitudeGrid::column(std::size_t cut) const {
  std::vector<Complex> col(space_.size());
  for (std::size_t m = 0; m < space_.size(); ++m) col[m] = at(m, cut);
  return col;
}

double TraceMap::at(std::size_t mode, std::size_t cut) const {
  return values.at(mode * cuts + cut);
}

double TraceMap::at(const std::string& mode, std::size_t cut) const {
  return at(space.index_of(mode), cut);
}

double TraceMap::max_on_mode(const std::string& mode) const {
  const std::size_t m = space.index_of(mode);
  double best = 0.0;
  for (std::size_t c = 0; c < cuts; ++c) best = std::max(best, at(m, c));
  return best;
}

AmplitudeGrid forward_grid(const Circuit& circuit, const PureState& input) {
  const auto run = run_circuit(circuit, input);
  AmplitudeGrid grid(circuit.space(), circuit.step_count() + 1);
  for (std::size_t m = 0; m < input.size(); ++m) grid.set(m, 0, input.amplitude(m));
  for (std::size_t s = 0; s < run.trajectory.size(); ++s) {
    for (std::size_t m = 0; m < input.size(); ++m) {
      grid.set(m, s + 1, run.trajectory[s].amplitude(m));
    }
  }
  return grid;
}

namespace {

std::string postselected_mode(const Circuit& circuit, const std::string& postselected) {
  const auto detectors = circuit.detectors();
  if (!detectors) {
    throw std::invalid_argument("circuit has no detector set to post-select on");
  }
  const auto it = detectors->monitors.find(postselected);
  if (it == detectors->monitors.end()) {
    throw std::invalid_argument("no detector named '" + postselected + "'");
  }
  return it->second;
}

void check_postselection_possible(const Circuit& circuit, const PureState& input,
                                  const std::string& mode, const std::string& postselected) {
  const auto run = run_circuit(circuit, input);
  if (std::norm(run.final.amplitude(mode)) <= kMeasureZeroThreshold) {
    throw ConditioningError("post-selection impossible: detector '" + postselected +
                            "' has zero amplitude");
  }
}

}  // namespace

AmplitudeGrid backward_propagate(const Circuit& circuit, const PureState& input,
                                 const std::string& postselected) {
  const std::string mode = postselected_mode(circuit, postselected);
  check_postselection_possible(circuit, input, mode, postselected);

  const std::size_t cuts = circuit.step_count() + 1;
  AmplitudeGrid grid(circuit.space(), cuts);
  PureState current = make_state(circuit.space(), mode);
  for (std::size_t m = 0; m < current.size(); ++m) {
    grid.set(m, cuts - 1, current.amplitude(m));
  }
  for (std::size_t s = circuit.step_count(); s-- > 0;) {
    const auto& step = circuit.steps()[s];
    // Adjoint of the step: element adjoints in reverse order (disjoint modes,
    // so the order is immaterial).
    for (auto it = step.rbegin(); it != step.rend(); ++it) {
      current = apply_element_adjoint(current, *it);
    }
    for (std::size_t m = 0; m < current.size(); ++m) {
      grid.set(m, s, current.amplitude(m));
    }
  }
  return grid;
}

TwoStateRecord two_state_record(const Circuit& circuit, const PureState& input,
                                const std::string& postselected) {
  AmplitudeGrid fwd = forward_grid(circuit, input);
  AmplitudeGrid bwd = backward_propagate(circuit, input, postselected);
  const std::size_t last = fwd.cuts() - 1;
  Complex overlap{0.0, 0.0};
  for (std::size_t m = 0; m < circuit.space().size(); ++m) {
    overlap += std::conj(bwd.at(m, last)) * fwd.at(m, last);
  }
  return TwoStateRecord{std::move(fwd), std::move(bwd), overlap, std::norm(overlap)};
}

TraceMap trace_map(const Circuit& circuit, const PureState& input,
                   const std::string& postselected) {
  const auto record = two_state_record(circuit, input, postselected);
  TraceMap map{circuit.space(), record.forward.cuts(), {}};
  map.values.resize(map.space.size() * map.cuts, 0.0);
  for (std::size_t m = 0; m < map.space.size(); ++m) {
    for (std::size_t c = 0; c < map.cuts; ++c) {
      map.values[m * map.cuts + c] = std::abs(record.forward.at(m, c) * record.backward.at(m, c));
    }
  }
  return map;
}

double abl_probability(const Circuit& circuit, const PureState& input,
                       const std::string& postselected, std::size_t cut,
                       const std::vector<std::string>& projector_modes) {
  const auto record = two_state_record(circuit, input, postselected);
  if (cut >= record.forward.cuts()) {
    throw std::invalid_argument("cut " + std::to_string(cut) + " beyond circuit end");
  }
  std::vector<bool> in_projector(circuit.space().size(), false);
  for (const auto& mode : projector_modes) {
    in_projector[circuit.space().index_of(mode)] = true;
  }
  Complex inside{0.0, 0.0};
  Complex outside{0.0, 0.0};
  for (std::size_t m = 0; m < circuit.space().size(); ++m) {
    const Complex term = std::conj(record.backward.at(m, cut)) * record.forward.at(m, cut);
    (in_projector[m] ? inside : outside) += term;
  }
  const double p_in = std::norm(inside);
  const double p_out = std::norm(outside);
  if (p_in + p_out < kMeasureZeroThreshold) {
    throw ConditioningError("ABL undefined for this selection");
  }
  return p_in / (p_in + p_out);
}

std::string trace_map_csv(const TraceMap& map) {
  std::ostringstream os;
  os << "mode";
  for (std::size_t c = 0; c < map.cuts; ++c) os << ",step_" << c;
  os << "\n";
  char buf[64];
  for (std::size_t m = 0; m < map.space.size(); ++m) {
    os << map.space.label(m);
    for (std::size_t c = 0; c < map.cuts; ++c) {
      std::snprintf(buf, sizeof(buf), "%.12g", map.at(m, c));
      os << ',' << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace ifm
