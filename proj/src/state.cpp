#include "ifm/state.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ifm {

ModeSpace::ModeSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw std::invalid_argument("mode space needs at least one mode");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (label.empty()) {
      throw std::invalid_argument("mode labels must be nonempty");
    }
    if (!seen.insert(label).second) {
      throw std::invalid_argument("duplicate mode label '" + label + "'");
    }
  }
}

bool ModeSpace::contains(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t ModeSpace::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument("unknown mode '" + label + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

PureState::PureState(ModeSpace space, std::vector<Complex> amplitudes,
                     std::vector<AbsorptionRecord> ledger)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)), ledger_(std::move(ledger)) {
  if (amplitudes_.size() != space_.size()) {
    throw std::invalid_argument("amplitude count does not match mode count");
  }
  for (const auto& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("amplitudes must be finite");
    }
  }
}

void PureState::append_absorption(AbsorptionRecord record) {
  ledger_.push_back(std::move(record));
}

PureState make_state(const ModeSpace& space, const std::string& occupied) {
  std::vector<Complex> amps(space.size(), Complex{0.0, 0.0});
  amps[space.index_of(occupied)] = Complex{1.0, 0.0};
  return PureState(space, std::move(amps));
}

PureState make_uniform_state(const ModeSpace& space) {
  const double a = 1.0 / std::sqrt(static_cast<double>(space.size()));
  std::vector<Complex> amps(space.size(), Complex{a, 0.0});
  return PureState(space, std::move(amps));
}

double live_probability(const PureState& state) {
  double p = 0.0;
  for (const auto& a : state.amplitudes()) p += std::norm(a);
  return p;
}

double explosion_measure(const PureState& state) {
  double p = 0.0;
  for (const auto& rec : state.ledger()) p += rec.measure;
  return p;
}

double total_probability(const PureState& state) {
  return live_probability(state) + explosion_measure(state);
}

Renormalized renormalize_live(const PureState& state) {
  const double live = live_probability(state);
  if (live <= kMeasureZeroThreshold) {
    throw ConditioningError("conditioning on measure-zero event: live probability is " +
                            std::to_string(live));
  }
  const double scale = 1.0 / std::sqrt(live);
  std::vector<Complex> amps = state.amplitudes();
  for (auto& a : amps) a *= scale;
  return Renormalized{PureState(state.space(), std::move(amps)), live};
}

}  // namespace ifm
