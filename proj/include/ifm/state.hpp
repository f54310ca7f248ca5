#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifm {

using Complex = std::complex<double>;

/// Live probability below this is treated as a measure-zero event: conditioning
/// on it (renormalization, post-selection) is rejected.
inline constexpr double kMeasureZeroThreshold = 1e-15;

/// Thrown when an operation conditions on an event of (numerically) zero
/// probability: renormalizing a fully absorbed state, post-selecting on a dark
/// detector, or an ABL selection with vanishing denominator.
class ConditioningError : public std::runtime_error {
public:
  explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

/// Ordered set of named spatial modes. Lookup by label is total over the
/// declared set; unknown labels are rejected with a diagnostic.
class ModeSpace {
public:
  explicit ModeSpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }

  bool contains(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;

  bool operator==(const ModeSpace& other) const { return labels_ == other.labels_; }
  bool operator!=(const ModeSpace& other) const { return !(*this == other); }

private:
  std::vector<std::string> labels_;
};

/// One branch of amplitude removed from the live state by an absorber.
/// The squared magnitude is the branch's measure (the probability weight of
/// the run ending there, e.g. an explosion).
struct AbsorptionRecord {
  std::string element_id;
  int time_step = 0;
  Complex amplitude{0.0, 0.0};
  double measure = 0.0;
};

/// Single-excitation pure state: one complex amplitude per live mode plus the
/// append-only ledger of absorbed branches. States prepared here and evolved
/// by the optical elements keep (live + ledger) probability equal to 1.
///
/// Values are immutable in practice: evolution functions take a state by
/// const reference and return a new one, so states can move freely between
/// threads.
class PureState {
public:
  PureState(ModeSpace space, std::vector<Complex> amplitudes,
            std::vector<AbsorptionRecord> ledger = {});

  const ModeSpace& space() const { return space_; }
  std::size_t size() const { return amplitudes_.size(); }

  Complex amplitude(std::size_t index) const { return amplitudes_.at(index); }
  Complex amplitude(const std::string& label) const {
    return amplitudes_[space_.index_of(label)];
  }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  const std::vector<AbsorptionRecord>& ledger() const { return ledger_; }

  void set_amplitude(std::size_t index, Complex value) { amplitudes_.at(index) = value; }
  void append_absorption(AbsorptionRecord record);

private:
  ModeSpace space_;
  std::vector<Complex> amplitudes_;
  std::vector<AbsorptionRecord> ledger_;
};

/// Basis state: amplitude 1 on the occupied mode, empty ledger.
PureState make_state(const ModeSpace& space, const std::string& occupied);

/// Equal real amplitudes on every mode, normalized. Empty ledger.
PureState make_uniform_state(const ModeSpace& space);

/// Probability over live modes only.
double live_probability(const PureState& state);

/// Live probability plus the total measure of all absorbed branches.
double total_probability(const PureState& state);

/// Total measure of the absorbed branches (the "explosion" weight).
double explosion_measure(const PureState& state);

struct Renormalized {
  PureState state;
  /// Live probability of the input, i.e. the probability of the event that
  /// was conditioned on.
  double condition_probability = 0.0;
};

/// Condition on survival: drop the ledger and rescale the live amplitudes to
/// unit norm. Rejects states whose live probability is measure-zero.
Renormalized renormalize_live(const PureState& state);

}  // namespace ifm
