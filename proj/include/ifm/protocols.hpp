#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifm/elements.hpp"

namespace ifm {

struct EfficiencyReport {
  /// Informative detection without absorption.
  double p_success = 0.0;
  double p_explosion = 0.0;
  double p_inconclusive = 0.0;

  /// p_success / (p_success + p_explosion); NaN when no run concludes.
  double efficiency() const;
  double total() const { return p_success + p_explosion + p_inconclusive; }
};

/// One pass through the matched interferometer. D2 (the dark port) is the
/// informative outcome; an absent object leaves it exactly empty.
OutcomeDistribution ev_single_shot(double reflectivity,
                                   std::optional<Complex> object_t = std::nullopt);

/// Repeat-until-conclusive aggregation of single shots with an opaque object:
/// a D1 click is inconclusive and triggers a re-run, so the aggregate splits
/// between informative detection and explosion.
EfficiencyReport ev_iterated(double reflectivity);

struct MonteCarloReport {
  double p_success = 0.0;
  double p_explosion = 0.0;
  std::uint64_t trials = 0;
};

/// Sampled version of ev_iterated: per-shot outcomes are drawn from the
/// simulated single-shot distribution until conclusive. Deterministic for a
/// fixed seed.
MonteCarloReport ev_iterated_monte_carlo(double reflectivity, std::uint64_t trials,
                                         std::uint64_t seed);

/// (R, efficiency) along a reflectivity grid.
std::vector<std::pair<double, double>> efficiency_frontier(const std::vector<double>& r_grid);

// ---------------------------------------------------------------------------

/// Two coupled cavities interrogated by repeated weak coupling. Each cycle
/// rotates left->right by theta; a blocking object in the right cavity
/// absorbs whatever leaks across, freezing the photon on the left.
struct ZenoConfig {
  int cycles = 1;
  /// Per-cycle coupling angle; defaults to pi / (2 * cycles).
  std::optional<double> theta;
  bool object_present = false;
  Complex object_t{0.0, 0.0};

  double effective_theta() const;
};

struct ZenoCycleSample {
  int cycle = 0;
  Complex left{0.0, 0.0};
  Complex right{0.0, 0.0};
  double absorbed_total = 0.0;
};

struct ZenoResult {
  EfficiencyReport report;
  double p_left = 0.0;
  double p_right = 0.0;
  std::vector<ZenoCycleSample> trace;
};

/// p_success is the probability of finding the photon in the left cavity at
/// the end (the "object present" verdict); p_inconclusive is the weight left
/// in the right cavity.
ZenoResult zeno_ifm(const ZenoConfig& config);

// ---------------------------------------------------------------------------

/// Resonant two-mirror cavity probed with a finite round-trip budget. Empty,
/// it transmits almost everything once the budget is large; with an object
/// inside only the first-surface reflection survives.
struct CavityConfig {
  double mirror_reflectivity = 0.9;  // amplitude reflectivity, in [0, 1)
  int round_trips = 1;
  bool object_present = false;
};

struct CavityResult {
  double p_reflect = 0.0;
  double p_transmit = 0.0;
  double p_absorb = 0.0;
  /// Amplitude still circulating when the budget runs out.
  double p_residual = 0.0;

  double total() const { return p_reflect + p_transmit + p_absorb + p_residual; }
};

CavityResult paul_pavicic(const CavityConfig& config);

// ---------------------------------------------------------------------------

struct NullResultUpdate {
  PureState state;
  /// Probability that the detector fired nothing.
  double p_null = 0.0;
};

/// Null-result state preparation: a detector covering part of the mode set
/// fires nothing, so the covered amplitudes are removed and the survivors
/// renormalized. The covered set must be a nonempty proper subset.
NullResultUpdate negative_result_update(const PureState& state,
                                        const std::vector<std::string>& covered);

// ---------------------------------------------------------------------------

/// Ground-state particle in a box whose right half is illuminated; observing
/// no scattering confines the particle to the dark half. Energies are in
/// units of the ground level. The sharp cut makes the spectral energy grow
/// without bound as levels are added, so e_after is reported per basis size
/// alongside the captured norm.
struct DickeResult {
  int n_basis = 0;
  double e_before = 1.0;
  double e_after = 1.0;
  /// Norm fraction of the confined state captured by the first n_basis levels.
  double captured_norm = 0.0;
  /// False when the basis cannot express a half-box state at all.
  bool converged = false;
};

DickeResult dicke_energy_shift(int n_basis);

// ---------------------------------------------------------------------------

struct IrradiationReport {
  double p_absorbed = 0.0;
  double p_detection = 0.0;
  /// Absorbed probability per informative detection.
  double absorbed_per_detection = 0.0;
  /// False for a fully transparent object (nothing is ever absorbed).
  bool defined = false;
};

IrradiationReport irradiation_metric_ev(double reflectivity, Complex object_t);
IrradiationReport irradiation_metric_zeno(int cycles, Complex object_t);

}  // namespace ifm
