#include "ifm/protocols.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ifm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_open_unit_interval(const char* name, double value) {
  if (!(value > 0.0) || !(value < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie strictly inside (0, 1)");
  }
}

}  // namespace

double EfficiencyReport::efficiency() const {
  const double conclusive = p_success + p_explosion;
  if (conclusive <= 0.0) return kNaN;
  return p_success / conclusive;
}

OutcomeDistribution ev_single_shot(double reflectivity, std::optional<Complex> object_t) {
  const MziCircuit mzi = build_mzi(reflectivity, matched_second_reflectivity(reflectivity),
                                   object_t);
  const auto run = run_circuit(mzi.circuit, make_state(mzi.circuit.space(), MziCircuit::kSource));
  return measure(run.final, *mzi.circuit.detectors());
}

EfficiencyReport ev_iterated(double reflectivity) {
  check_open_unit_interval("reflectivity", reflectivity);
  const auto shot = ev_single_shot(reflectivity, Complex{0.0, 0.0});
  const double per_success = shot.prob(MziCircuit::kDarkDetector);
  const double per_explosion = shot.explosion_prob;
  // A D1 click restarts the experiment, so conclusive outcomes split in the
  // per-shot ratio: sum over rounds of c^k (s + e) = (s + e) / (1 - c).
  const double conclusive = per_success + per_explosion;
  return EfficiencyReport{per_success / conclusive, per_explosion / conclusive, 0.0};
}

MonteCarloReport ev_iterated_monte_carlo(double reflectivity, std::uint64_t trials,
                                         std::uint64_t seed) {
  check_open_unit_interval("reflectivity", reflectivity);
  if (trials == 0) {
    throw std::invalid_argument("monte carlo needs at least one trial");
  }
  const auto shot = ev_single_shot(reflectivity, Complex{0.0, 0.0});
  const double per_success = shot.prob(MziCircuit::kDarkDetector);
  const double per_explosion = shot.explosion_prob;

  std::mt19937_64 rng(seed);
  const auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1), platform-stable
  };
  std::uint64_t successes = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    for (;;) {
      const double u = uniform();
      if (u < per_explosion) break;
      if (u < per_explosion + per_success) {
        ++successes;
        break;
      }
      // inconclusive: send another photon
    }
  }
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return MonteCarloReport{p, 1.0 - p, trials};
}

std::vector<std::pair<double, double>> efficiency_frontier(const std::vector<double>& r_grid) {
  std::vector<std::pair<double, double>> frontier;
  frontier.reserve(r_grid.size());
  for (const double r : r_grid) {
    frontier.emplace_back(r, ev_iterated(r).efficiency());
  }
  return frontier;
}

double ZenoConfig::effective_theta() const {
  if (theta) return *theta;
  return std::numbers::pi / (2.0 * static_cast<double>(cycles));
}

ZenoResult zeno_ifm(const ZenoConfig& config) {
  if (config.cycles < 1) {
    throw std::invalid_argument("cycle count must be at least 1");
  }
  const double theta = config.effective_theta();
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("coupling angle must be finite");
  }
  const double sin_theta = std::sin(theta);
  const double coupling_r = sin_theta * sin_theta;

  const std::string left = "left";
  const std::string right = "right";
  const OpticalElement coupler{"coupler", BeamSplitter{left, right, coupling_r}};
  const OpticalElement object{"object", Absorber{right, config.object_t}};

  PureState current = make_state(ModeSpace({left, right}), left);
  ZenoResult result;
  result.trace.reserve(static_cast<std::size_t>(config.cycles));
  double absorbed = 0.0;
  int step_index = 0;
  for (int cycle = 1; cycle <= config.cycles; ++cycle) {
    apply_element_in_place(current, coupler, step_index++);
    if (config.object_present) {
      const std::size_t before = current.ledger().size();
      apply_element_in_place(current, object, step_index++);
      for (std::size_t k = before; k < current.ledger().size(); ++k) {
        absorbed += current.ledger()[k].measure;
      }
    }
    result.trace.push_back(
        ZenoCycleSample{cycle, current.amplitude(left), current.amplitude(right), absorbed});
  }

  result.p_left = std::norm(current.amplitude(left));
  result.p_right = std::norm(current.amplitude(right));
  result.report.p_success = result.p_left;
  result.report.p_explosion = explosion_measure(current);
  result.report.p_inconclusive = result.p_right;
  return result;
}

CavityResult paul_pavicic(const CavityConfig& config) {
  const double r = config.mirror_reflectivity;
  if (!(r >= 0.0) || !(r < 1.0)) {
    throw std::invalid_argument("mirror reflectivity must lie in [0, 1)");
  }
  if (config.round_trips < 1) {
    throw std::invalid_argument("round-trip budget must be at least 1");
  }

  CavityResult result;
  if (config.object_present) {
    // The object eats anything entering the cavity; only the first-surface
    // reflection comes back.
    result.p_reflect = r * r;
    result.p_absorb = 1.0 - r * r;
    return result;
  }

  // On resonance, each round trip leaks another t^2 r^{2m} into the
  // transmitted sum; the inside-reflection sign makes the reflected sum
  // cancel the first-surface bounce as the budget grows.
  const double t_sq = 1.0 - r * r;
  double geometric = 0.0;
  double pass = 1.0;
  for (int m = 0; m < config.round_trips; ++m) {
    geometric += pass;
    pass *= r * r;
  }
  const double amp_transmit = t_sq * geometric;
  const double amp_reflect = r - t_sq * r * geometric;
  result.p_transmit = amp_transmit * amp_transmit;
  result.p_reflect = amp_reflect * amp_reflect;
  result.p_residual = 1.0 - result.p_transmit - result.p_reflect;
  if (result.p_residual < 0.0) result.p_residual = 0.0;
  return result;
}

NullResultUpdate negative_result_update(const PureState& state,
                                        const std::vector<std::string>& covered) {
  if (covered.empty()) {
    throw std::invalid_argument("covered set must be nonempty");
  }
  std::vector<bool> is_covered(state.size(), false);
  for (const auto& mode : covered) {
    is_covered[state.space().index_of(mode)] = true;
  }
  std::size_t covered_count = 0;
  for (const bool c : is_covered) covered_count += c ? 1 : 0;
  if (covered_count == state.size()) {
    throw std::invalid_argument("covered set must be a proper subset of the modes");
  }

  const double total = total_probability(state);
  PureState projected = state;
  for (std::size_t m = 0; m < state.size(); ++m) {
    if (is_covered[m]) projected.set_amplitude(m, Complex{0.0, 0.0});
  }
  const double surviving = live_probability(projected);
  if (surviving <= kMeasureZeroThreshold) {
    throw ConditioningError("conditioning on measure-zero event: detector covers everything");
  }
  const auto renorm = renormalize_live(projected);
  return NullResultUpdate{renorm.state, surviving / total};
}

namespace {

// Composite Simpson over [a, b].
template <typename F>
double integrate(F f, double a, double b, int intervals) {
  if (intervals % 2 != 0) ++intervals;
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) {
    sum += f(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

}  // namespace

DickeResult dicke_energy_shift(int n_basis) {
  if (n_basis < 1) {
    throw std::invalid_argument("need at least one basis level");
  }
  const double pi = std::numbers::pi;
  // Unit box on [0, 1]; illuminated half is [1/2, 1]. Confined, renormalized
  // state: 2 sin(pi x) on [0, 1/2].
  std::vector<double> coeff(static_cast<std::size_t>(n_basis), 0.0);
  for (int n = 1; n <= n_basis; ++n) {
    const auto integrand = [n, pi](double x) {
      return 2.0 * std::sin(pi * x) * std::sqrt(2.0) * std::sin(n * pi * x);
    };
    const int intervals = std::max(512, 64 * n);
    coeff[static_cast<std::size_t>(n - 1)] = integrate(integrand, 0.0, 0.5, intervals);
  }

  double captured = 0.0;
  double weighted = 0.0;
  for (int n = 1; n <= n_basis; ++n) {
    const double c2 = coeff[static_cast<std::size_t>(n - 1)] * coeff[static_cast<std::size_t>(n - 1)];
    captured += c2;
    weighted += c2 * static_cast<double>(n) * static_cast<double>(n);
  }

  DickeResult result;
  result.n_basis = n_basis;
  result.e_before = 1.0;
  result.captured_norm = captured;
  result.e_after = weighted / captured;
  result.converged = n_basis >= 2;
  return result;
}

namespace {

IrradiationReport make_irradiation(double absorbed, double detection, Complex object_t) {
  IrradiationReport report;
  report.p_absorbed = absorbed;
  report.p_detection = detection;
  if (std::norm(object_t) >= 1.0 - 1e-12) {
    report.defined = false;
    report.absorbed_per_detection = kNaN;
  } else {
    report.defined = true;
    report.absorbed_per_detection = absorbed / detection;
  }
  return report;
}

}  // namespace

IrradiationReport irradiation_metric_ev(double reflectivity, Complex object_t) {
  const auto shot = ev_single_shot(reflectivity, object_t);
  return make_irradiation(shot.explosion_prob, shot.prob(MziCircuit::kDarkDetector), object_t);
}

IrradiationReport irradiation_metric_zeno(int cycles, Complex object_t) {
  ZenoConfig config;
  config.cycles = cycles;
  config.object_present = true;
  config.object_t = object_t;
  const auto zeno = zeno_ifm(config);
  return make_irradiation(zeno.report.p_explosion, zeno.report.p_success, object_t);
}

}  // namespace ifm
