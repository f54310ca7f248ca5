#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ifm/protocols.hpp"

using namespace ifm;

namespace {

// Independent closed forms used as oracles below.
double iterated_efficiency(double r) { return (1.0 - r) / (2.0 - r); }
double zeno_survival(int n) {
  return std::pow(std::cos(std::numbers::pi / (2.0 * n)), 2.0 * n);
}
double cavity_reflect_amp(double r, int m) { return std::pow(r, 2 * m + 1); }
double cavity_transmit_amp(double r, int m) { return 1.0 - std::pow(r, 2 * m); }

// Half-box overlap coefficients of the confined ground state, analytic.
double dicke_coefficient(int n) {
  if (n == 1) return std::sqrt(2.0) / 2.0;
  if (n % 2 == 1) return 0.0;
  const int m = n / 2;
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;
  return sign * (4.0 * std::sqrt(2.0) / std::numbers::pi) * m / (4.0 * m * m - 1.0);
}

}  // namespace

TEST_CASE("single shot at R=1/2") {
  SUBCASE("opaque object: 1/4, 1/4, 1/2") {
    const auto dist = ev_single_shot(0.5, Complex{0.0, 0.0});
    CHECK(dist.prob("D1") == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(dist.prob("D2") == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(dist.explosion_prob == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(dist.residual_prob < 1e-15);
  }
  SUBCASE("empty: everything at the bright port") {
    const auto dist = ev_single_shot(0.5);
    CHECK(dist.prob("D1") == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dist.prob("D2") <= 1e-12);
  }
  SUBCASE("fully transparent object equals empty") {
    const auto with = ev_single_shot(0.5, Complex{1.0, 0.0});
    const auto without = ev_single_shot(0.5);
    CHECK(with.prob("D1") == doctest::Approx(without.prob("D1")).epsilon(1e-14));
    CHECK(with.prob("D2") == doctest::Approx(without.prob("D2")).epsilon(1e-14));
    CHECK(with.explosion_prob == 0.0);
  }
}

TEST_CASE("iterated detection efficiency matches the geometric-series closed form") {
  for (const double r : {0.5, 0.25, 0.1, 0.01}) {
    const auto report = ev_iterated(r);
    CHECK(report.efficiency() == doctest::Approx(iterated_efficiency(r)).epsilon(1e-12));
    CHECK(report.p_inconclusive == 0.0);
    CHECK(report.total() == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto half = ev_iterated(0.5);
  CHECK(half.p_success == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(half.p_explosion == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(ev_iterated(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ev_iterated(1.0), std::invalid_argument);
}

TEST_CASE("monte carlo agrees with the closed form within 3 sigma") {
  const std::uint64_t trials = 200000;
  for (const double r : {0.5, 0.1}) {
    const double p = iterated_efficiency(r);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    const auto mc = ev_iterated_monte_carlo(r, trials, 12345);
    CHECK(std::abs(mc.p_success - p) < 3.0 * sigma);
  }
  SUBCASE("seeded runs are reproducible") {
    const auto a = ev_iterated_monte_carlo(0.5, 1000, 9);
    const auto b = ev_iterated_monte_carlo(0.5, 1000, 9);
    CHECK(a.p_success == b.p_success);
  }
}

TEST_CASE("efficiency frontier falls with R and is best at the smallest grid point") {
  const auto frontier = efficiency_frontier({0.5, 0.25, 0.1});
  REQUIRE(frontier.size() == 3);
  CHECK(frontier[0].second == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(frontier[1].second > frontier[0].second);
  CHECK(frontier[2].second > frontier[1].second);
  CHECK(efficiency_frontier({}).empty());
}

TEST_CASE("zeno interrogation") {
  SUBCASE("empty cavities transfer the photon completely") {
    ZenoConfig config;
    config.cycles = 25;
    const auto result = zeno_ifm(config);
    CHECK(result.p_right == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(result.p_left < 1e-12);
    CHECK(result.report.p_explosion == 0.0);
  }

  SUBCASE("blocked: survival matches the closed form, step by step") {
    ZenoConfig config;
    config.cycles = 10;
    config.object_present = true;
    const auto result = zeno_ifm(config);
    CHECK(result.report.p_success == doctest::Approx(zeno_survival(10)).epsilon(1e-12));
    CHECK(result.report.p_explosion ==
          doctest::Approx(1.0 - zeno_survival(10)).epsilon(1e-12));
    CHECK(result.report.p_inconclusive == 0.0);
    CHECK(result.report.p_success == doctest::Approx(0.7805).epsilon(1e-3));
    REQUIRE(result.trace.size() == 10);
    // per-cycle survival follows cos^2k
    for (int k = 1; k <= 10; ++k) {
      const double expected = std::pow(std::cos(std::numbers::pi / 20.0), 2.0 * k);
      CHECK(std::norm(result.trace[static_cast<std::size_t>(k - 1)].left) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }

  SUBCASE("large N: explosion probability follows the pi^2/4N asymptote") {
    ZenoConfig config;
    config.cycles = 100;
    config.object_present = true;
    const auto result = zeno_ifm(config);
    const double asymptote = std::numbers::pi * std::numbers::pi / 400.0;
    CHECK(std::abs(result.report.p_explosion - asymptote) / asymptote < 0.05);
  }

  SUBCASE("success probability increases with N") {
    double previous = 0.0;
    for (const int n : {2, 5, 10, 50, 200}) {
      ZenoConfig config;
      config.cycles = n;
      config.object_present = true;
      const auto result = zeno_ifm(config);
      CHECK(result.report.p_success > previous);
      CHECK(result.report.total() == doctest::Approx(1.0).epsilon(1e-12));
      previous = result.report.p_success;
    }
  }

  SUBCASE("semi-transparent object leaves an inconclusive share") {
    ZenoConfig config;
    config.cycles = 20;
    config.object_present = true;
    config.object_t = Complex{0.7, 0.0};
    const auto result = zeno_ifm(config);
    CHECK(result.report.p_inconclusive > 0.0);
    CHECK(result.report.total() == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(zeno_ifm(ZenoConfig{0, {}, false, {}}), std::invalid_argument);
}

TEST_CASE("resonant cavity with a finite round-trip budget") {
  SUBCASE("implementation loop matches the independent closed forms") {
    for (const double r : {0.5, 0.8, 0.9, 0.99}) {
      for (const int m : {1, 3, 10, 200}) {
        const auto result = paul_pavicic(CavityConfig{r, m, false});
        const double ar = cavity_reflect_amp(r, m);
        const double at = cavity_transmit_amp(r, m);
        CHECK(result.p_reflect == doctest::Approx(ar * ar).epsilon(1e-12));
        CHECK(result.p_transmit == doctest::Approx(at * at).epsilon(1e-12));
        CHECK(result.total() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  SUBCASE("short budget leaves reflection; long budget is transparent") {
    const auto short_run = paul_pavicic(CavityConfig{0.9, 3, false});
    CHECK(short_run.p_reflect > 1e-4);
    const auto long_run = paul_pavicic(CavityConfig{0.9, 10000, false});
    CHECK(long_run.p_reflect < 1e-3);
    CHECK(long_run.p_transmit == doctest::Approx(1.0).epsilon(1e-3));
  }

  SUBCASE("blocked cavity reflects r^2 and absorbs the rest") {
    const auto result = paul_pavicic(CavityConfig{0.9, 50, true});
    CHECK(result.p_reflect == doctest::Approx(0.81).epsilon(1e-13));
    CHECK(result.p_absorb == doctest::Approx(0.19).epsilon(1e-13));
    CHECK(result.p_transmit == 0.0);
  }

  CHECK_THROWS_AS(paul_pavicic(CavityConfig{1.0, 3, false}), std::invalid_argument);
  CHECK_THROWS_AS(paul_pavicic(CavityConfig{0.9, 0, false}), std::invalid_argument);
}

TEST_CASE("null-result update") {
  std::vector<std::string> labels;
  for (int k = 0; k < 8; ++k) labels.push_back("s" + std::to_string(k));
  const ModeSpace space(labels);
  const PureState uniform = make_uniform_state(space);

  SUBCASE("covering half the sphere halves the wave and renormalizes the rest") {
    const auto update = negative_result_update(uniform, {"s0", "s1", "s2", "s3"});
    CHECK(update.p_null == doctest::Approx(0.5).epsilon(1e-13));
    for (int k = 0; k < 4; ++k) {
      CHECK(std::norm(update.state.amplitude(static_cast<std::size_t>(k))) == 0.0);
    }
    for (int k = 4; k < 8; ++k) {
      CHECK(std::norm(update.state.amplitude(static_cast<std::size_t>(k))) ==
            doctest::Approx(0.25).epsilon(1e-13));
    }
  }

  SUBCASE("survivor ratios are preserved") {
    PureState lopsided(space, {Complex{0.1, 0.0}, Complex{0.2, 0.0}, Complex{0.3, 0.0},
                               Complex{0.4, 0.0}, Complex{0.5, 0.0}, Complex{0.6, 0.0},
                               Complex{0.2, 0.0}, Complex{0.1, 0.0}});
    const auto renorm = renormalize_live(lopsided);
    const auto update = negative_result_update(renorm.state, {"s0", "s1"});
    const double before_ratio = std::norm(renorm.state.amplitude("s4")) /
                                std::norm(renorm.state.amplitude("s5"));
    const double after_ratio =
        std::norm(update.state.amplitude("s4")) / std::norm(update.state.amplitude("s5"));
    CHECK(after_ratio == doctest::Approx(before_ratio).epsilon(1e-12));
  }

  SUBCASE("covered modes with zero amplitude: p_null = 1, state unchanged") {
    PureState corner(space, {Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0},
                             Complex{0.0, 0.0}, Complex{0.5, 0.0}, Complex{0.5, 0.0},
                             Complex{0.5, 0.0}, Complex{0.5, 0.0}});
    const auto update = negative_result_update(corner, {"s0", "s1"});
    CHECK(update.p_null == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t m = 0; m < 8; ++m) {
      CHECK(std::abs(update.state.amplitude(m) - corner.amplitude(m)) < 1e-14);
    }
  }

  SUBCASE("degenerate covers are rejected") {
    CHECK_THROWS_AS(negative_result_update(uniform, {}), std::invalid_argument);
    CHECK_THROWS_AS(negative_result_update(uniform, labels), std::invalid_argument);
    // covering everything with amplitude is a measure-zero conditioning
    PureState loaded(space, {Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0},
                             Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0},
                             Complex{0.0, 0.0}, Complex{0.0, 0.0}});
    CHECK_THROWS_AS(negative_result_update(loaded, {"s0"}), ConditioningError);
  }
}

TEST_CASE("confined box state: spectral energy") {
  SUBCASE("overlap coefficients match the analytic values") {
    const auto result = dicke_energy_shift(8);
    // reconstruct captured norm from the analytic coefficients
    double captured = 0.0;
    double weighted = 0.0;
    for (int n = 1; n <= 8; ++n) {
      const double c = dicke_coefficient(n);
      captured += c * c;
      weighted += c * c * n * n;
    }
    CHECK(result.captured_norm == doctest::Approx(captured).epsilon(1e-9));
    CHECK(result.e_after == doctest::Approx(weighted / captured).epsilon(1e-9));
  }

  SUBCASE("confinement raises the energy") {
    const auto result = dicke_energy_shift(50);
    CHECK(result.e_before == 1.0);
    CHECK(result.e_after > result.e_before);
    CHECK(result.converged);
  }

  SUBCASE("energy is non-decreasing in the basis size") {
    double previous = 0.0;
    for (const int n : {2, 5, 10, 20, 50, 80}) {
      const auto result = dicke_energy_shift(n);
      CHECK(result.e_after >= previous - 1e-12);
      previous = result.e_after;
    }
  }

  SUBCASE("a single level cannot express the confined state") {
    const auto result = dicke_energy_shift(1);
    CHECK_FALSE(result.converged);
    CHECK(result.e_after == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.captured_norm == doctest::Approx(0.5).epsilon(1e-9));
  }

  SUBCASE("spectral energy equals the real-space kinetic quadrature") {
    const int n_basis = 50;
    const auto result = dicke_energy_shift(n_basis);
    // oracle route: analytic coefficients + Simpson quadrature of |psi'|^2
    std::vector<double> c(static_cast<std::size_t>(n_basis) + 1, 0.0);
    double captured = 0.0;
    for (int n = 1; n <= n_basis; ++n) {
      c[static_cast<std::size_t>(n)] = dicke_coefficient(n);
      captured += c[static_cast<std::size_t>(n)] * c[static_cast<std::size_t>(n)];
    }
    const int intervals = 200000;
    const double h = 1.0 / intervals;
    double sum = 0.0;
    for (int k = 0; k <= intervals; ++k) {
      const double x = k * h;
      double dpsi = 0.0;
      for (int n = 1; n <= n_basis; ++n) {
        dpsi += c[static_cast<std::size_t>(n)] * std::sqrt(2.0) * n * std::numbers::pi *
                std::cos(n * std::numbers::pi * x);
      }
      const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      sum += w * dpsi * dpsi;
    }
    const double kinetic = sum * h / 3.0 / (std::numbers::pi * std::numbers::pi) / captured;
    CHECK(std::abs(result.e_after - kinetic) / kinetic < 0.01);
  }

  CHECK_THROWS_AS(dicke_energy_shift(0), std::invalid_argument);
}

TEST_CASE("irradiation per detection") {
  SUBCASE("single shot with an opaque object: 0.5 absorbed per 0.25 detected") {
    const auto report = irradiation_metric_ev(0.5, Complex{0.0, 0.0});
    REQUIRE(report.defined);
    CHECK(report.absorbed_per_detection == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("zeno interrogation touches the object far less") {
    const auto report = irradiation_metric_zeno(100, Complex{0.0, 0.0});
    REQUIRE(report.defined);
    CHECK(report.absorbed_per_detection == doctest::Approx(0.025).epsilon(1e-2));
    CHECK(report.absorbed_per_detection < 0.03);
  }

  SUBCASE("fully transparent objects make the ratio meaningless") {
    const auto report = irradiation_metric_ev(0.5, Complex{1.0, 0.0});
    CHECK_FALSE(report.defined);
    CHECK(std::isnan(report.absorbed_per_detection));
  }
}
