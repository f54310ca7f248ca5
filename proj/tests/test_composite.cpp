#include <cmath>

#include "doctest.h"
#include "ifm/composite.hpp"

using namespace ifm;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CompositeState product_basis() {
  const ModeSpace sa({"a0", "a1"});
  const ModeSpace sb({"b0", "b1"});
  return tensor(make_state(sa, "a0"), make_state(sb, "b0"));
}

}  // namespace

TEST_CASE("tensor of basis states has a single unit pair amplitude") {
  const auto s = product_basis();
  CHECK(s.amplitude("a0", "b0") == Complex{1.0, 0.0});
  CHECK(s.amplitude("a1", "b1") == Complex{0.0, 0.0});
  CHECK(s.total_probability() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tensor of a split state spreads over two pairs") {
  const ModeSpace sa({"a0", "a1"});
  const ModeSpace sb({"b0"});
  const PureState split(sa, {Complex{kInvSqrt2, 0.0}, Complex{kInvSqrt2, 0.0}});
  const auto s = tensor(split, make_state(sb, "b0"));
  CHECK(std::abs(s.amplitude("a0", "b0") - Complex{kInvSqrt2, 0.0}) < 1e-15);
  CHECK(std::abs(s.amplitude("a1", "b0") - Complex{kInvSqrt2, 0.0}) < 1e-15);
}

TEST_CASE("tensor rejects ledgered inputs") {
  const ModeSpace sa({"a0", "a1"});
  PureState dirty = make_state(sa, "a0");
  dirty.append_absorption({"x", 0, Complex{0.0, 0.0}, 0.0});
  CHECK_THROWS_AS(tensor(dirty, make_state(sa, "a0")), std::invalid_argument);
}

TEST_CASE("apply_local acts on one factor only") {
  const auto s = product_basis();

  SUBCASE("a phase of zero changes nothing") {
    const auto t = apply_local(s, Factor::A, {"p", PhaseShift{"a0", 0.0}}, 0);
    CHECK(t.amplitude("a0", "b0") == Complex{1.0, 0.0});
  }

  SUBCASE("splitter on factor A equals tensor of (split A, B)") {
    const auto t = apply_local(s, Factor::A, {"bs", BeamSplitter{"a0", "a1", 0.5}}, 0);
    const ModeSpace sa({"a0", "a1"});
    const ModeSpace sb({"b0", "b1"});
    const auto split = apply_element(make_state(sa, "a0"), {"bs", BeamSplitter{"a0", "a1", 0.5}}, 0);
    const auto expected = tensor(split, make_state(sb, "b0"));
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        CHECK(std::abs(t.amplitude(a, b) - expected.amplitude(a, b)) < 1e-15);
      }
    }
  }

  SUBCASE("absorber on factor B collects from B pairs") {
    auto spread = apply_local(s, Factor::B, {"bs", BeamSplitter{"b0", "b1", 0.5}}, 0);
    const auto t = apply_local(spread, Factor::B, {"obj", Absorber{"b1", Complex{0.0, 0.0}}}, 1);
    CHECK(t.amplitude("a0", "b1") == Complex{0.0, 0.0});
    CHECK(t.explosion_measure() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(t.total_probability() == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("locality: A and B operations commute") {
    const OpticalElement on_a{"bs_a", BeamSplitter{"a0", "a1", 0.3}};
    const OpticalElement on_b{"bs_b", BeamSplitter{"b0", "b1", 0.7}};
    const auto ab = apply_local(apply_local(s, Factor::A, on_a, 0), Factor::B, on_b, 0);
    const auto ba = apply_local(apply_local(s, Factor::B, on_b, 0), Factor::A, on_a, 0);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        CHECK(std::abs(ab.amplitude(a, b) - ba.amplitude(a, b)) < 1e-12);
      }
    }
  }
}

TEST_CASE("coincidence_absorb moves exactly one pair to the ledger") {
  auto s = product_basis();
  s.set_amplitude(0, 0, Complex{0.5, 0.0});
  s.set_amplitude(0, 1, Complex{0.5, 0.0});
  s.set_amplitude(1, 0, Complex{0.5, 0.0});
  s.set_amplitude(1, 1, Complex{0.5, 0.0});

  const auto t = coincidence_absorb(s, "a1", "b1", 4);
  CHECK(t.amplitude("a1", "b1") == Complex{0.0, 0.0});
  CHECK(t.amplitude("a0", "b1") == Complex{0.5, 0.0});
  CHECK(t.explosion_measure() == doctest::Approx(0.25).epsilon(1e-14));

  SUBCASE("no-op on zero amplitude") {
    const auto u = coincidence_absorb(t, "a1", "b1", 5);
    CHECK(u.ledger().size() == t.ledger().size());
  }

  SUBCASE("idempotent") {
    const auto u = coincidence_absorb(coincidence_absorb(s, "a1", "b1", 4), "a1", "b1", 4);
    CHECK(u.explosion_measure() == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("nested interferometers: joint statistics and conditional record") {
  const auto report = nested_ifm(0.5);
  CHECK(report.p_both_dark == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(report.joint.prob("D1", "D1") == doctest::Approx(9.0 / 16.0).epsilon(1e-12));
  CHECK(report.joint.prob("D1", "D2") == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(report.joint.prob("D2", "D1") == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(report.joint.explosion_prob == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(report.joint.total() == doctest::Approx(1.0).epsilon(1e-12));

  REQUIRE(report.conditionals_defined);
  CHECK(report.abl_object == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.abl_photon == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.abl_both == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("nested interferometers without coupling stay dark-free") {
  const auto report = nested_ifm(0.5, false);
  CHECK(report.p_both_dark < 1e-15);
  CHECK_FALSE(report.conditionals_defined);
  CHECK(report.joint.prob("D1", "D1") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nested conditional bound holds off the symmetric point") {
  for (const double r : {0.2, 0.35, 0.5, 0.65, 0.8}) {
    const auto report = nested_ifm(r);
    if (!report.conditionals_defined) continue;
    CHECK(report.abl_both <= report.abl_object + 1e-10);
    CHECK(report.abl_both <= report.abl_photon + 1e-10);
    CHECK(report.joint.total() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("reduction: object pinned in the working area reproduces the single-particle run") {
  // Particle B sits in its lower arm the whole time; the photon's marginal
  // then matches the blocked single-interferometer statistics.
  MziSpec spec;
  const auto mzi = build_mzi(spec);
  const ModeSpace space_b({"stay", "low"});
  std::vector<CompositeStep> steps;
  for (std::size_t s = 0; s < mzi.circuit.steps().size(); ++s) {
    CompositeStep step;
    step.a_elements = mzi.circuit.steps()[s];
    if (s == 3) step.coincidences.push_back({MziCircuit::kLowerArm, "low"});
    steps.push_back(std::move(step));
  }
  const DetectorSet det_b{{{"B", "low"}}};
  CompositeCircuit circuit(mzi.circuit.space(), space_b, std::move(steps),
                           *mzi.circuit.detectors(), det_b);
  const auto input = tensor(make_state(mzi.circuit.space(), MziCircuit::kSource),
                            make_state(space_b, "low"));
  const auto run = run_composite(circuit, input);
  const auto joint = measure_joint(run.final, circuit.detectors_a(), circuit.detectors_b());
  CHECK(joint.prob("D1", "B") == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(joint.prob("D2", "B") == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(joint.explosion_prob == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("composite conservation along the nested run") {
  MziSpec spec;
  const auto mzi_a = build_mzi(spec);
  const auto mzi_b = build_mzi(spec);
  std::vector<CompositeStep> steps;
  for (std::size_t s = 0; s < mzi_a.circuit.steps().size(); ++s) {
    CompositeStep step;
    step.a_elements = mzi_a.circuit.steps()[s];
    step.b_elements = mzi_b.circuit.steps()[s];
    if (s == 3) step.coincidences.push_back({MziCircuit::kLowerArm, MziCircuit::kLowerArm});
    steps.push_back(std::move(step));
  }
  CompositeCircuit circuit(mzi_a.circuit.space(), mzi_b.circuit.space(), std::move(steps),
                           *mzi_a.circuit.detectors(), *mzi_b.circuit.detectors());
  const auto input = tensor(make_state(mzi_a.circuit.space(), MziCircuit::kSource),
                            make_state(mzi_b.circuit.space(), MziCircuit::kSource));
  const auto run = run_composite(circuit, input);
  for (const auto& state : run.trajectory) {
    CHECK(std::abs(state.total_probability() - 1.0) < 1e-12);
  }
}
