#include <cmath>

#include "doctest.h"
#include "ifm/tsvf.hpp"

using namespace ifm;

namespace {

MziCircuit blocked_mzi(double r = 0.5, int arm_steps = 3, int object_step = 1) {
  MziSpec spec;
  spec.r1 = r;
  spec.object_t = Complex{0.0, 0.0};
  spec.arm_steps = arm_steps;
  spec.object_step = object_step;
  return build_mzi(spec);
}

PureState source_state(const MziCircuit& mzi) {
  return make_state(mzi.circuit.space(), MziCircuit::kSource);
}

}  // namespace

TEST_CASE("backward grid spreads over both arms when post-selecting the bright port") {
  const auto mzi = build_mzi(MziSpec{});
  const auto backward = backward_propagate(mzi.circuit, source_state(mzi), "D1");
  for (std::size_t cut = mzi.first_arm_cut; cut <= mzi.last_arm_cut; ++cut) {
    CHECK(std::abs(backward.at(MziCircuit::kUpperArm, cut)) > 0.1);
    CHECK(std::abs(backward.at(MziCircuit::kLowerArm, cut)) > 0.1);
  }
}

TEST_CASE("post-selecting the dark port of an empty matched interferometer is impossible") {
  const auto mzi = build_mzi(MziSpec{});
  CHECK_THROWS_AS(backward_propagate(mzi.circuit, source_state(mzi), "D2"), ConditioningError);
  CHECK_THROWS_AS(backward_propagate(mzi.circuit, source_state(mzi), "D9"),
                  std::invalid_argument);
}

TEST_CASE("blocked interferometer, dark port: backward amplitude vanishes before the object") {
  const auto mzi = blocked_mzi();
  const auto backward = backward_propagate(mzi.circuit, source_state(mzi), "D2");
  // The object sits in arm slot 1 (circuit step 3). The arm exists from cut 1
  // (after the input splitter) onward; upstream of the object the backward
  // wave is gone, downstream it is not. At cut 0 the mode is the unused
  // input port, where the backward wave spreads again.
  for (std::size_t cut = 1; cut <= 3; ++cut) {
    CHECK(std::abs(backward.at(MziCircuit::kLowerArm, cut)) < 1e-15);
  }
  CHECK(std::abs(backward.at(MziCircuit::kLowerArm, 4)) > 0.1);
}

TEST_CASE("overlap is cut-independent and post-selection probability matches the forward run") {
  const auto mzi = blocked_mzi();
  const auto record = two_state_record(mzi.circuit, source_state(mzi), "D2");
  CHECK(record.postselection_prob == doctest::Approx(0.25).epsilon(1e-12));
  for (std::size_t cut = 0; cut < record.forward.cuts(); ++cut) {
    Complex overlap{0.0, 0.0};
    for (std::size_t m = 0; m < mzi.circuit.space().size(); ++m) {
      overlap += std::conj(record.backward.at(m, cut)) * record.forward.at(m, cut);
    }
    CHECK(std::abs(overlap - record.overlap) < 1e-10);
  }
}

TEST_CASE("trace map vanishes on the whole lower arm for the blocked dark-port run") {
  for (int object_step = 0; object_step < 3; ++object_step) {
    const auto mzi = blocked_mzi(0.5, 3, object_step);
    const auto map = trace_map(mzi.circuit, source_state(mzi), "D2");
    CHECK(map.max_on_mode(MziCircuit::kLowerArm) < 1e-12);
    // and the photon does leave a trace on the upper arm
    CHECK(map.max_on_mode(MziCircuit::kUpperArm) > 0.1);
  }
}

TEST_CASE("open interferometer: no trace anywhere on the unselected arm") {
  MziSpec spec;
  spec.second_splitter = false;
  const auto mzi = build_mzi(spec);
  const auto map = trace_map(mzi.circuit, source_state(mzi), "D2");
  CHECK(map.max_on_mode(MziCircuit::kLowerArm) < 1e-15);
  CHECK(map.max_on_mode(MziCircuit::kUpperArm) > 0.5);
}

TEST_CASE("empty matched interferometer, bright port: positive trace in both arms") {
  const auto mzi = build_mzi(MziSpec{});
  const auto map = trace_map(mzi.circuit, source_state(mzi), "D1");
  for (std::size_t cut = mzi.first_arm_cut; cut <= mzi.last_arm_cut; ++cut) {
    CHECK(map.at(MziCircuit::kUpperArm, cut) > 0.1);
    CHECK(map.at(MziCircuit::kLowerArm, cut) > 0.1);
  }
}

TEST_CASE("ABL probabilities") {
  const auto mzi = blocked_mzi();
  const PureState input = source_state(mzi);
  const auto& space = mzi.circuit.space();

  SUBCASE("projector onto the full space gives 1") {
    const double p = abl_probability(mzi.circuit, input, "D2", 3, space.labels());
    CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("lower arm just before the object gives 0") {
    const double p = abl_probability(mzi.circuit, input, "D2", 3, {MziCircuit::kLowerArm});
    CHECK(p == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("complement rule") {
    for (std::size_t cut = 2; cut <= 5; ++cut) {
      const double on = abl_probability(mzi.circuit, input, "D2", cut, {MziCircuit::kUpperArm});
      const double off = abl_probability(
          mzi.circuit, input, "D2", cut,
          {MziCircuit::kSource, MziCircuit::kLowerArm, MziCircuit::kBrightRail});
      CHECK(on + off == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("trace zero implies ABL zero") {
    const auto map = trace_map(mzi.circuit, input, "D2");
    for (std::size_t cut = 0; cut < map.cuts; ++cut) {
      if (map.at(MziCircuit::kLowerArm, cut) < 1e-15) {
        const double p =
            abl_probability(mzi.circuit, input, "D2", cut, {MziCircuit::kLowerArm});
        CHECK(p < 1e-12);
      }
    }
  }
}

TEST_CASE("trace CSV has one row per mode and one column per cut") {
  const auto mzi = blocked_mzi();
  const auto map = trace_map(mzi.circuit, source_state(mzi), "D2");
  const auto csv = trace_map_csv(map);
  std::size_t newlines = 0;
  for (const char c : csv) newlines += c == '\n' ? 1 : 0;
  CHECK(newlines == mzi.circuit.space().size() + 1);
  CHECK(csv.rfind("mode,step_0,", 0) == 0);
}
