#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "pembeam/beam.hpp"

using Catch::Approx;
using namespace pembeam;

TEST_CASE("uniform beam profile has one segment") {
  const auto p = assemble_profile(fixtures::uniform_beam(2.0, 3.0, 0.5));
  REQUIRE(p.segment_count() == 1);
  CHECK(p.stiffness[0] == 3.0);
  CHECK(p.mass_per_length[0] == 0.5);
  CHECK(p.total_mass == Approx(1.0));
  CHECK(p.edges.front() == 0.0);
  CHECK(p.edges.back() == 2.0);
}

TEST_CASE("prototype geometry splits into covered and bare segments") {
  const auto a = fixtures::prototype_assembly(false);
  const auto p = assemble_profile(a);
  REQUIRE(p.segment_count() == 11);  // 5 covered, 6 bare

  int covered = 0;
  for (std::size_t s = 0; s < p.segment_count(); ++s) {
    if (p.stiffness[s] > a.stiffness) ++covered;
  }
  CHECK(covered == 5);
}

TEST_CASE("total mass matches the hand-summed segment masses") {
  const auto a = fixtures::prototype_assembly(false);
  const auto p = assemble_profile(a);

  // independent closed-form sum: host beam plus the added patch mass
  double expected = a.mass_per_length * a.length;
  for (const auto& t : a.transducers) expected += t.mass_per_length * t.length;
  CHECK(p.total_mass == Approx(expected).epsilon(1e-12));
}

TEST_CASE("actuator contributes stiffness and mass") {
  const auto with = assemble_profile(fixtures::prototype_assembly(true));
  const auto without = assemble_profile(fixtures::prototype_assembly(false));
  CHECK(with.segment_count() == 13);
  CHECK(with.total_mass > without.total_mass);
}

TEST_CASE("overlapping patches are rejected with the pair named") {
  auto a = fixtures::uniform_beam();
  TransducerPatch t{0.1, 0.2, 1.0, 1.0, 1.0, 1e-9};
  a.transducers.push_back(t);
  t.x = 0.25;  // overlaps [0.1, 0.3]
  a.transducers.push_back(t);
  try {
    assemble_profile(a);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("transducer 1") != std::string::npos);
    CHECK(msg.find("transducer 2") != std::string::npos);
  }
}

TEST_CASE("touching patches are allowed") {
  auto a = fixtures::uniform_beam();
  a.transducers.push_back({0.1, 0.2, 1.0, 1.0, 1.0, 1e-9});
  a.transducers.push_back({0.3, 0.2, 1.0, 1.0, 1.0, 1e-9});
  const auto p = assemble_profile(a);
  CHECK(p.segment_count() == 4);
}

TEST_CASE("patch outside the beam is rejected") {
  auto a = fixtures::uniform_beam();
  a.transducers.push_back({0.9, 0.2, 1.0, 1.0, 1.0, 1e-9});
  REQUIRE_THROWS_AS(assemble_profile(a), ValidationError);
}

TEST_CASE("actuator overlapping a transducer is rejected") {
  auto a = fixtures::uniform_beam();
  a.transducers.push_back({0.1, 0.2, 1.0, 1.0, 1.0, 1e-9});
  a.actuator = ActuatorPatch{0.2, 0.2, 1.0, 1.0, 1.0};
  REQUIRE_THROWS_AS(assemble_profile(a), ValidationError);
}

TEST_CASE("nonpositive physical values are rejected") {
  auto a = fixtures::uniform_beam();
  a.stiffness = 0.0;
  REQUIRE_THROWS_AS(assemble_profile(a), ValidationError);

  a = fixtures::uniform_beam();
  a.transducers.push_back({0.1, 0.2, 1.0, 1.0, 1.0, 0.0});  // zero capacitance
  REQUIRE_THROWS_AS(assemble_profile(a), ValidationError);
}
