#include <catch2/catch_amalgamated.hpp>
#include <string>

#include "pembeam/config.hpp"
#include "pembeam/dataset.hpp"

using Catch::Approx;
using namespace pembeam;

TEST_CASE("the bundled prototype config parses") {
  const auto cfg = parse_config(prototype_config_json());
  REQUIRE(cfg.measured.has_value());
  CHECK(cfg.measured->node_count() == 5);
  CHECK(cfg.measured->coupling(0) == Approx(0.122));
  CHECK(cfg.measured->capacitances(1) == Approx(53.75e-9));
  CHECK(cfg.measured->omega1 == Approx(2.0 * kPi * 20.44));
  CHECK(cfg.measured->mean_capacitance() == Approx(52.846e-9).epsilon(1e-6));
  CHECK(cfg.measured->chi().mean() == Approx(1.0).epsilon(1e-12));
  CHECK(cfg.network.kind == "rl");
  CHECK(cfg.network.alpha0 == 1.0);
  CHECK(cfg.network.alpha_n == -1.0);
  REQUIRE(cfg.network.line_inductance.has_value());
  CHECK(*cfg.network.line_inductance == Approx(130.5));
  REQUIRE(cfg.catalog.has_value());
  CHECK(cfg.catalog->capacitors.size() == 8);
  CHECK(cfg.hash() == fnv1a64(prototype_config_json()));
}

TEST_CASE("unknown keys are rejected with a field path") {
  const std::string bad = R"({
    "measured": {
      "coupling": [0.1, 0.2],
      "capacitances_f": [1e-9, 1e-9],
      "first_mode_hz": 20.0,
      "frst_mode_hz": 21.0
    }
  })";
  try {
    parse_config(bad);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("config.measured.frst_mode_hz") != std::string::npos);
    CHECK(msg.find("unknown key") != std::string::npos);
  }
}

TEST_CASE("frequency must be given in exactly one unit") {
  const std::string both = R"({
    "measured": {
      "coupling": [0.1, 0.2],
      "capacitances_f": [1e-9, 1e-9],
      "first_mode_hz": 20.0,
      "first_mode_rad_s": 125.0
    }
  })";
  REQUIRE_THROWS_AS(parse_config(both), ValidationError);

  const std::string rad = R"({
    "measured": {
      "coupling": [0.1, 0.2],
      "capacitances_f": [1e-9, 1e-9],
      "first_mode_rad_s": 125.0
    }
  })";
  CHECK(parse_config(rad).measured->omega1 == 125.0);
}

TEST_CASE("measured arrays must align") {
  const std::string bad = R"({
    "measured": {
      "coupling": [0.1, 0.2, 0.3],
      "capacitances_f": [1e-9, 1e-9],
      "first_mode_hz": 20.0
    }
  })";
  REQUIRE_THROWS_AS(parse_config(bad), ValidationError);
}

TEST_CASE("a physics-mode config parses into an assembly") {
  const std::string text = R"({
    "beam": {"length_m": 0.5, "bending_stiffness_nm2": 1.2, "mass_per_length_kg_m": 0.3},
    "transducers": [
      {"x_m": 0.05, "length_m": 0.04, "bending_stiffness_nm2": 0.5,
       "mass_per_length_kg_m": 0.08, "coupling_nm_v": 3e-4, "capacitance_f": 5e-8},
      {"x_m": 0.15, "length_m": 0.04, "bending_stiffness_nm2": 0.5,
       "mass_per_length_kg_m": 0.08, "coupling_nm_v": 3e-4, "capacitance_f": 5e-8}
    ],
    "actuator": {"x_m": 0.0, "length_m": 0.04, "bending_stiffness_nm2": 0.5,
                 "mass_per_length_kg_m": 0.08, "coupling_nm_v": 3e-4},
    "solver": {"elements_per_segment": 6, "modes": 4}
  })";
  const auto cfg = parse_config(text);
  REQUIRE(cfg.assembly.has_value());
  CHECK(cfg.assembly->transducers.size() == 2);
  REQUIRE(cfg.assembly->actuator.has_value());
  CHECK(cfg.solver.elements_per_segment == 6);
  CHECK(cfg.solver.modes == 4);
  CHECK_FALSE(cfg.measured.has_value());
}

TEST_CASE("configs without any input mode are rejected") {
  REQUIRE_THROWS_AS(parse_config(R"({"solver": {"modes": 3}})"), ValidationError);
  REQUIRE_THROWS_AS(parse_config("not json at all"), ValidationError);
  REQUIRE_THROWS_AS(parse_config("[1, 2, 3]"), ValidationError);
}

TEST_CASE("transducers without a beam section are rejected") {
  const std::string bad = R"({
    "measured": {"coupling": [0.1, 0.2], "capacitances_f": [1e-9, 1e-9],
                 "first_mode_hz": 20.0},
    "transducers": []
  })";
  REQUIRE_THROWS_AS(parse_config(bad), ValidationError);
}

TEST_CASE("field-level diagnostics carry the config prefix") {
  const std::string bad = R"({
    "measured": {"coupling": [0.1, 0.2], "capacitances_f": [1e-9, -1e-9],
                 "first_mode_hz": 20.0}
  })";
  try {
    parse_config(bad);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("config.measured.capacitances_f") != std::string::npos);
  }
}

TEST_CASE("network and damping validation") {
  const std::string base = R"({
    "measured": {"coupling": [0.1, 0.2], "capacitances_f": [1e-9, 1e-9],
                 "first_mode_hz": 20.0},
    )";
  REQUIRE_THROWS_AS(parse_config(base + R"("network": {"kind": "lc"}})"), ValidationError);
  REQUIRE_THROWS_AS(parse_config(base + R"("network": {"alpha0": 2.0}})"), ValidationError);
  REQUIRE_THROWS_AS(parse_config(base + R"("damping": [-0.1]})"), ValidationError);
  REQUIRE_THROWS_AS(parse_config(base + R"("solver": {"boundary_grid": 3}})"), ValidationError);

  const auto ok = parse_config(base + R"("damping": [0.01, 0.02]})");
  REQUIRE(ok.damping.size() == 2);
  CHECK(ok.damping[1] == 0.02);
}
