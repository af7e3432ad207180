#pragma once

#include "pembeam/config.hpp"

namespace pembeam {

/// Measured parameters of the five-transducer cantilever prototype: the
/// per-transducer dimensionless couplings, the transducer capacitances, and
/// the first short-circuit resonance. Ships with the toolkit so the design
/// pipeline can be reproduced with a single command.
inline const MeasuredParams& prototype_measurements() {
  static const MeasuredParams m = [] {
    MeasuredParams p;
    p.coupling.resize(5);
    p.coupling << 122e-3, 9.54e-3, 5.77e-3, 2.98e-3, 0.083e-3;
    p.capacitances.resize(5);
    p.capacitances << 51.30e-9, 53.75e-9, 53.36e-9, 52.92e-9, 52.90e-9;
    p.omega1 = 2.0 * kPi * 20.44;
    return p;
  }();
  return m;
}

/// The same dataset as config text, used when no config file is supplied.
inline const char* prototype_config_json() {
  return R"({
  "measured": {
    "coupling": [0.122, 0.00954, 0.00577, 0.00298, 0.000083],
    "capacitances_f": [51.30e-9, 53.75e-9, 53.36e-9, 52.92e-9, 52.90e-9],
    "first_mode_hz": 20.44
  },
  "network": {
    "kind": "rl",
    "alpha0": 1.0,
    "alpha_n": -1.0,
    "line_inductance_h": 130.5
  },
  "catalog": {
    "capacitors_f": [1.0e-6, 2.2e-6, 4.7e-6, 10e-6, 17.9e-6, 22e-6, 32e-6, 47e-6],
    "allow_capacitor_pairs": false
  }
})";
}

}  // namespace pembeam
