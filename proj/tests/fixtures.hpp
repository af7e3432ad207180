#pragma once

#include <Eigen/Dense>

#include "pembeam/beam.hpp"
#include "pembeam/config.hpp"
#include "pembeam/dataset.hpp"

namespace fixtures {

// Aluminium cantilever with five bonded ceramic patch pairs and a driving
// patch near the clamp. Material constants are nominal handbook values; the
// geometry matches the bench prototype.
inline pembeam::BeamAssembly prototype_assembly(bool with_actuator = true) {
  pembeam::BeamAssembly a;
  a.length = 0.2736;
  a.stiffness = 0.769;        // E I of the 19.5 x 1.9 mm aluminium section
  a.mass_per_length = 0.100;  // rho A

  const double patch_len = 0.0356;
  const double gap = 0.010;
  const double k_p = 0.70;     // added bending stiffness of a bonded pair
  const double rho_p = 0.075;  // added mass per length
  const double g = 3.0e-4;     // N m / V
  const double caps[5] = {51.30e-9, 53.75e-9, 53.36e-9, 52.92e-9, 52.90e-9};

  const double x0 = 0.0456;  // first patch edge, past the driving patch
  for (int i = 0; i < 5; ++i) {
    pembeam::TransducerPatch t;
    t.x = x0 + i * (patch_len + gap);
    t.length = patch_len;
    t.stiffness = k_p;
    t.mass_per_length = rho_p;
    t.coupling = g;
    t.capacitance = caps[i];
    a.transducers.push_back(t);
  }
  if (with_actuator) {
    pembeam::ActuatorPatch p;
    p.x = 0.005;
    p.length = patch_len;
    p.stiffness = k_p;
    p.mass_per_length = rho_p;
    p.coupling = g;
    a.actuator = p;
  }
  return a;
}

inline pembeam::BeamAssembly uniform_beam(double length = 1.0, double k = 1.0,
                                          double rho = 1.0) {
  pembeam::BeamAssembly a;
  a.length = length;
  a.stiffness = k;
  a.mass_per_length = rho;
  return a;
}

inline const pembeam::MeasuredParams& prototype() {
  return pembeam::prototype_measurements();
}

}  // namespace fixtures
