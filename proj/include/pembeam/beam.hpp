#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pembeam/errors.hpp"

namespace pembeam {

/// One surface-bonded transducer. Stiffness and mass add to the host beam over
/// [x, x + length]; the coupling coefficient converts terminal voltage to an
/// edge moment pair.
struct TransducerPatch {
  double x = 0.0;                // left edge coordinate, m
  double length = 0.0;           // patch length, m
  double stiffness = 0.0;        // added bending stiffness, N m^2
  double mass_per_length = 0.0;  // added mass per unit length, kg/m
  double coupling = 0.0;         // moment per unit voltage, N m / V
  double capacitance = 0.0;      // inherent capacitance, F
};

/// Driving patch; mechanically identical to a transducer but wired as an input.
struct ActuatorPatch {
  double x = 0.0;
  double length = 0.0;
  double stiffness = 0.0;
  double mass_per_length = 0.0;
  double coupling = 0.0;  // N m / V
};

struct BeamAssembly {
  double length = 0.0;           // m
  double stiffness = 0.0;        // host bending stiffness, N m^2
  double mass_per_length = 0.0;  // host mass per unit length, kg/m
  std::vector<TransducerPatch> transducers;
  std::optional<ActuatorPatch> actuator;
};

/// Piecewise-constant stiffness/mass profile with breakpoints at every patch edge.
struct PiecewiseProfile {
  std::vector<double> edges;            // size m+1, edges[0] = 0, edges[m] = length
  std::vector<double> stiffness;        // size m
  std::vector<double> mass_per_length;  // size m
  double total_mass = 0.0;              // kg

  std::size_t segment_count() const { return stiffness.size(); }
  double length() const { return edges.back(); }
};

namespace detail {

struct Interval {
  double lo, hi;
  std::string name;
};

inline void check_interval_inside(const Interval& iv, double length) {
  if (iv.lo < -1e-12 || iv.hi > length * (1.0 + 1e-12)) {
    throw ValidationError(iv.name + ": interval [" + std::to_string(iv.lo) + ", " +
                          std::to_string(iv.hi) + "] is not inside the beam [0, " +
                          std::to_string(length) + "]");
  }
}

inline void require_positive(double v, const std::string& name) {
  if (!(v > 0.0)) throw ValidationError(name + " must be strictly positive");
}

}  // namespace detail

inline void validate(const BeamAssembly& a) {
  detail::require_positive(a.length, "beam length");
  detail::require_positive(a.stiffness, "beam stiffness");
  detail::require_positive(a.mass_per_length, "beam mass per length");

  std::vector<detail::Interval> ivs;
  for (std::size_t i = 0; i < a.transducers.size(); ++i) {
    const auto& t = a.transducers[i];
    const std::string tag = "transducer " + std::to_string(i + 1);
    detail::require_positive(t.length, tag + " length");
    detail::require_positive(t.stiffness, tag + " stiffness");
    detail::require_positive(t.mass_per_length, tag + " mass per length");
    detail::require_positive(t.capacitance, tag + " capacitance");
    ivs.push_back({t.x, t.x + t.length, tag});
  }
  if (a.actuator) {
    const auto& p = *a.actuator;
    detail::require_positive(p.length, "actuator length");
    detail::require_positive(p.stiffness, "actuator stiffness");
    detail::require_positive(p.mass_per_length, "actuator mass per length");
    ivs.push_back({p.x, p.x + p.length, "actuator"});
  }
  for (const auto& iv : ivs) detail::check_interval_inside(iv, a.length);

  // patches may touch but must not overlap with positive measure
  auto sorted = ivs;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].lo < sorted[i - 1].hi - 1e-12 * a.length) {
      throw ValidationError("overlapping patches: " + sorted[i - 1].name + " and " +
                            sorted[i].name);
    }
  }
}

/// Builds the piecewise-constant k(x), rho(x) with breakpoints exactly at every
/// patch edge, and integrates the total mass.
inline PiecewiseProfile assemble_profile(const BeamAssembly& a) {
  validate(a);

  const double tol = 1e-12 * a.length;
  std::vector<double> edges{0.0, a.length};
  auto add_edge = [&](double x) {
    for (double e : edges) {
      if (std::abs(e - x) <= tol) return;
    }
    edges.push_back(x);
  };
  for (const auto& t : a.transducers) {
    add_edge(t.x);
    add_edge(t.x + t.length);
  }
  if (a.actuator) {
    add_edge(a.actuator->x);
    add_edge(a.actuator->x + a.actuator->length);
  }
  std::sort(edges.begin(), edges.end());

  PiecewiseProfile p;
  p.edges = edges;
  p.stiffness.resize(edges.size() - 1);
  p.mass_per_length.resize(edges.size() - 1);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double mid = 0.5 * (edges[s] + edges[s + 1]);
    double k = a.stiffness;
    double rho = a.mass_per_length;
    for (const auto& t : a.transducers) {
      if (mid > t.x && mid < t.x + t.length) {
        k += t.stiffness;
        rho += t.mass_per_length;
      }
    }
    if (a.actuator && mid > a.actuator->x && mid < a.actuator->x + a.actuator->length) {
      k += a.actuator->stiffness;
      rho += a.actuator->mass_per_length;
    }
    p.stiffness[s] = k;
    p.mass_per_length[s] = rho;
    p.total_mass += rho * (edges[s + 1] - edges[s]);
  }
  return p;
}

}  // namespace pembeam
