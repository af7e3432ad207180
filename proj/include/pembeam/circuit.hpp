#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "pembeam/errors.hpp"
#include "pembeam/network.hpp"

namespace pembeam {

/// L = R^2 C for the three-op-amp floating inductor.
inline double deboo_inductance(double resistance, double capacitance) {
  if (!(resistance > 0.0)) throw ValidationError("resistance must be positive");
  if (!(capacitance > 0.0)) throw ValidationError("capacitance must be positive");
  return resistance * resistance * capacitance;
}

/// L5 = (R1 R4 R6 / R2) C5 for the grounded impedance-converter inductor.
/// R3 only trims the quality factor and does not enter the inductance.
inline double antoniou_inductance(double r1, double r2, double r4, double r6, double c5) {
  for (double v : {r1, r2, r4, r6}) {
    if (!(v > 0.0)) throw ValidationError("resistances must be positive");
  }
  if (!(c5 > 0.0)) throw ValidationError("capacitance must be positive");
  return r1 * r4 * r6 * c5 / r2;
}

/// Standard 24-values-per-decade preferred mantissas.
inline const std::vector<double>& e24_mantissas() {
  static const std::vector<double> m{1.0, 1.1, 1.2, 1.3, 1.5, 1.6, 1.8, 2.0,
                                     2.2, 2.4, 2.7, 3.0, 3.3, 3.6, 3.9, 4.3,
                                     4.7, 5.1, 5.6, 6.2, 6.8, 7.5, 8.2, 9.1};
  return m;
}

struct ComponentCatalog {
  std::vector<double> resistors;   // ohm, sorted ascending, unique
  std::vector<double> capacitors;  // F, sorted ascending, unique
  std::string capacitor_dielectric = "polyester";
  double resistor_tolerance = 0.01;
  bool allow_capacitor_pairs = false;  // series/parallel composition of two values
};

inline ComponentCatalog default_catalog(std::vector<double> capacitors,
                                        double r_min = 1.0, double r_max = 1.0e7) {
  ComponentCatalog cat;
  for (double decade = 1.0; decade <= r_max * (1.0 + 1e-9); decade *= 10.0) {
    for (double m : e24_mantissas()) {
      const double v = m * decade;
      if (v >= r_min * (1.0 - 1e-9) && v <= r_max * (1.0 + 1e-9)) cat.resistors.push_back(v);
    }
  }
  std::sort(cat.resistors.begin(), cat.resistors.end());
  cat.capacitors = std::move(capacitors);
  std::sort(cat.capacitors.begin(), cat.capacitors.end());
  cat.capacitors.erase(std::unique(cat.capacitors.begin(), cat.capacitors.end()),
                       cat.capacitors.end());
  return cat;
}

inline void validate(const ComponentCatalog& cat) {
  auto check = [](const std::vector<double>& v, const std::string& name) {
    if (v.empty()) throw ValidationError(name + " list must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0)) throw ValidationError(name + " values must be positive");
      if (i > 0 && v[i] <= v[i - 1]) {
        throw ValidationError(name + " values must be sorted ascending and unique");
      }
    }
  };
  check(cat.resistors, "resistor");
  check(cat.capacitors, "capacitor");
}

enum class InductorTopology { DebooFloating, AntoniouGrounded };

struct CircuitRealization {
  InductorTopology topology = InductorTopology::DebooFloating;
  double target = 0.0;    // H
  double realized = 0.0;  // H
  double relative_error = 0.0;
  bool feasible = true;
  double achievable_min = 0.0;  // reported when infeasible
  double achievable_max = 0.0;

  // Deboo components
  double resistance = 0.0;
  double capacitance = 0.0;

  // Antoniou components; r3 is a quality-factor trim, not searched
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r6 = 0.0, c5 = 0.0;

  std::string capacitor_composition;   // "", "series" or "parallel"
  double capacitor_part_a = 0.0;       // set when composed
  double capacitor_part_b = 0.0;
};

namespace detail {

struct CapCandidate {
  double value = 0.0;
  std::string composition;
  double part_a = 0.0, part_b = 0.0;
  int distinct_parts = 1;
};

inline std::vector<CapCandidate> capacitor_candidates(const ComponentCatalog& cat) {
  std::vector<CapCandidate> out;
  for (double c : cat.capacitors) out.push_back({c, "", c, 0.0, 1});
  if (cat.allow_capacitor_pairs) {
    for (std::size_t i = 0; i < cat.capacitors.size(); ++i) {
      for (std::size_t j = i; j < cat.capacitors.size(); ++j) {
        const double a = cat.capacitors[i], b = cat.capacitors[j];
        const int distinct = i == j ? 1 : 2;
        out.push_back({a + b, "parallel", a, b, distinct});
        out.push_back({a * b / (a + b), "series", a, b, distinct});
      }
    }
  }
  return out;
}

// candidate ranking: error, then fewest distinct values, then total resistance,
// then a lexicographic component tuple so ties resolve deterministically
struct Rank {
  double error;
  int distinct;
  double total_resistance;
  std::vector<double> tuple;

  bool operator<(const Rank& o) const {
    if (error != o.error) return error < o.error;
    if (distinct != o.distinct) return distinct < o.distinct;
    if (total_resistance != o.total_resistance) return total_resistance < o.total_resistance;
    return tuple < o.tuple;
  }
};

inline int count_distinct(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return static_cast<int>(values.size());
}

// nearest catalog indices around value (at most two)
inline std::vector<std::size_t> neighbors(const std::vector<double>& sorted, double value) {
  std::vector<std::size_t> idx;
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
  if (it != sorted.end()) idx.push_back(static_cast<std::size_t>(it - sorted.begin()));
  if (it != sorted.begin()) idx.push_back(static_cast<std::size_t>(it - sorted.begin() - 1));
  return idx;
}

}  // namespace detail

/// Searches the catalog for component values realizing the target inductance.
/// Ties break to the fewest distinct component values, then the smallest total
/// resistance.
inline CircuitRealization synthesize(double target, InductorTopology topology,
                                     const ComponentCatalog& cat) {
  if (!(target > 0.0)) throw ValidationError("target inductance must be positive");
  validate(cat);

  const auto caps = detail::capacitor_candidates(cat);
  CircuitRealization best;
  best.topology = topology;
  best.target = target;
  bool found = false;
  detail::Rank best_rank{std::numeric_limits<double>::infinity(), 0, 0.0, {}};

  if (topology == InductorTopology::DebooFloating) {
    for (const auto& cc : caps) {
      const double r_ideal = std::sqrt(target / cc.value);
      for (std::size_t ri : detail::neighbors(cat.resistors, r_ideal)) {
        const double r = cat.resistors[ri];
        const double realized = deboo_inductance(r, cc.value);
        detail::Rank rank;
        rank.error = std::abs(realized - target) / target;
        std::vector<double> parts{r, cc.part_a};
        if (!cc.composition.empty()) parts.push_back(cc.part_b);
        rank.distinct = detail::count_distinct(parts);
        rank.total_resistance = r;
        rank.tuple = {r, cc.value, cc.part_a, cc.part_b};
        if (!found || rank < best_rank) {
          found = true;
          best_rank = rank;
          best.resistance = r;
          best.capacitance = cc.value;
          best.capacitor_composition = cc.composition;
          best.capacitor_part_a = cc.composition.empty() ? 0.0 : cc.part_a;
          best.capacitor_part_b = cc.composition.empty() ? 0.0 : cc.part_b;
          best.realized = realized;
          best.relative_error = rank.error;
        }
      }
    }
    const double r_lo = cat.resistors.front(), r_hi = cat.resistors.back();
    double c_lo = caps.front().value, c_hi = caps.front().value;
    for (const auto& cc : caps) {
      c_lo = std::min(c_lo, cc.value);
      c_hi = std::max(c_hi, cc.value);
    }
    best.achievable_min = r_lo * r_lo * c_lo;
    best.achievable_max = r_hi * r_hi * c_hi;
  } else {
    // sorted r1*r4 pair products for nearest-product lookup
    struct Pair {
      double product;
      double a, b;
    };
    std::vector<Pair> pairs;
    pairs.reserve(cat.resistors.size() * (cat.resistors.size() + 1) / 2);
    for (std::size_t i = 0; i < cat.resistors.size(); ++i) {
      for (std::size_t j = i; j < cat.resistors.size(); ++j) {
        pairs.push_back({cat.resistors[i] * cat.resistors[j], cat.resistors[i], cat.resistors[j]});
      }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& x, const Pair& y) { return x.product < y.product; });
    std::vector<double> products(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) products[i] = pairs[i].product;

    for (const auto& cc : caps) {
      const double t_ratio = target / cc.value;  // r1 r4 r6 / r2
      for (double r2 : cat.resistors) {
        for (double r6 : cat.resistors) {
          const double want = t_ratio * r2 / r6;  // r1 * r4
          for (std::size_t pi : detail::neighbors(products, want)) {
            const auto& pr = pairs[pi];
            const double realized = antoniou_inductance(pr.a, r2, pr.b, r6, cc.value);
            detail::Rank rank;
            rank.error = std::abs(realized - target) / target;
            std::vector<double> parts{pr.a, r2, pr.b, r6, cc.part_a};
            if (!cc.composition.empty()) parts.push_back(cc.part_b);
            rank.distinct = detail::count_distinct(parts);
            rank.total_resistance = pr.a + r2 + pr.b + r6;
            rank.tuple = {pr.a, r2, pr.b, r6, cc.value};
            if (!found || rank < best_rank) {
              found = true;
              best_rank = rank;
              best.r1 = pr.a;
              best.r2 = r2;
              best.r4 = pr.b;
              best.r6 = r6;
              best.c5 = cc.value;
              best.capacitor_composition = cc.composition;
              best.capacitor_part_a = cc.composition.empty() ? 0.0 : cc.part_a;
              best.capacitor_part_b = cc.composition.empty() ? 0.0 : cc.part_b;
              best.realized = realized;
              best.relative_error = rank.error;
            }
          }
        }
      }
    }
    const double r_lo = cat.resistors.front(), r_hi = cat.resistors.back();
    double c_lo = caps.front().value, c_hi = caps.front().value;
    for (const auto& cc : caps) {
      c_lo = std::min(c_lo, cc.value);
      c_hi = std::max(c_hi, cc.value);
    }
    best.achievable_min = r_lo * r_lo * r_lo / r_hi * c_lo;
    best.achievable_max = r_hi * r_hi * r_hi / r_lo * c_hi;
  }

  if (!found || target < best.achievable_min || target > best.achievable_max) {
    best.feasible = false;
  }
  return best;
}

/// Boundary parameter realised by a grounded inductor of value l5 against the
/// line inductance; bijection from [0, inf) onto [-1, 1).
inline double alpha_from_boundary_inductance(double l5, double line_inductance) {
  if (l5 < 0.0) throw ValidationError("boundary inductance must be nonnegative");
  if (!(line_inductance > 0.0)) throw ValidationError("line inductance must be positive");
  if (l5 == 0.0) return -1.0;
  return (l5 - line_inductance) / (l5 + line_inductance);
}

inline double boundary_inductance_from_alpha(double alpha, double line_inductance) {
  if (alpha < -1.0 || alpha >= 1.0) {
    throw ValidationError("boundary parameter must lie in [-1, 1) for a finite element");
  }
  return (1.0 + alpha) / (1.0 - alpha) * line_inductance;
}

struct TuningPoint {
  double l5 = 0.0;      // H
  double alpha_n = 0.0;
  double beta = 0.0;    // tuning at the fixed line inductance
  double gamma = 0.0;   // effective coupling
  double lambda1 = 0.0;
};

/// Sweep of the terminal inductor at fixed line inductance: retunes the
/// electrical resonance while barely moving the coupling.
inline std::vector<TuningPoint> tuning_curve(double line_inductance,
                                             const std::vector<double>& l5_values,
                                             const Eigen::VectorXd& gamma_row,
                                             const Eigen::VectorXd& chi, int n, double alpha0,
                                             double mean_capacitance, double omega1) {
  if (!(line_inductance > 0.0)) throw ValidationError("line inductance must be positive");
  if (!(mean_capacitance > 0.0)) throw ValidationError("capacitance must be positive");
  if (!(omega1 > 0.0)) throw ValidationError("reference frequency must be positive");

  std::vector<TuningPoint> out;
  out.reserve(l5_values.size());
  for (double l5 : l5_values) {
    if (l5 < 0.0 || l5 > 10.0 * line_inductance) {
      throw ValidationError("terminal inductance must lie in [0, 10 x line inductance]");
    }
    TuningPoint p;
    p.l5 = l5;
    p.alpha_n = alpha_from_boundary_inductance(l5, line_inductance);
    const auto modes = electric_modes(build_lattice_matrix(n, alpha0, p.alpha_n), chi);
    p.lambda1 = modes.lambda(0);
    p.beta = p.lambda1 / (line_inductance * mean_capacitance * omega1 * omega1);
    p.gamma = effective_coupling(gamma_row, chi, modes);
    out.push_back(p);
  }
  return out;
}

}  // namespace pembeam
