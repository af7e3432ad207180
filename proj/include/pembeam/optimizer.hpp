#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pembeam/errors.hpp"
#include "pembeam/network.hpp"
#include "pembeam/numeric.hpp"
#include "pembeam/reduced.hpp"

namespace pembeam {

/// Boundary element implied by a boundary parameter: value = (1+a)/(1-a) times
/// the line value, open at a = 1, shorted at a = -1.
struct BoundaryElement {
  bool open = false;
  bool shorted = false;
  double value = 0.0;  // same unit as the line element; meaningless when open/shorted
};

inline BoundaryElement boundary_element(double alpha, double line_value) {
  BoundaryElement e;
  if (std::abs(1.0 - alpha) < 1e-12) {
    e.open = true;
  } else if (is_shorted(alpha)) {
    e.shorted = true;
  } else {
    e.value = (1.0 + alpha) / (1.0 - alpha) * line_value;
  }
  return e;
}

struct RlOptimum {
  double inductance = 0.0;       // H, tunes the electrical mode onto the mechanical one
  double resistance = 0.0;       // ohm, from the delta = sqrt(2/3) gamma tuning rule
  double resistance_flat = 0.0;  // ohm, equal-peak value (delta = sqrt(3/2) gamma)
  double beta = 1.0;
  double delta = 0.0;            // sqrt(2/3) gamma
  double delta_flat = 0.0;       // sqrt(3/2) gamma
  double gamma = 0.0;
  double lambda1 = 0.0;
  double predicted_hinf = 0.0;   // sqrt(2)/gamma at the equal-peak dissipation
  bool resistance_bounded = true;
};

/// RL line values that tune the first electrical mode to the first mechanical
/// frequency. Two dissipation conventions are reported: the customary tuning
/// rule delta = sqrt(2/3) gamma, and the equal-peak value sqrt(3/2) gamma whose
/// peak response is exactly sqrt(2)/gamma.
inline RlOptimum optimal_rl(double lambda1, double gamma, double capacitance, double omega1) {
  if (!(lambda1 > 0.0)) throw ValidationError("electric eigenvalue must be positive");
  if (!(capacitance > 0.0)) throw ValidationError("capacitance must be positive");
  if (!(omega1 > 0.0)) throw ValidationError("reference frequency must be positive");
  if (gamma < 0.0) throw ValidationError("modal coupling must be nonnegative");

  RlOptimum o;
  o.lambda1 = lambda1;
  o.gamma = gamma;
  o.inductance = lambda1 / (omega1 * omega1 * capacitance);
  o.beta = 1.0;
  if (gamma == 0.0) {
    o.resistance_bounded = false;
    o.resistance = std::numeric_limits<double>::infinity();
    o.resistance_flat = std::numeric_limits<double>::infinity();
    o.predicted_hinf = std::numeric_limits<double>::infinity();
    return o;
  }
  o.delta = design_dissipation_rl(gamma);
  o.delta_flat = flat_dissipation_rl(gamma);
  o.resistance = lambda1 / (omega1 * capacitance * o.delta);
  o.resistance_flat = lambda1 / (omega1 * capacitance * o.delta_flat);
  o.predicted_hinf = std::sqrt(2.0) / gamma;
  return o;
}

struct ROptimum {
  double resistance = 0.0;  // ohm
  double delta = 0.0;
  double gamma = 0.0;
  double lambda1 = 0.0;
  double predicted_hinf = 0.0;  // response at the fixed point
};

inline ROptimum optimal_r(double lambda1, double gamma, double capacitance, double omega1) {
  if (!(lambda1 > 0.0)) throw ValidationError("electric eigenvalue must be positive");
  if (!(capacitance > 0.0)) throw ValidationError("capacitance must be positive");
  if (!(omega1 > 0.0)) throw ValidationError("reference frequency must be positive");
  if (!(gamma > 0.0)) throw ValidationError("modal coupling must be positive");

  ROptimum o;
  o.lambda1 = lambda1;
  o.gamma = gamma;
  o.delta = optimal_dissipation_r(gamma);
  o.resistance = lambda1 / (omega1 * capacitance * o.delta);
  o.predicted_hinf = fixed_point_r(gamma).magnitude;
  return o;
}

/// Peak-response advantage of the tuned network over the resistive one.
inline double performance_ratio(double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("performance ratio needs gamma > 0");
  return std::sqrt(2.0 / (gamma * gamma) + 1.0);
}

/// Scan of the boundary parameter square.
///
/// The objective maximised over the grid is the first-mode coupling sum
/// |gamma_row . psi|; the reported coupling values scale that surface so the
/// peak equals the effective coupling of the optimal configuration.
struct BoundaryScan {
  std::vector<double> alpha0_grid;
  std::vector<double> alpha_n_grid;
  Eigen::MatrixXd coupling_sum_surface;  // |gamma_row . psi1|, NaN where skipped
  Eigen::MatrixXd gamma_surface;         // scaled surface, peak = gamma_max
  std::vector<std::pair<int, int>> skipped;
  double alpha0_opt = 0.0;
  double alpha_n_opt = 0.0;
  double gamma_max = 0.0;    // effective coupling at the optimum
  double lambda1_opt = 0.0;  // first electric eigenvalue at the optimum
};

inline BoundaryScan boundary_scan(const Eigen::VectorXd& gamma_row, const Eigen::VectorXd& chi,
                                  int n, int resolution = 81) {
  if (gamma_row.size() != n) throw ValidationError("coupling row length must equal node count");
  if (chi.size() != n) throw ValidationError("capacitance ratio length must equal node count");
  if (resolution < 11) throw ValidationError("boundary grid resolution must be >= 11 per axis");

  BoundaryScan scan;
  scan.alpha0_grid = linspace(-1.0, 1.0, resolution);
  scan.alpha_n_grid = linspace(-1.0, 1.0, resolution);
  scan.coupling_sum_surface.resize(resolution, resolution);

  double best = -1.0;
  int bi = 0, bj = 0;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const double a0 = scan.alpha0_grid[static_cast<std::size_t>(i)];
      const double an = scan.alpha_n_grid[static_cast<std::size_t>(j)];
      const auto lattice = build_lattice_matrix(n, a0, an);
      if (lattice.active.empty()) {
        scan.coupling_sum_surface(i, j) = std::numeric_limits<double>::quiet_NaN();
        scan.skipped.emplace_back(i, j);
        continue;
      }
      const auto modes = electric_modes(lattice, chi);
      const double s = std::abs(coupling_sum(gamma_row, modes));
      scan.coupling_sum_surface(i, j) = s;
      if (s > best) {  // ties resolve to the first cell in grid order
        best = s;
        bi = i;
        bj = j;
      }
    }
  }
  if (best < 0.0) throw NumericalError("boundary scan found no valid grid cell");

  scan.alpha0_opt = scan.alpha0_grid[static_cast<std::size_t>(bi)];
  scan.alpha_n_opt = scan.alpha_n_grid[static_cast<std::size_t>(bj)];
  const auto opt_modes =
      electric_modes(build_lattice_matrix(n, scan.alpha0_opt, scan.alpha_n_opt), chi);
  scan.lambda1_opt = opt_modes.lambda(0);
  scan.gamma_max = effective_coupling(gamma_row, chi, opt_modes);

  const double scale = best > 0.0 ? scan.gamma_max / best : 0.0;
  scan.gamma_surface = scan.coupling_sum_surface * scale;
  return scan;
}

}  // namespace pembeam
