#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pembeam/errors.hpp"
#include "pembeam/numeric.hpp"

namespace pembeam {

/// Dimensionless parameters of the two-degree-of-freedom coupled model.
///
///   beta  = lambda_1 / (L c omega_1^2)   electrical-to-mechanical tuning
///   delta = lambda_1 / (R c omega_1)     electrical modal damping
///   gamma                                 modal coupling, >= 0 by convention
struct ReducedParams {
  double beta = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double omega_ref = 1.0;  // rad/s, scales dimensionless frequency back to physical
};

inline ReducedParams reduced_params(std::optional<double> inductance, double resistance,
                                    double lambda1, double capacitance, double omega1,
                                    double gamma) {
  if (inductance && !(*inductance > 0.0)) {
    throw ValidationError("line inductance must be positive when present");
  }
  if (!(resistance > 0.0)) throw ValidationError("line resistance must be positive");
  if (lambda1 < 0.0) throw ValidationError("electric eigenvalue must be nonnegative");
  if (!(capacitance > 0.0)) throw ValidationError("capacitance must be positive");
  if (!(omega1 > 0.0)) throw ValidationError("reference frequency must be positive");

  ReducedParams p;
  p.beta = inductance ? lambda1 / (*inductance * capacitance * omega1 * omega1) : 0.0;
  p.delta = lambda1 / (resistance * capacitance * omega1);
  p.gamma = std::abs(gamma);
  p.omega_ref = omega1;
  return p;
}

/// Mechanical mobility of the coupled pair at dimensionless frequency w.
inline std::complex<double> mobility_rl(double w, const ReducedParams& p) {
  const std::complex<double> jw(0.0, w);
  const double b = p.beta, d = p.delta, g = p.gamma;
  const std::complex<double> num = -jw * (std::complex<double>(b - w * w, w * d));
  const std::complex<double> den(-w * w * w * w + w * w * (b + 1.0 + g * g) - b,
                                 d * w * w * w - d * w);
  return num / den;
}

/// Pure-resistive network response; the tuning term is absent.
inline std::complex<double> mobility_r(double w, const ReducedParams& p) {
  ReducedParams q = p;
  q.beta = 0.0;
  return mobility_rl(w, q);
}

struct FixedPointsRl {
  double omega_s = 0.0;
  double omega_t = 0.0;
  double magnitude_s = 0.0;  // |H| there, independent of the damping parameter
  double magnitude_t = 0.0;
};

namespace detail {

inline double mobility_mag(double w, double beta, double delta, double gamma) {
  ReducedParams p;
  p.beta = beta;
  p.delta = delta;
  p.gamma = gamma;
  return std::abs(mobility_rl(w, p));
}

}  // namespace detail

/// Locates the two damping-independent frequencies of the tuned response by
/// intersecting the magnitude curves at two distinct damping values, then
/// polishing each bracket by bisection.
inline FixedPointsRl fixed_points_rl(double beta, double gamma, double omega_hi = 3.0,
                                     int grid_points = 4001) {
  if (!(beta > 0.0)) throw ValidationError("fixed points need beta > 0");
  if (!(gamma > 0.0)) throw ValidationError("fixed points need gamma > 0");

  const double d1 = 0.05, d2 = 0.5;
  auto diff = [&](double w) {
    return detail::mobility_mag(w, beta, d1, gamma) - detail::mobility_mag(w, beta, d2, gamma);
  };

  // a crossing only counts when the two curves separate by more than roundoff,
  // relative to the local response level; near w -> 0 both magnitudes vanish
  // and their difference is pure noise
  const auto grid = linspace(omega_hi / grid_points, omega_hi, grid_points);
  std::vector<double> roots;
  double prev = diff(grid[0]);
  double prev_scale = detail::mobility_mag(grid[0], beta, d1, gamma);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = diff(grid[i]);
    const double scale = detail::mobility_mag(grid[i], beta, d1, gamma);
    const double significance = 1e-9 * (std::max(prev_scale, scale) + 1e-300);
    if (prev * cur < 0.0 && std::max(std::abs(prev), std::abs(cur)) > significance) {
      roots.push_back(bisect(diff, grid[i - 1], grid[i], 1e-13));
    }
    prev = cur;
    prev_scale = scale;
  }
  if (roots.size() != 2) {
    std::string msg = "failed to bracket both fixed points (beta=" + format_double(beta) +
                      ", gamma=" + format_double(gamma) + "): found " +
                      std::to_string(roots.size()) + " crossings; samples:";
    for (int k = 0; k < 8; ++k) {
      const double w = omega_hi * (k + 1) / 8.0;
      msg += " |H(" + format_double(w) + ")|d1=" +
             format_double(detail::mobility_mag(w, beta, d1, gamma)) +
             ",d2=" + format_double(detail::mobility_mag(w, beta, d2, gamma));
    }
    throw NumericalError(msg);
  }

  FixedPointsRl fp;
  fp.omega_s = roots[0];
  fp.omega_t = roots[1];
  fp.magnitude_s = detail::mobility_mag(fp.omega_s, beta, d1, gamma);
  fp.magnitude_t = detail::mobility_mag(fp.omega_t, beta, d1, gamma);
  return fp;
}

struct FixedPointR {
  double omega_f = 0.0;
  double magnitude = 0.0;
};

/// The resistive network has a single damping-independent point, in closed form.
inline FixedPointR fixed_point_r(double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("fixed point needs gamma > 0");
  FixedPointR fp;
  fp.omega_f = std::sqrt(1.0 + gamma * gamma / 2.0);
  fp.magnitude = std::sqrt(2.0 * (2.0 + gamma * gamma)) / (gamma * gamma);
  return fp;
}

enum class NetworkKind { RL, R };

struct HinfResult {
  double value = 0.0;
  bool bounded = false;
};

/// Peak response magnitude over (0, omega_hi]: coarse grid, then golden-section
/// refinement of the top local maxima. Undamped or uncoupled inputs are
/// reported as unbounded instead of overflowing.
inline HinfResult hinf_norm(const ReducedParams& p, NetworkKind kind, double omega_hi = 3.0,
                            int grid_points = 4001) {
  HinfResult r;
  if (!(p.delta > 0.0) || !(p.gamma > 0.0)) {
    r.bounded = false;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  ReducedParams q = p;
  if (kind == NetworkKind::R) q.beta = 0.0;

  auto mag = [&](double w) { return std::abs(mobility_rl(w, q)); };
  const auto grid = linspace(omega_hi / grid_points, omega_hi, grid_points);
  std::vector<double> m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) m[i] = mag(grid[i]);

  // collect local maxima, refine the best three brackets
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (m[i] >= m[i - 1] && m[i] >= m[i + 1]) peaks.push_back(i);
  }
  if (peaks.empty()) peaks.push_back(m.size() - 1);
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t a, std::size_t b) { return m[a] > m[b]; });
  if (peaks.size() > 3) peaks.resize(3);

  double best = *std::max_element(m.begin(), m.end());
  for (std::size_t idx : peaks) {
    const double lo = grid[idx > 0 ? idx - 1 : 0];
    const double hi = grid[std::min(idx + 1, grid.size() - 1)];
    const double w = golden_section_max(mag, lo, hi, 1e-12);
    best = std::max(best, mag(w));
  }
  r.value = best;
  r.bounded = std::isfinite(best);
  return r;
}

/// Dissipation that equalises the response at the two fixed points and
/// minimises the peak; the resulting maximum is sqrt(2)/gamma.
inline double flat_dissipation_rl(double gamma) { return std::sqrt(1.5) * gamma; }

/// Dissipation from the closed-form tuning rule adopted by the design formulas.
inline double design_dissipation_rl(double gamma) { return std::sqrt(2.0 / 3.0) * gamma; }

/// Optimal dissipation of the resistive network; flattens the response at its
/// fixed point.
inline double optimal_dissipation_r(double gamma) {
  const double g2 = gamma * gamma;
  return std::sqrt((8.0 + 10.0 * g2 + 3.0 * g2 * g2) / (8.0 + 2.0 * g2));
}

}  // namespace pembeam
