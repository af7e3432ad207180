#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "pembeam/errors.hpp"
#include "pembeam/frequency_response.hpp"
#include "pembeam/modal.hpp"
#include "pembeam/network.hpp"
#include "pembeam/numeric.hpp"

namespace pembeam {

/// Dimensionless multimode model: N mechanical modes coupled to the active
/// electrical nodes. The coupling is gyroscopic: it enters the two velocity
/// blocks with opposite signs, so it moves energy without dissipating it.
struct CoupledSystem {
  int n_mech = 0;
  int n_elec = 0;
  Eigen::MatrixXd mass;       // block diag(I, chi)
  Eigen::MatrixXd damping;    // velocity block: mechanical damping, coupling, N/(R c w1)
  Eigen::MatrixXd stiffness;  // block diag((w_i/w1)^2, N/(w1^2 L c))
  Eigen::VectorXd omega_mech;  // rad/s
  double omega_ref = 0.0;      // rad/s
  std::vector<int> active_nodes;
  int node_count = 0;
  bool has_inductance = false;
  bool mech_damping = false;   // true when any zeta > 0 was supplied
  Eigen::VectorXd zeta;
  // physical reconstruction data, present when built from a modal basis
  bool has_physical = false;
  Eigen::VectorXd tip_deflection;
  double total_mass = 0.0;

  int size() const { return n_mech + n_elec; }
};

/// Core assembly from modal data. `gamma` is the dimensionless coupling matrix,
/// modes by transducer nodes. Line impedance blocks are attached separately by
/// set_line_impedances.
inline CoupledSystem assemble_modal(const Eigen::VectorXd& omega_mech,
                                    const Eigen::MatrixXd& gamma, const LatticeNetwork& net,
                                    const Eigen::VectorXd& zeta = {}) {
  validate(net);
  const int n_modes = static_cast<int>(omega_mech.size());
  if (n_modes < 1) throw ValidationError("coupled system needs at least one mechanical mode");
  if (gamma.rows() != n_modes || gamma.cols() != net.node_count) {
    throw ValidationError("coupling matrix must be modes x network nodes (" +
                          std::to_string(n_modes) + " x " + std::to_string(net.node_count) +
                          "), got " + std::to_string(gamma.rows()) + " x " +
                          std::to_string(gamma.cols()));
  }
  if (zeta.size() != 0 && zeta.size() != n_modes) {
    throw ValidationError("modal damping ratio vector must match the mode count");
  }
  for (Eigen::Index i = 0; i < zeta.size(); ++i) {
    if (zeta(i) < 0.0) throw ValidationError("modal damping ratios must be nonnegative");
  }

  const auto lattice = build_lattice_matrix(net.node_count, net.alpha0, net.alpha_n);
  const auto m = static_cast<int>(lattice.active.size());
  if (m == 0) throw ValidationError("network has no active electrical node");

  CoupledSystem sys;
  sys.n_mech = n_modes;
  sys.n_elec = m;
  sys.omega_mech = omega_mech;
  sys.omega_ref = omega_mech(0);
  sys.active_nodes = lattice.active;
  sys.node_count = net.node_count;
  sys.has_inductance = net.inductance.has_value();
  sys.zeta = zeta.size() ? zeta : Eigen::VectorXd::Zero(n_modes);
  sys.mech_damping = sys.zeta.maxCoeff() > 0.0;

  const double w1 = sys.omega_ref;
  Eigen::VectorXd chi_act(m);
  Eigen::MatrixXd gamma_act(n_modes, m);
  for (int k = 0; k < m; ++k) {
    chi_act(k) = net.chi(lattice.active[static_cast<std::size_t>(k)]);
    for (int i = 0; i < n_modes; ++i) {
      gamma_act(i, k) = gamma(i, lattice.active[static_cast<std::size_t>(k)]);
    }
  }

  const int sz = n_modes + m;
  sys.mass = Eigen::MatrixXd::Zero(sz, sz);
  sys.damping = Eigen::MatrixXd::Zero(sz, sz);
  sys.stiffness = Eigen::MatrixXd::Zero(sz, sz);

  for (int i = 0; i < n_modes; ++i) {
    const double ratio = omega_mech(i) / w1;
    sys.mass(i, i) = 1.0;
    sys.stiffness(i, i) = ratio * ratio;
    sys.damping(i, i) = 2.0 * sys.zeta(i) * ratio;
  }
  sys.mass.block(n_modes, n_modes, m, m) = chi_act.asDiagonal();
  sys.damping.block(0, n_modes, n_modes, m) = gamma_act;
  sys.damping.block(n_modes, 0, m, n_modes) = -gamma_act.transpose();
  return sys;
}

/// Completes the electrical blocks that depend on the line impedances. Split
/// from assemble_modal so tests can reuse one coupling structure with several
/// line values; chained here for the common case.
inline void set_line_impedances(CoupledSystem& sys, const LatticeNetwork& net,
                                double mean_capacitance) {
  if (!(mean_capacitance > 0.0)) throw ValidationError("capacitance must be positive");
  const auto lattice = build_lattice_matrix(net.node_count, net.alpha0, net.alpha_n);
  if (static_cast<int>(lattice.active.size()) != sys.n_elec) {
    throw ValidationError("network boundary layout does not match the assembled system");
  }
  const double w1 = sys.omega_ref;
  const int n_modes = sys.n_mech;
  const int m = sys.n_elec;
  sys.damping.block(n_modes, n_modes, m, m) =
      lattice.effective / (net.resistance * mean_capacitance * w1);
  if (net.inductance) {
    sys.stiffness.block(n_modes, n_modes, m, m) =
        lattice.effective / (w1 * w1 * (*net.inductance) * mean_capacitance);
    sys.has_inductance = true;
  } else {
    sys.stiffness.block(n_modes, n_modes, m, m).setZero();
    sys.has_inductance = false;
  }
}

/// Full assembly from a computed modal basis and its coupling table.
inline CoupledSystem assemble(const ModalBasis& basis, const CouplingTable& couplings,
                              const LatticeNetwork& net, const Eigen::VectorXd& zeta = {}) {
  if (couplings.dimensionless.rows() != basis.mode_count()) {
    throw ValidationError("coupling table mode count does not match the basis");
  }
  CoupledSystem sys = assemble_modal(basis.omega, couplings.dimensionless, net, zeta);
  set_line_impedances(sys, net, couplings.mean_capacitance);
  sys.has_physical = true;
  sys.total_mass = basis.total_mass;
  sys.tip_deflection.resize(basis.mode_count());
  for (int i = 0; i < basis.mode_count(); ++i) {
    sys.tip_deflection(i) = basis.deflection(basis.node_x.size() - 1, i);
  }
  return sys;
}

enum class ResponseKind {
  ModalVelocity,  // velocity of the first driven modal coordinate, dimensionless
  TipMobility,    // physical tip velocity per unit point force, m/s/N
};

/// Direct frequency-domain solve on a dimensionless grid.
///
/// `drive` is the dimensionless modal force pattern (TipMobility expects the
/// mode shapes evaluated at the forcing point). Samples at singular,
/// undamped poles are flagged as unbounded rather than overflowed.
inline FrequencyResponse frequency_response(const CoupledSystem& sys,
                                            const Eigen::VectorXd& drive,
                                            const std::vector<double>& grid,
                                            ResponseKind kind = ResponseKind::ModalVelocity,
                                            int output_mode = 0) {
  if (drive.size() != sys.n_mech) {
    throw ValidationError("drive vector must match the mechanical mode count");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && grid[i] <= grid[i - 1])) {
      throw ValidationError("frequency grid must be positive and strictly ascending");
    }
  }
  if (kind == ResponseKind::TipMobility && !sys.has_physical) {
    throw ValidationError("tip output needs a system assembled from a modal basis");
  }
  if (output_mode < 0 || output_mode >= sys.n_mech) {
    throw ValidationError("output mode index out of range");
  }

  const int sz = sys.size();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(sz);
  for (int i = 0; i < sys.n_mech; ++i) rhs(i) = drive(i);

  FrequencyResponse out;
  out.frequency = grid;
  out.frequency_in_hz = false;
  out.sample.resize(grid.size());
  out.meta.push_back(std::string("mechanical_damping=") + (sys.mech_damping ? "on" : "off"));
  out.meta.push_back("modes=" + std::to_string(sys.n_mech));
  out.meta.push_back("electrical_nodes=" + std::to_string(sys.n_elec));
  const double top_ratio = sys.omega_mech(sys.n_mech - 1) / sys.omega_ref;
  if (top_ratio < 1.5 * grid.back()) {
    out.meta.push_back("warning=top retained mode within 1.5x of the grid top; "
                       "truncation may distort the upper band");
  }

  const std::complex<double> j(0.0, 1.0);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double w = grid[gi];
    Eigen::MatrixXcd A = (-w * w) * sys.mass + (j * w) * sys.damping + sys.stiffness;
    Eigen::VectorXcd z = A.partialPivLu().solve(rhs);
    std::complex<double> val;
    if (kind == ResponseKind::ModalVelocity) {
      val = j * w * z(output_mode);
    } else {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < sys.n_mech; ++i) acc += sys.tip_deflection(i) * z(i);
      val = j * w * acc / (sys.total_mass * sys.omega_ref);
    }
    if (!std::isfinite(std::abs(val))) {
      val = std::complex<double>(std::numeric_limits<double>::infinity(), 0.0);
    }
    out.sample[gi] = val;
  }
  return out;
}

struct ModePeak {
  double frequency = 0.0;
  double magnitude = 0.0;
};

struct ComparisonRow {
  std::string label;
  std::vector<ModePeak> peaks;
  std::vector<double> reduction_pct;  // vs baseline; NaN when undefined
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // rows[0] is the baseline
  bool baseline_defined = true;
};

/// Peak magnitudes per frequency window and percentage reductions relative to
/// the first (baseline) response.
inline ComparisonTable comparison_suite(const std::vector<std::string>& labels,
                                        const std::vector<FrequencyResponse>& responses,
                                        const std::vector<std::pair<double, double>>& windows) {
  if (labels.size() != responses.size() || responses.empty()) {
    throw ValidationError("comparison needs matching labels and at least one response");
  }

  auto peaks_of = [&](const FrequencyResponse& r) {
    std::vector<ModePeak> peaks;
    for (const auto& [lo, hi] : windows) {
      ModePeak p;
      p.magnitude = -1.0;
      for (std::size_t i = 0; i < r.frequency.size(); ++i) {
        if (r.frequency[i] < lo || r.frequency[i] > hi) continue;
        const double mag = std::abs(r.sample[i]);
        if (mag > p.magnitude) {
          p.magnitude = mag;
          p.frequency = r.frequency[i];
        }
      }
      if (p.magnitude < 0.0) {
        p.magnitude = std::numeric_limits<double>::quiet_NaN();
        p.frequency = std::numeric_limits<double>::quiet_NaN();
      }
      peaks.push_back(p);
    }
    return peaks;
  };

  ComparisonTable table;
  const auto base = peaks_of(responses[0]);
  for (const auto& p : base) {
    if (!std::isfinite(p.magnitude)) table.baseline_defined = false;
  }
  for (std::size_t v = 0; v < responses.size(); ++v) {
    ComparisonRow row;
    row.label = labels[v];
    row.peaks = peaks_of(responses[v]);
    for (std::size_t k = 0; k < windows.size(); ++k) {
      double red = std::numeric_limits<double>::quiet_NaN();
      if (std::isfinite(base[k].magnitude) && std::isfinite(row.peaks[k].magnitude) &&
          base[k].magnitude > 0.0) {
        red = 100.0 * (1.0 - row.peaks[k].magnitude / base[k].magnitude);
      }
      row.reduction_pct.push_back(red);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace pembeam
