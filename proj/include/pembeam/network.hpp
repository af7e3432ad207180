#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pembeam/errors.hpp"
#include "pembeam/numeric.hpp"

namespace pembeam {

/// Lattice of transducer nodes chained by identical line impedances, with
/// grounded boundary elements scaled by alpha in [-1, 1]:
///   alpha = 1  -> boundary element open (removed),
///   alpha = -1 -> boundary node shorted to ground.
struct LatticeNetwork {
  int node_count = 0;
  double alpha0 = 0.0;
  double alpha_n = 0.0;
  Eigen::VectorXd chi;                  // capacitance ratios c_i / mean(c), positive
  double resistance = 0.0;              // line resistance, ohm
  std::optional<double> inductance;     // line inductance, H; absent for the R network
};

inline bool is_shorted(double alpha) { return std::abs(1.0 + alpha) < 1e-12; }

inline void validate(const LatticeNetwork& net) {
  if (net.node_count < 2) throw ValidationError("network needs at least 2 nodes");
  if (net.alpha0 < -1.0 || net.alpha0 > 1.0 || net.alpha_n < -1.0 || net.alpha_n > 1.0) {
    throw ValidationError("boundary parameters must lie in [-1, 1]");
  }
  if (net.chi.size() != net.node_count) {
    throw ValidationError("capacitance ratio vector length does not match node count");
  }
  for (Eigen::Index i = 0; i < net.chi.size(); ++i) {
    if (!(net.chi(i) > 0.0)) throw ValidationError("capacitance ratios must be positive");
  }
  if (std::abs(net.chi.mean() - 1.0) > 1e-12) {
    throw ValidationError("capacitance ratios must average to one");
  }
  if (!(net.resistance > 0.0)) throw ValidationError("line resistance must be positive");
  if (net.inductance && !(*net.inductance > 0.0)) {
    throw ValidationError("line inductance must be positive when present");
  }
}

/// Dimensionless lattice matrix with shorted boundary nodes eliminated.
/// A shorted boundary pins that node's flux linkage to zero; the row and
/// column are removed instead of forming an unbounded diagonal.
struct LatticeMatrix {
  int node_count = 0;              // nodes before elimination
  Eigen::MatrixXd effective;       // symmetric tridiagonal, size = active nodes
  std::vector<int> active;         // indices of retained nodes
  std::vector<int> constrained;    // indices pinned to zero
};

inline LatticeMatrix build_lattice_matrix(int n, double alpha0, double alpha_n) {
  if (n < 2) throw ValidationError("lattice needs at least 2 nodes");
  if (alpha0 < -1.0 || alpha0 > 1.0 || alpha_n < -1.0 || alpha_n > 1.0) {
    throw ValidationError("boundary parameters must lie in [-1, 1]");
  }

  LatticeMatrix m;
  m.node_count = n;
  if (is_shorted(alpha0)) m.constrained.push_back(0);
  if (is_shorted(alpha_n)) m.constrained.push_back(n - 1);
  for (int i = 0; i < n; ++i) {
    bool pinned = false;
    for (int c : m.constrained) pinned = pinned || c == i;
    if (!pinned) m.active.push_back(i);
  }

  const auto na = static_cast<Eigen::Index>(m.active.size());
  m.effective = Eigen::MatrixXd::Zero(na, na);
  for (Eigen::Index r = 0; r < na; ++r) {
    const int i = m.active[static_cast<std::size_t>(r)];
    double diag = 2.0;
    if (i == 0) diag = 2.0 / (1.0 + alpha0);
    if (i == n - 1) diag = 2.0 / (1.0 + alpha_n);
    m.effective(r, r) = diag;
    for (Eigen::Index s = 0; s < na; ++s) {
      const int j = m.active[static_cast<std::size_t>(s)];
      if (j == i - 1 || j == i + 1) m.effective(r, s) = -1.0;
    }
  }
  return m;
}

/// Eigenpairs of N psi = lambda diag(chi) psi on the active nodes.
/// Eigenvectors are chi-orthonormal and reported full length, with exact
/// zeros at constrained nodes; the entry of largest magnitude is positive.
struct ElectricModes {
  Eigen::VectorXd lambda;   // ascending, >= 0
  Eigen::MatrixXd psi;      // node_count x effective_dim
  int effective_dim = 0;
  std::vector<int> constrained;
};

inline ElectricModes electric_modes(const LatticeMatrix& m, const Eigen::VectorXd& chi) {
  if (chi.size() != m.node_count) {
    throw ValidationError("capacitance ratio vector length does not match node count");
  }
  for (Eigen::Index i = 0; i < chi.size(); ++i) {
    if (!(chi(i) > 0.0)) throw ValidationError("capacitance ratios must be positive");
  }
  const auto na = static_cast<Eigen::Index>(m.active.size());
  if (na == 0) {
    throw NumericalError("degenerate lattice: every node is constrained");
  }

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(na, na);
  for (Eigen::Index r = 0; r < na; ++r) {
    B(r, r) = chi(m.active[static_cast<std::size_t>(r)]);
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(m.effective, B);
  if (es.info() != Eigen::Success) {
    throw NumericalError("lattice eigensolver failed (n=" + std::to_string(m.node_count) +
                         ", active=" + std::to_string(na) + ")");
  }

  ElectricModes modes;
  modes.lambda = es.eigenvalues().cwiseMax(0.0);  // clip -0.0-scale roundoff
  modes.effective_dim = static_cast<int>(na);
  modes.constrained = m.constrained;
  modes.psi = Eigen::MatrixXd::Zero(m.node_count, na);
  for (Eigen::Index k = 0; k < na; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(k);  // v' B v = 1
    Eigen::Index imax = 0;
    for (Eigen::Index r = 1; r < na; ++r) {
      if (std::abs(v(r)) > std::abs(v(imax))) imax = r;
    }
    if (v(imax) < 0.0) v = -v;
    for (Eigen::Index r = 0; r < na; ++r) {
      modes.psi(m.active[static_cast<std::size_t>(r)], k) = v(r);
    }
  }
  return modes;
}

inline ElectricModes electric_modes(const LatticeNetwork& net) {
  validate(net);
  return electric_modes(build_lattice_matrix(net.node_count, net.alpha0, net.alpha_n), net.chi);
}

/// Large-n estimate of the first eigenvalue at the open/shorted optimum.
inline double first_eigenvalue_asymptotic(int n) {
  if (n < 2) throw ValidationError("lattice needs at least 2 nodes");
  const double x = kPi / (2.0 * n);
  return x * x;
}

/// Modal coupling sum of mode h against a per-transducer coupling row.
inline double coupling_sum(const Eigen::VectorXd& gamma_row, const ElectricModes& modes,
                           int h = 0) {
  if (gamma_row.size() != modes.psi.rows()) {
    throw ValidationError("coupling row length does not match node count");
  }
  return gamma_row.dot(modes.psi.col(h));
}

/// Participation of mode h in the uniform flux-linkage state.
inline double participation(const Eigen::VectorXd& chi, const ElectricModes& modes, int h = 0) {
  if (chi.size() != modes.psi.rows()) {
    throw ValidationError("capacitance ratio vector length does not match node count");
  }
  return chi.dot(modes.psi.col(h));
}

/// Effective modal coupling of mode h: the coupling sum weighted by the mode's
/// participation factor. This is the value the two-degree-of-freedom model and
/// the design formulas consume; it is invariant under eigenvector sign flips.
inline double effective_coupling(const Eigen::VectorXd& gamma_row, const Eigen::VectorXd& chi,
                                 const ElectricModes& modes, int h = 0) {
  return std::abs(coupling_sum(gamma_row, modes, h) * participation(chi, modes, h));
}

/// Rescales a measured per-transducer coupling row so that its first-mode
/// projection reproduces the effective coupling; multimode assemblies built
/// from measured data use this calibrated row.
inline Eigen::VectorXd calibrated_coupling_row(const Eigen::VectorXd& gamma_row,
                                               const Eigen::VectorXd& chi,
                                               const ElectricModes& modes) {
  return gamma_row * participation(chi, modes, 0);
}

}  // namespace pembeam
