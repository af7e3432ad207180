#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pembeam/beam.hpp"
#include "pembeam/errors.hpp"
#include "pembeam/numeric.hpp"

namespace pembeam {

struct MeshOptions {
  int elements_per_segment = 8;
};

/// Mass-normalised cantilever modes of a piecewise-uniform beam.
///
/// Modes satisfy (1/m_tot) * int rho w_i w_j dx = delta_ij, are sorted by
/// ascending frequency, and carry a fixed sign convention: the tip deflection
/// of every mode is positive.
struct ModalBasis {
  Eigen::VectorXd node_x;      // mesh node coordinates, m
  Eigen::MatrixXd deflection;  // nodes x modes, dimensionless
  Eigen::MatrixXd slope;       // nodes x modes, 1/m
  Eigen::VectorXd omega;       // rad/s, ascending
  double total_mass = 0.0;     // kg
  std::vector<double> profile_edges;  // breakpoints the mesh was built on

  int mode_count() const { return static_cast<int>(omega.size()); }
  double length() const { return node_x(node_x.size() - 1); }
};

namespace detail {

inline void hermite_shape(double xi, double h, double n[4]) {
  n[0] = 1.0 - 3.0 * xi * xi + 2.0 * xi * xi * xi;
  n[1] = h * (xi - 2.0 * xi * xi + xi * xi * xi);
  n[2] = 3.0 * xi * xi - 2.0 * xi * xi * xi;
  n[3] = h * (-xi * xi + xi * xi * xi);
}

inline void hermite_slope(double xi, double h, double n[4]) {
  n[0] = (-6.0 * xi + 6.0 * xi * xi) / h;
  n[1] = 1.0 - 4.0 * xi + 3.0 * xi * xi;
  n[2] = (6.0 * xi - 6.0 * xi * xi) / h;
  n[3] = -2.0 * xi + 3.0 * xi * xi;
}

// Two-node Euler-Bernoulli element, cubic transverse interpolation.
inline Eigen::Matrix4d element_stiffness(double k, double h) {
  Eigen::Matrix4d ke;
  const double h2 = h * h;
  ke << 12.0, 6.0 * h, -12.0, 6.0 * h,
        6.0 * h, 4.0 * h2, -6.0 * h, 2.0 * h2,
        -12.0, -6.0 * h, 12.0, -6.0 * h,
        6.0 * h, 2.0 * h2, -6.0 * h, 4.0 * h2;
  return ke * (k / (h2 * h));
}

inline Eigen::Matrix4d element_mass(double rho, double h) {
  Eigen::Matrix4d me;
  const double h2 = h * h;
  me << 156.0, 22.0 * h, 54.0, -13.0 * h,
        22.0 * h, 4.0 * h2, 13.0 * h, -3.0 * h2,
        54.0, 13.0 * h, 156.0, -22.0 * h,
        -13.0 * h, -3.0 * h2, -22.0 * h, 4.0 * h2;
  return me * (rho * h / 420.0);
}

inline std::size_t element_of(const Eigen::VectorXd& node_x, double x) {
  const auto n = static_cast<std::size_t>(node_x.size());
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (node_x(static_cast<Eigen::Index>(mid)) <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace detail

/// First `count` clamped-free modes of the profile, orthonormalised against
/// the mass distribution.
inline ModalBasis compute_modes(const PiecewiseProfile& profile, int count,
                                const MeshOptions& opts = {}) {
  if (count < 1) throw ValidationError("mode count must be >= 1");
  if (opts.elements_per_segment < 1) {
    throw ValidationError("elements per segment must be >= 1");
  }

  const int per_seg = opts.elements_per_segment;
  const auto nseg = profile.segment_count();
  const int n_el = per_seg * static_cast<int>(nseg);
  const int n_nodes = n_el + 1;
  const int n_dof = 2 * n_nodes;

  Eigen::VectorXd node_x(n_nodes);
  std::vector<double> el_k(static_cast<std::size_t>(n_el));
  std::vector<double> el_rho(static_cast<std::size_t>(n_el));
  std::vector<double> el_h(static_cast<std::size_t>(n_el));
  int e = 0;
  node_x(0) = profile.edges.front();
  for (std::size_t s = 0; s < nseg; ++s) {
    const double h = (profile.edges[s + 1] - profile.edges[s]) / per_seg;
    for (int i = 0; i < per_seg; ++i, ++e) {
      el_k[static_cast<std::size_t>(e)] = profile.stiffness[s];
      el_rho[static_cast<std::size_t>(e)] = profile.mass_per_length[s];
      el_h[static_cast<std::size_t>(e)] = h;
      node_x(e + 1) = profile.edges[s] + h * (i + 1);
    }
    node_x(e) = profile.edges[s + 1];  // keep breakpoints exact
  }

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n_dof, n_dof);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n_dof, n_dof);
  for (int el = 0; el < n_el; ++el) {
    const auto ke = detail::element_stiffness(el_k[static_cast<std::size_t>(el)],
                                              el_h[static_cast<std::size_t>(el)]);
    const auto me = detail::element_mass(el_rho[static_cast<std::size_t>(el)],
                                         el_h[static_cast<std::size_t>(el)]);
    K.block<4, 4>(2 * el, 2 * el) += ke;
    M.block<4, 4>(2 * el, 2 * el) += me;
  }

  // clamp at x = 0: drop deflection and slope of node 0
  const int n_free = n_dof - 2;
  if (count > n_free) {
    throw ValidationError("mode count " + std::to_string(count) +
                          " exceeds free degrees of freedom " + std::to_string(n_free));
  }
  Eigen::MatrixXd Kf = K.bottomRightCorner(n_free, n_free);
  Eigen::MatrixXd Mf = M.bottomRightCorner(n_free, n_free);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kf, Mf);
  if (es.info() != Eigen::Success) {
    throw NumericalError("beam eigensolver failed (nodes=" + std::to_string(n_nodes) +
                         ", dofs=" + std::to_string(n_free) +
                         ", segments=" + std::to_string(nseg) + ")");
  }

  ModalBasis basis;
  basis.node_x = node_x;
  basis.total_mass = profile.total_mass;
  basis.profile_edges = profile.edges;
  basis.omega.resize(count);
  basis.deflection = Eigen::MatrixXd::Zero(n_nodes, count);
  basis.slope = Eigen::MatrixXd::Zero(n_nodes, count);

  for (int i = 0; i < count; ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -1e-6) {
      throw NumericalError("negative eigenvalue from beam eigensolver at mode " +
                           std::to_string(i + 1));
    }
    basis.omega(i) = std::sqrt(std::max(lam, 0.0));
    Eigen::VectorXd q = es.eigenvectors().col(i);  // q' M q = 1 from Eigen
    q *= std::sqrt(profile.total_mass);            // (1/m_tot) int rho w^2 = 1
    if (q(n_free - 2) < 0.0) q = -q;               // tip deflection positive
    for (int nnode = 1; nnode < n_nodes; ++nnode) {
      basis.deflection(nnode, i) = q(2 * (nnode - 1));
      basis.slope(nnode, i) = q(2 * (nnode - 1) + 1);
    }
  }
  return basis;
}

inline double shape_value(const ModalBasis& basis, int mode, double x) {
  const auto el = detail::element_of(basis.node_x, x);
  const auto i = static_cast<Eigen::Index>(el);
  const double h = basis.node_x(i + 1) - basis.node_x(i);
  const double xi = (x - basis.node_x(i)) / h;
  double n[4];
  detail::hermite_shape(xi, h, n);
  return n[0] * basis.deflection(i, mode) + n[1] * basis.slope(i, mode) +
         n[2] * basis.deflection(i + 1, mode) + n[3] * basis.slope(i + 1, mode);
}

inline double shape_slope(const ModalBasis& basis, int mode, double x) {
  const auto el = detail::element_of(basis.node_x, x);
  const auto i = static_cast<Eigen::Index>(el);
  const double h = basis.node_x(i + 1) - basis.node_x(i);
  const double xi = (x - basis.node_x(i)) / h;
  double n[4];
  detail::hermite_slope(xi, h, n);
  return n[0] * basis.deflection(i, mode) + n[1] * basis.slope(i, mode) +
         n[2] * basis.deflection(i + 1, mode) + n[3] * basis.slope(i + 1, mode);
}

/// Modal electromechanical couplings and their dimensionless form.
struct CouplingTable {
  Eigen::MatrixXd moment;         // G_ij, N/V: modes x transducers
  Eigen::MatrixXd dimensionless;  // gamma_ij = G_ij / (omega_1 sqrt(c_mean m_tot))
  double mean_capacitance = 0.0;  // F
  double omega_ref = 0.0;         // rad/s, first mechanical frequency
};

/// The indicator-window integral of the curvature collapses to a slope
/// difference across the patch, which the mesh resolves exactly.
inline CouplingTable coupling_matrix(const ModalBasis& basis, const BeamAssembly& assembly) {
  validate(assembly);
  const double tol = 1e-9 * assembly.length;
  auto is_mesh_node = [&](double x) {
    for (double e : basis.profile_edges) {
      if (std::abs(e - x) <= tol) return true;
    }
    return false;
  };
  if (std::abs(basis.length() - assembly.length) > tol) {
    throw ValidationError("modal basis and assembly mismatch: beam lengths differ");
  }
  for (std::size_t j = 0; j < assembly.transducers.size(); ++j) {
    const auto& t = assembly.transducers[j];
    if (!is_mesh_node(t.x) || !is_mesh_node(t.x + t.length)) {
      throw ValidationError("modal basis and assembly mismatch: transducer " +
                            std::to_string(j + 1) + " edges are not mesh breakpoints");
    }
  }

  const int nm = basis.mode_count();
  const auto nt = static_cast<int>(assembly.transducers.size());
  CouplingTable table;
  table.moment.resize(nm, nt);
  table.omega_ref = basis.omega(0);
  double csum = 0.0;
  for (int j = 0; j < nt; ++j) csum += assembly.transducers[static_cast<std::size_t>(j)].capacitance;
  table.mean_capacitance = nt > 0 ? csum / nt : 0.0;

  for (int i = 0; i < nm; ++i) {
    for (int j = 0; j < nt; ++j) {
      const auto& t = assembly.transducers[static_cast<std::size_t>(j)];
      table.moment(i, j) =
          t.coupling * (shape_slope(basis, i, t.x + t.length) - shape_slope(basis, i, t.x));
    }
  }
  if (nt > 0) {
    table.dimensionless =
        table.moment / (table.omega_ref * std::sqrt(table.mean_capacitance * basis.total_mass));
  } else {
    table.dimensionless.resize(nm, 0);
  }
  return table;
}

struct PointLoad {
  double x = 0.0;
  double amplitude = 1.0;  // N
};

struct DistributedLoad {
  std::function<double(double)> density;  // N/m
};

struct ActuatorDrive {
  ActuatorPatch patch;
  double voltage = 1.0;  // V
};

using LoadSpec = std::variant<PointLoad, DistributedLoad, ActuatorDrive>;

/// Modal force coefficients F_i = (1/m_tot) int f w_i dx.
inline Eigen::VectorXd modal_force(const ModalBasis& basis, const LoadSpec& load) {
  const int nm = basis.mode_count();
  Eigen::VectorXd f(nm);
  const double length = basis.length();

  if (const auto* p = std::get_if<PointLoad>(&load)) {
    if (p->x < 0.0 || p->x > length) {
      throw ValidationError("point load at x=" + std::to_string(p->x) +
                            " lies outside the beam [0, " + std::to_string(length) + "]");
    }
    for (int i = 0; i < nm; ++i) {
      f(i) = p->amplitude * shape_value(basis, i, p->x) / basis.total_mass;
    }
    return f;
  }
  if (const auto* d = std::get_if<DistributedLoad>(&load)) {
    const GaussRule4 rule;
    for (int i = 0; i < nm; ++i) {
      double acc = 0.0;
      for (Eigen::Index el = 0; el + 1 < basis.node_x.size(); ++el) {
        const double a = basis.node_x(el);
        const double h = basis.node_x(el + 1) - a;
        for (int q = 0; q < 4; ++q) {
          const double x = a + rule.node[static_cast<std::size_t>(q)] * h;
          acc += rule.weight[static_cast<std::size_t>(q)] * h * d->density(x) *
                 shape_value(basis, i, x);
        }
      }
      f(i) = acc / basis.total_mass;
    }
    return f;
  }
  const auto& a = std::get<ActuatorDrive>(load);
  if (a.patch.x < 0.0 || a.patch.x + a.patch.length > length) {
    throw ValidationError("actuator patch lies outside the beam");
  }
  for (int i = 0; i < nm; ++i) {
    f(i) = a.patch.coupling * a.voltage *
           (shape_slope(basis, i, a.patch.x + a.patch.length) -
            shape_slope(basis, i, a.patch.x)) /
           basis.total_mass;
  }
  return f;
}

}  // namespace pembeam
