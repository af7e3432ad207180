#pragma once

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "pembeam/circuit.hpp"
#include "pembeam/coupled.hpp"
#include "pembeam/dataset.hpp"
#include "pembeam/modal.hpp"
#include "pembeam/network.hpp"
#include "pembeam/optimizer.hpp"
#include "pembeam/reduced.hpp"

namespace pembeam {

/// Self-check of the design pipeline against the prototype dataset and the
/// model's own closed-form anchors. Prints one PASS/FAIL line per check and
/// returns true when everything passed.
///
/// Checks 8-10 draw randomised inputs from a fixed seed so runs are
/// reproducible bit for bit.
inline bool run_acceptance(std::ostream& os) {
  bool all_ok = true;
  int index = 0;
  auto report = [&](bool ok, const std::string& name, const std::string& detail) {
    ++index;
    all_ok = all_ok && ok;
    os << (ok ? "PASS" : "FAIL") << "  " << std::setw(2) << index << "  " << name << ": "
       << detail << "\n";
  };
  auto rel = [](double x, double ref) { return std::abs(x - ref) / std::abs(ref); };

  const auto& proto = prototype_measurements();
  const int n = proto.node_count();
  const Eigen::VectorXd chi = proto.chi();
  const double c_mean = proto.mean_capacitance();
  const double omega1 = proto.omega1;
  const double f1 = omega1 / (2.0 * kPi);

  const auto opt_modes = electric_modes(build_lattice_matrix(n, 1.0, -1.0), chi);
  const double lambda1 = opt_modes.lambda(0);
  const double gamma_eff = effective_coupling(proto.coupling, chi, opt_modes);

  // 1. prototype RL optimum
  {
    const auto rl = optimal_rl(lambda1, gamma_eff, c_mean, omega1);
    const bool ok = rel(rl.inductance, 139.1) <= 0.03 && rel(rl.resistance, 123.2e3) <= 0.10;
    std::ostringstream d;
    d << "L_opt = " << rl.inductance << " H (ref 139.1 +-3%), R_opt = " << rl.resistance / 1e3
      << " kOhm (ref 123.2 +-10%)";
    report(ok, "prototype RL optimum", d.str());
  }
  // 2. prototype R optimum
  {
    const auto r = optimal_r(lambda1, gamma_eff, c_mean, omega1);
    std::ostringstream d;
    d << "R_opt = " << r.resistance / 1e3 << " kOhm (ref 17.6 +-5%)";
    report(rel(r.resistance, 17.6e3) <= 0.05, "prototype R optimum", d.str());
  }
  // 3. fixed-point spacing
  {
    const auto fp = fixed_points_rl(1.0, 0.167);
    const double spacing_hz = (fp.omega_t - fp.omega_s) * f1;
    std::ostringstream d;
    d << "spacing = " << spacing_hz << " Hz (ref 2.41 +-2%)";
    report(rel(spacing_hz, 2.41) <= 0.02, "fixed-point spacing", d.str());
  }
  // 4. resistive-network fixed point
  {
    const double fhz = fixed_point_r(0.167).omega_f * f1;
    std::ostringstream d;
    d << "f_F = " << fhz << " Hz (ref 20.58 +-0.5%)";
    report(rel(fhz, 20.58) <= 0.005, "resistive fixed point", d.str());
  }
  // 5. performance ratio
  {
    const double ratio = performance_ratio(0.167);
    std::ostringstream d;
    d << "ratio = " << ratio << " (ref 8.53 +-1%)";
    report(rel(ratio, 8.53) <= 0.01, "performance ratio", d.str());
  }
  // 6. boundary optimum
  {
    const auto scan = boundary_scan(proto.coupling, chi, n, 81);
    const bool corner = scan.alpha0_opt == 1.0 && scan.alpha_n_opt == -1.0;
    std::ostringstream d;
    d << "argmax = (" << scan.alpha0_opt << ", " << scan.alpha_n_opt
      << ") (ref (1, -1) exact), gamma_max = " << scan.gamma_max << " (ref 0.167 +-5%)";
    report(corner && rel(scan.gamma_max, 0.167) <= 0.05, "boundary optimum", d.str());
  }
  // 7. circuit tables
  {
    const double l_deboo = deboo_inductance(2.7e3, 17.9e-6);
    const double l_ant = antoniou_inductance(3.0e3, 1.0e3, 1.0e3, 198.0, 32.0e-6);
    std::ostringstream d;
    d << "deboo = " << l_deboo << " H (ref 130.5), antoniou = " << l_ant << " H (ref 19.01)";
    report(rel(l_deboo, 130.5) <= 5e-4 && rel(l_ant, 19.01) <= 5e-4,
           "synthetic inductor values", d.str());
  }
  // 8. damping-independence of the fixed points
  {
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> beta_draw(0.5, 2.0);
    std::uniform_real_distribution<double> gamma_draw(0.05, 0.5);
    double worst = 0.0;
    bool ok = true;
    for (int k = 0; k < 100; ++k) {
      const double beta = beta_draw(rng);
      const double gamma = gamma_draw(rng);
      const auto fp = fixed_points_rl(beta, gamma);
      for (double w : {fp.omega_s, fp.omega_t}) {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (double delta : {0.05, 0.5, 5.0}) {
          ReducedParams p;
          p.beta = beta;
          p.delta = delta;
          p.gamma = gamma;
          const double m = std::abs(mobility_rl(w, p));
          lo = first ? m : std::min(lo, m);
          hi = first ? m : std::max(hi, m);
          first = false;
        }
        const double spread = (hi - lo) / lo;
        worst = std::max(worst, spread);
        ok = ok && spread <= 1e-7;
      }
    }
    std::ostringstream d;
    d << "100 draws, worst spread across delta {0.05, 0.5, 5} = " << worst << " (<= 1e-7)";
    report(ok, "fixed points damping-independent", d.str());
  }
  // 9. peak-response optimality of the equal-peak tuning
  {
    std::mt19937 rng(20240812u);
    std::uniform_real_distribution<double> gamma_draw(0.05, 0.5);
    bool ok = true;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double gamma = gamma_draw(rng);
      const double delta = flat_dissipation_rl(gamma);
      ReducedParams p;
      p.beta = 1.0;
      p.delta = delta;
      p.gamma = gamma;
      const double h0 = hinf_norm(p, NetworkKind::RL).value;
      const double ref = std::sqrt(2.0) / gamma;
      worst = std::max(worst, rel(h0, ref));
      ok = ok && rel(h0, ref) <= 0.005;
      for (double fac : {0.9, 1.1}) {
        ReducedParams q = p;
        q.delta = delta * fac;
        ok = ok && hinf_norm(q, NetworkKind::RL).value > h0;
      }
    }
    std::ostringstream d;
    d << "20 draws, worst |max - sqrt(2)/gamma| = " << worst
      << " (<= 0.5%), +-10% dissipation raises the max";
    report(ok, "equal-peak tuning is optimal", d.str());
  }
  // 10. lattice eigenpairs vs an independent dense solve
  {
    std::mt19937 rng(20240813u);
    std::uniform_real_distribution<double> chi_draw(0.5, 1.5);
    std::uniform_real_distribution<double> alpha_draw(-1.0, 1.0);
    double worst = 0.0;
    bool ok = true;
    int draws = 0;
    for (int nn = 2; nn <= 12; ++nn) {
      for (int rep = 0; rep < 5; ++rep, ++draws) {
        Eigen::VectorXd chi_r(nn);
        for (int i = 0; i < nn; ++i) chi_r(i) = chi_draw(rng);
        chi_r *= nn / chi_r.sum();
        double a0 = alpha_draw(rng);
        double an = alpha_draw(rng);
        if (rep == 0) {
          a0 = 1.0;
          an = -1.0;
        }
        const auto lattice = build_lattice_matrix(nn, a0, an);
        const auto modes = electric_modes(lattice, chi_r);

        // oracle: whiten by chi^{-1/2} and run a plain symmetric solve
        const auto na = static_cast<Eigen::Index>(lattice.active.size());
        Eigen::VectorXd half(na);
        for (Eigen::Index r = 0; r < na; ++r) {
          half(r) = 1.0 / std::sqrt(chi_r(lattice.active[static_cast<std::size_t>(r)]));
        }
        Eigen::MatrixXd W =
            half.asDiagonal() * lattice.effective * half.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
        for (Eigen::Index k = 0; k < na; ++k) {
          worst = std::max(worst, std::abs(modes.lambda(k) - std::max(es.eigenvalues()(k), 0.0)));
          Eigen::VectorXd v = half.asDiagonal() * es.eigenvectors().col(k);
          Eigen::Index imax = 0;
          for (Eigen::Index r = 1; r < na; ++r) {
            if (std::abs(v(r)) > std::abs(v(imax))) imax = r;
          }
          if (v(imax) < 0.0) v = -v;
          Eigen::VectorXd prod(na);
          Eigen::VectorXd chi_prod(na);
          for (Eigen::Index r = 0; r < na; ++r) {
            const int node = lattice.active[static_cast<std::size_t>(r)];
            prod(r) = modes.psi(node, k);
            chi_prod(r) = chi_r(node) * prod(r);
            worst = std::max(worst, std::abs(prod(r) - v(r)));
          }
          const Eigen::VectorXd resid = lattice.effective * prod - modes.lambda(k) * chi_prod;
          worst = std::max(worst, resid.norm() / prod.norm());
        }
      }
    }
    ok = worst <= 1e-10;
    std::ostringstream d;
    d << draws << " draws over n = 2..12, worst eigenpair deviation = " << worst
      << " (<= 1e-10)";
    report(ok, "lattice eigensolve vs oracle", d.str());
  }
  // 11. large-lattice asymptotics
  {
    const auto t0 = std::chrono::steady_clock::now();
    const int big = 50;
    const auto modes =
        electric_modes(build_lattice_matrix(big, 1.0, -1.0), Eigen::VectorXd::Ones(big));
    const double l1 = modes.lambda(0);
    const double est = first_eigenvalue_asymptotic(big);
    const double scaling = big * big * l1;  // equals n L_opt w1^2 c_tot
    const double quarter_pi_sq = (kPi / 2.0) * (kPi / 2.0);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    const bool ok = std::abs(est - l1) / l1 <= 0.02 &&
                    std::abs(scaling - quarter_pi_sq) / scaling <= 0.02 && ms < 1000;
    std::ostringstream d;
    d << "n=50: |est-lambda1|/lambda1 = " << std::abs(est - l1) / l1
      << ", |n^2 lambda1 - (pi/2)^2|/(n^2 lambda1) = "
      << std::abs(scaling - quarter_pi_sq) / scaling << " (<= 2%), " << ms << " ms (< 1000)";
    report(ok, "asymptotic eigenvalue estimate", d.str());
  }
  // 12. uniform cantilever against the closed form
  {
    BeamAssembly uniform;
    uniform.length = 1.0;
    uniform.stiffness = 1.0;
    uniform.mass_per_length = 1.0;
    const auto basis = compute_modes(assemble_profile(uniform), 3);
    const double bl[3] = {1.87510406871196, 4.69409113297418, 7.85475743823761};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double exact = bl[i] * bl[i];
      worst = std::max(worst, rel(basis.omega(i), exact));
    }
    std::ostringstream d;
    d << "first three frequencies, worst relative error = " << worst << " (<= 0.1%)";
    report(worst <= 1e-3, "cantilever closed form", d.str());
  }
  // 13. reduced model agreement of the projected simulator
  {
    LatticeNetwork net;
    net.node_count = n;
    net.alpha0 = 1.0;
    net.alpha_n = -1.0;
    net.chi = chi;
    const auto rl = optimal_rl(lambda1, gamma_eff, c_mean, omega1);
    net.inductance = rl.inductance;
    net.resistance = rl.resistance_flat;

    Eigen::VectorXd om(1);
    om << omega1;
    Eigen::MatrixXd grow(1, n);
    grow.row(0) = proto.coupling.transpose();
    auto sys = assemble_modal(om, grow, net);
    set_line_impedances(sys, net, c_mean);

    // project the electrical block onto the first electric mode
    const int m = sys.n_elec;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(1 + m, 2);
    T(0, 0) = 1.0;
    for (int k = 0; k < m; ++k) {
      T(1 + k, 1) = opt_modes.psi(sys.active_nodes[static_cast<std::size_t>(k)], 0);
    }
    const Eigen::MatrixXd Mp = T.transpose() * sys.mass * T;
    const Eigen::MatrixXd Dp = T.transpose() * sys.damping * T;
    const Eigen::MatrixXd Kp = T.transpose() * sys.stiffness * T;

    ReducedParams p = reduced_params(rl.inductance, rl.resistance_flat, lambda1, c_mean, omega1,
                                     std::abs(coupling_sum(proto.coupling, opt_modes)));
    double worst = 0.0;
    const auto grid = linspace(3.0 / 1000, 3.0, 1000);
    const std::complex<double> j(0.0, 1.0);
    for (double w : grid) {
      Eigen::Matrix2cd A = (-w * w) * Mp + (j * w) * Dp + Kp;
      Eigen::Vector2cd rhs(1.0, 0.0);
      const Eigen::Vector2cd z = A.partialPivLu().solve(rhs);
      const std::complex<double> hp = j * w * z(0);
      const std::complex<double> hr = mobility_rl(w, p);
      worst = std::max(worst, std::abs(hp - hr) / std::abs(hr));
    }
    std::ostringstream d;
    d << "1000-point grid, worst relative deviation = " << worst << " (<= 1e-10)";
    report(worst <= 1e-10, "projected simulator matches the reduced model", d.str());
  }
  // 14. structural-damping trend of the network performance ratio
  {
    LatticeNetwork rl_net, r_net;
    rl_net.node_count = r_net.node_count = n;
    rl_net.alpha0 = r_net.alpha0 = 1.0;
    rl_net.alpha_n = r_net.alpha_n = -1.0;
    rl_net.chi = r_net.chi = chi;
    const auto rl = optimal_rl(lambda1, gamma_eff, c_mean, omega1);
    const auto rr = optimal_r(lambda1, gamma_eff, c_mean, omega1);
    rl_net.inductance = rl.inductance;
    rl_net.resistance = rl.resistance_flat;
    r_net.resistance = rr.resistance;

    Eigen::VectorXd om(1);
    om << omega1;
    Eigen::MatrixXd grow(1, n);
    grow.row(0) = calibrated_coupling_row(proto.coupling, chi, opt_modes).transpose();
    const auto grid = linspace(0.5, 1.5, 4001);
    const std::vector<std::pair<double, double>> window{{0.5, 1.5}};

    // project each variant onto its first electric mode so the sweep tracks the
    // reduced-model ratio the closed form predicts
    auto projected_response = [&](const LatticeNetwork& net, double z) {
      Eigen::VectorXd zeta(1);
      zeta << z;
      auto sys = assemble_modal(om, grow, net, zeta);
      set_line_impedances(sys, net, c_mean);
      const int m = sys.n_elec;
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(1 + m, 2);
      T(0, 0) = 1.0;
      for (int k = 0; k < m; ++k) {
        T(1 + k, 1) = opt_modes.psi(sys.active_nodes[static_cast<std::size_t>(k)], 0);
      }
      const Eigen::MatrixXd Mp = T.transpose() * sys.mass * T;
      const Eigen::MatrixXd Dp = T.transpose() * sys.damping * T;
      const Eigen::MatrixXd Kp = T.transpose() * sys.stiffness * T;
      FrequencyResponse resp;
      resp.frequency = grid;
      const std::complex<double> j(0.0, 1.0);
      for (double w : grid) {
        Eigen::Matrix2cd A = (-w * w) * Mp + (j * w) * Dp + Kp;
        const Eigen::Vector2cd z2 = A.partialPivLu().solve(Eigen::Vector2cd(1.0, 0.0));
        resp.sample.push_back(j * w * z2(0));
      }
      return resp;
    };

    std::vector<double> ratios;
    for (double z : {0.0, 0.002, 0.005, 0.01, 0.02}) {
      const auto table = comparison_suite(
          {"rl", "r"}, {projected_response(rl_net, z), projected_response(r_net, z)}, window);
      ratios.push_back(table.rows[1].peaks[0].magnitude / table.rows[0].peaks[0].magnitude);
    }
    bool ok = rel(ratios.front(), performance_ratio(gamma_eff)) <= 0.01;
    for (std::size_t i = 1; i < ratios.size(); ++i) ok = ok && ratios[i] < ratios[i - 1];
    ok = ok && ratios.back() < 6.82 && 6.82 < ratios.front();
    std::ostringstream d;
    d << "reduced-model ratio falls from " << ratios.front() << " to " << ratios.back()
      << " as damping grows (monotone, passing the observed 6.82)";
    report(ok, "damping degrades the ratio monotonically", d.str());
  }

  os << (all_ok ? "all checks passed\n" : "CHECKS FAILED\n");
  return all_ok;
}

}  // namespace pembeam
