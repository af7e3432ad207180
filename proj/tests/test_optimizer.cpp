#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fixtures.hpp"
#include "pembeam/optimizer.hpp"

using Catch::Approx;
using namespace pembeam;

namespace {

struct PrototypePoint {
  double lambda1;
  double gamma;
  double c;
  double omega1;
  ElectricModes modes;
  Eigen::VectorXd chi;
};

PrototypePoint prototype_point() {
  const auto& p = fixtures::prototype();
  PrototypePoint pt;
  pt.chi = p.chi();
  pt.modes = electric_modes(build_lattice_matrix(5, 1.0, -1.0), pt.chi);
  pt.lambda1 = pt.modes.lambda(0);
  pt.gamma = effective_coupling(p.coupling, pt.chi, pt.modes);
  pt.c = p.mean_capacitance();
  pt.omega1 = p.omega1;
  return pt;
}

// gradient-free pattern-search oracle for the scan argmax, clipped to the square
std::pair<double, double> pattern_search(const Eigen::VectorXd& gamma_row,
                                         const Eigen::VectorXd& chi, int n, double a0,
                                         double an) {
  auto objective = [&](double x, double y) {
    const auto modes = electric_modes(build_lattice_matrix(n, x, y), chi);
    return std::abs(coupling_sum(gamma_row, modes));
  };
  double step = 0.05;
  double best = objective(a0, an);
  while (step > 1e-5) {
    bool improved = false;
    const double cand[4][2] = {{a0 + step, an}, {a0 - step, an}, {a0, an + step}, {a0, an - step}};
    for (const auto& c : cand) {
      const double x = std::clamp(c[0], -1.0, 1.0);
      const double y = std::clamp(c[1], -1.0, 1.0);
      const double v = objective(x, y);
      if (v > best + 1e-15) {
        best = v;
        a0 = x;
        an = y;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return {a0, an};
}

}  // namespace

TEST_CASE("unit substitution for the resonant optimum") {
  const auto o = optimal_rl(1.0, std::sqrt(2.0 / 3.0), 1.0, 1.0);
  CHECK(o.inductance == Approx(1.0));
  CHECK(o.resistance == Approx(1.5));
  CHECK(o.beta == 1.0);
}

TEST_CASE("prototype resonant optimum reproduces the bench design values") {
  const auto pt = prototype_point();
  const auto o = optimal_rl(pt.lambda1, pt.gamma, pt.c, pt.omega1);

  CHECK(o.inductance == Approx(139.1).epsilon(0.03));
  CHECK(o.inductance == Approx(139.0746).epsilon(1e-4));  // frozen pipeline value
  CHECK(o.resistance == Approx(123.2e3).epsilon(0.10));
  CHECK(o.resistance == Approx(130.24e3).epsilon(1e-3));  // frozen pipeline value
  CHECK(o.resistance_flat == Approx(86.83e3).epsilon(1e-3));
  CHECK(o.delta == Approx(std::sqrt(2.0 / 3.0) * pt.gamma));
  CHECK(o.delta_flat == Approx(std::sqrt(1.5) * pt.gamma));
  CHECK(o.predicted_hinf == Approx(std::sqrt(2.0) / pt.gamma));
}

TEST_CASE("prototype resistive optimum") {
  const auto pt = prototype_point();
  const auto o = optimal_r(pt.lambda1, pt.gamma, pt.c, pt.omega1);
  CHECK(o.resistance == Approx(17.6e3).epsilon(0.05));
  CHECK(o.resistance == Approx(17.613e3).epsilon(1e-3));  // frozen pipeline value
}

TEST_CASE("resistive optimum limits") {
  // gamma -> 0: the damping coefficient tends to one
  const auto o = optimal_r(0.2, 1e-9, 1.0, 2.0);
  CHECK(o.delta == Approx(1.0).margin(1e-9));
  CHECK(o.resistance == Approx(0.2 / (1.0 * 2.0)).epsilon(1e-8));
}

TEST_CASE("uncoupled resonant design reports an unbounded resistance") {
  const auto o = optimal_rl(1.0, 0.0, 1.0, 1.0);
  CHECK_FALSE(o.resistance_bounded);
  CHECK(std::isinf(o.resistance));
  CHECK(o.inductance == Approx(1.0));  // tuning is still defined
}

TEST_CASE("doubling the transducer count at fixed total capacitance halves the inductance") {
  const double c_tot = 250.0e-9;
  const double w1 = 2.0 * kPi * 20.0;
  auto line_inductance = [&](int n) {
    const auto modes =
        electric_modes(build_lattice_matrix(n, 1.0, -1.0), Eigen::VectorXd::Ones(n));
    return optimal_rl(modes.lambda(0), 0.1, c_tot / n, w1).inductance;
  };
  const double ratio = line_inductance(64) / line_inductance(32);
  CHECK(ratio == Approx(0.5).epsilon(0.05));
}

TEST_CASE("inductance scaling approaches the large-lattice limit") {
  const int n = 50;
  const double c = 1.0e-7;
  const double w1 = 100.0;
  const auto modes = electric_modes(build_lattice_matrix(n, 1.0, -1.0), Eigen::VectorXd::Ones(n));
  const auto o = optimal_rl(modes.lambda(0), 0.1, c, w1);
  const double scaled = n * o.inductance * w1 * w1 * (n * c);
  const double limit = (kPi / 2.0) * (kPi / 2.0);
  CHECK(std::abs(scaled - limit) / scaled < 0.02);
}

TEST_CASE("round trip through the reduced parameters gives beta = 1 exactly") {
  const auto pt = prototype_point();
  const auto o = optimal_rl(pt.lambda1, pt.gamma, pt.c, pt.omega1);
  const auto p = reduced_params(o.inductance, o.resistance, pt.lambda1, pt.c, pt.omega1, pt.gamma);
  CHECK(p.beta == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("design optima keep the fixed points level") {
  const auto pt = prototype_point();
  const auto fp = fixed_points_rl(1.0, pt.gamma);
  CHECK(std::abs(fp.magnitude_s - fp.magnitude_t) / fp.magnitude_s < 1e-6);
}

TEST_CASE("boundary scan finds the open/shorted corner on the prototype data") {
  const auto& p = fixtures::prototype();
  const auto scan = boundary_scan(p.coupling, p.chi(), 5, 81);

  CHECK(scan.alpha0_opt == 1.0);
  CHECK(scan.alpha_n_opt == -1.0);
  CHECK(scan.gamma_max == Approx(0.167).epsilon(0.05));
  CHECK(scan.gamma_max == Approx(0.167963).epsilon(1e-4));  // frozen pipeline value
  CHECK(scan.lambda1_opt == Approx(0.121222032345).epsilon(1e-9));
  CHECK(scan.skipped.empty());

  // grid includes the exact endpoints
  CHECK(scan.alpha0_grid.front() == -1.0);
  CHECK(scan.alpha0_grid.back() == 1.0);

  // the emitted surface peaks at the optimum with the effective coupling
  Eigen::Index imax, jmax;
  scan.gamma_surface.maxCoeff(&imax, &jmax);
  CHECK(scan.alpha0_grid[static_cast<std::size_t>(imax)] == 1.0);
  CHECK(scan.alpha_n_grid[static_cast<std::size_t>(jmax)] == -1.0);
  CHECK(scan.gamma_surface(imax, jmax) == Approx(scan.gamma_max));
}

TEST_CASE("scan maximum is invariant under a global sign flip of the couplings") {
  const auto& p = fixtures::prototype();
  const auto a = boundary_scan(p.coupling, p.chi(), 5, 21);
  const auto b = boundary_scan(-p.coupling, p.chi(), 5, 21);
  CHECK(a.gamma_max == Approx(b.gamma_max).epsilon(1e-14));
  CHECK(a.alpha0_opt == b.alpha0_opt);
  CHECK(a.alpha_n_opt == b.alpha_n_opt);
}

TEST_CASE("grid argmax agrees with a pattern-search polish") {
  const auto& p = fixtures::prototype();
  const auto scan = boundary_scan(p.coupling, p.chi(), 5, 41);
  const auto [a0, an] = pattern_search(p.coupling, p.chi(), 5, scan.alpha0_opt, scan.alpha_n_opt);
  CHECK(std::abs(a0 - scan.alpha0_opt) < 1e-3);
  CHECK(std::abs(an - scan.alpha_n_opt) < 1e-3);
}

TEST_CASE("degenerate two-node corner cells are skipped and flagged") {
  Eigen::VectorXd row(2), chi(2);
  row << 0.1, 0.05;
  chi << 1.0, 1.0;
  const auto scan = boundary_scan(row, chi, 2, 11);
  REQUIRE(scan.skipped.size() == 1);  // only (-1, -1) has no active node
  const auto [i, j] = scan.skipped.front();
  CHECK(scan.alpha0_grid[static_cast<std::size_t>(i)] == -1.0);
  CHECK(scan.alpha_n_grid[static_cast<std::size_t>(j)] == -1.0);
  CHECK(std::isnan(scan.coupling_sum_surface(i, j)));
}

TEST_CASE("scan maximum respects a shared relabeling symmetry") {
  Eigen::VectorXd row(4), chi(4);
  row << 0.02, 0.08, 0.08, 0.02;  // palindrome
  chi << 1.1, 0.9, 0.9, 1.1;
  const auto scan = boundary_scan(row, chi, 4, 21);
  const auto flipped = boundary_scan(row.reverse(), chi.reverse(), 4, 21);
  CHECK(scan.gamma_max == Approx(flipped.gamma_max).epsilon(1e-12));
}

TEST_CASE("performance ratio values and monotonicity") {
  CHECK(performance_ratio(0.167) == Approx(8.53).epsilon(0.01));
  CHECK(performance_ratio(std::sqrt(2.0)) == Approx(std::sqrt(2.0)));
  double prev = 1e9;
  for (double g = 0.05; g <= 0.5; g += 0.01) {
    const double r = performance_ratio(g);
    CHECK(r < prev);
    prev = r;
  }
  REQUIRE_THROWS_AS(performance_ratio(0.0), ValidationError);
}

TEST_CASE("boundary elements follow the scaling rule") {
  const auto open = boundary_element(1.0, 100.0);
  CHECK(open.open);
  const auto shorted = boundary_element(-1.0, 100.0);
  CHECK(shorted.shorted);
  const auto mid = boundary_element(0.5, 100.0);
  CHECK(mid.value == Approx(300.0));  // (1 + a) / (1 - a) times the line value
}

TEST_CASE("scan input validation") {
  Eigen::VectorXd row(3), chi(4);
  row.setOnes();
  chi.setOnes();
  REQUIRE_THROWS_AS(boundary_scan(row, chi, 4, 21), ValidationError);
  Eigen::VectorXd row4 = Eigen::VectorXd::Ones(4);
  REQUIRE_THROWS_AS(boundary_scan(row4, chi, 4, 5), ValidationError);
}
