#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pembeam/pembeam.hpp"

namespace pembeam::cli {

/// Everything the pipeline needs at one network configuration, resolved from
/// either the measured dataset or the physics model.
struct OperatingPoint {
  int n = 0;
  Eigen::VectorXd gamma_row;
  Eigen::VectorXd chi;
  double mean_capacitance = 0.0;
  double omega1 = 0.0;
  ElectricModes modes;
  double lambda1 = 0.0;
  double gamma_eff = 0.0;
  std::string mode;  // "measured" or "physics"
  std::optional<ModalBasis> basis;
  std::optional<CouplingTable> table;
};

inline OperatingPoint resolve_point(const ProjectConfig& cfg, const std::string& mode_choice,
                                    double alpha0, double alpha_n) {
  std::string mode = mode_choice;
  if (mode.empty()) mode = cfg.measured ? "measured" : "physics";
  if (mode != "measured" && mode != "physics") {
    throw ValidationError("mode must be \"measured\" or \"physics\"");
  }

  OperatingPoint op;
  op.mode = mode;
  if (mode == "measured") {
    if (!cfg.measured) throw ValidationError("config has no measured section");
    op.n = cfg.measured->node_count();
    op.gamma_row = cfg.measured->coupling;
    op.chi = cfg.measured->chi();
    op.mean_capacitance = cfg.measured->mean_capacitance();
    op.omega1 = cfg.measured->omega1;
  } else {
    if (!cfg.assembly) throw ValidationError("config has no beam assembly");
    const auto profile = assemble_profile(*cfg.assembly);
    MeshOptions mesh;
    mesh.elements_per_segment = cfg.solver.elements_per_segment;
    op.basis = compute_modes(profile, cfg.solver.modes, mesh);
    op.table = coupling_matrix(*op.basis, *cfg.assembly);
    op.n = static_cast<int>(cfg.assembly->transducers.size());
    if (op.n < 2) throw ValidationError("physics mode needs at least 2 transducers");
    op.gamma_row = op.table->dimensionless.row(0).transpose();
    Eigen::VectorXd caps(op.n);
    for (int i = 0; i < op.n; ++i) {
      caps(i) = cfg.assembly->transducers[static_cast<std::size_t>(i)].capacitance;
    }
    op.mean_capacitance = caps.mean();
    op.chi = caps / op.mean_capacitance;
    op.omega1 = op.basis->omega(0);
  }
  op.modes = electric_modes(build_lattice_matrix(op.n, alpha0, alpha_n), op.chi);
  op.lambda1 = op.modes.lambda(0);
  op.gamma_eff = effective_coupling(op.gamma_row, op.chi, op.modes);
  return op;
}

namespace detail {

inline std::string describe_boundary(const BoundaryElement& e, const std::string& unit) {
  if (e.open) return "open";
  if (e.shorted) return "short";
  return format_double(e.value) + " " + unit;
}

inline nlohmann::ordered_json boundary_json(const BoundaryElement& e) {
  nlohmann::ordered_json j;
  j["open"] = e.open;
  j["short"] = e.shorted;
  if (!e.open && !e.shorted) j["value"] = e.value;
  return j;
}

inline void emit_scan(const BoundaryScan& scan, const std::filesystem::path& out,
                      std::uint64_t hash) {
  std::string csv = file_header(hash, "alpha0, alpha_n, gamma (dimensionless)");
  csv += "alpha0,alpha_n,gamma\n";
  for (std::size_t i = 0; i < scan.alpha0_grid.size(); ++i) {
    for (std::size_t j = 0; j < scan.alpha_n_grid.size(); ++j) {
      csv += format_double(scan.alpha0_grid[i]) + "," + format_double(scan.alpha_n_grid[j]) +
             "," +
             format_double(scan.gamma_surface(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(j))) +
             "\n";
    }
  }
  write_text_file(out, csv);
}

struct VariantSpec {
  std::string label;
  double resistance;
  std::optional<double> inductance;
};

}  // namespace detail

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  int grid = 0;  // 0: take from config
  bool hz = false;
  bool dimensionless = false;
  std::string mode;  // empty: auto
  std::vector<double> damping;
};

inline int run(std::vector<std::string> args) {
  CLI::App app{"design toolkit for beam vibration damping through distributed "
               "piezoelectric transducer networks"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--config", g.config_path, "path to the JSON configuration");
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--grid", g.grid, "frequency/scan grid resolution override");
  app.add_flag("--hz", g.hz, "emit frequencies in Hz");
  app.add_flag("--dimensionless", g.dimensionless, "emit dimensionless frequencies (default)");
  app.add_option("--mode", g.mode, "input mode: physics or measured");
  app.add_option("--damping", g.damping, "modal damping ratios for response prediction")
      ->delimiter(',');

  auto* cmd_modal = app.add_subcommand("modal", "mechanical mode shapes and frequencies");
  auto* cmd_network = app.add_subcommand("network", "electric eigenvalue report");
  auto* cmd_scan = app.add_subcommand("boundary-scan", "coupling over the boundary square");
  auto* cmd_orl = app.add_subcommand("optimize-rl", "optimal resonant network design");
  auto* cmd_or = app.add_subcommand("optimize-r", "optimal resistive network design");
  auto* cmd_respond = app.add_subcommand("respond", "predicted mobility responses");
  auto* cmd_synth = app.add_subcommand("synth", "synthetic inductor component selection");
  auto* cmd_verify = app.add_subcommand("verify", "run the bundled-dataset acceptance checks");

  double synth_target = 0.0;
  std::string synth_topology = "deboo";
  cmd_synth->add_option("--target", synth_target, "target inductance, H (default: optimal line)");
  cmd_synth->add_option("--topology", synth_topology, "deboo or antoniou")
      ->check(CLI::IsMember({"deboo", "antoniou"}));

  std::vector<const char*> argv;
  argv.push_back("pembeam");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ProjectConfig cfg = g.config_path.empty() ? parse_config(prototype_config_json())
                                              : load_config(g.config_path);
    const std::uint64_t hash = cfg.hash();
    const std::filesystem::path out(g.out_dir);

    if (*cmd_verify) {
      return run_acceptance(std::cout) ? 0 : 2;
    }

    if (*cmd_modal) {
      if (!cfg.assembly) throw ValidationError("modal requires a beam assembly in the config");
      const auto profile = assemble_profile(*cfg.assembly);
      MeshOptions mesh;
      mesh.elements_per_segment = cfg.solver.elements_per_segment;
      const auto basis = compute_modes(profile, cfg.solver.modes, mesh);

      std::vector<std::string> cols{"x_m"};
      for (int i = 0; i < basis.mode_count(); ++i) {
        cols.push_back("mode" + std::to_string(i + 1) + "_deflection");
        cols.push_back("mode" + std::to_string(i + 1) + "_slope_per_m");
      }
      std::vector<std::vector<double>> rows;
      for (Eigen::Index nnode = 0; nnode < basis.node_x.size(); ++nnode) {
        std::vector<double> row{basis.node_x(nnode)};
        for (int i = 0; i < basis.mode_count(); ++i) {
          row.push_back(basis.deflection(nnode, i));
          row.push_back(basis.slope(nnode, i));
        }
        rows.push_back(std::move(row));
      }
      write_text_file(out / "modes.csv",
                      file_header(hash, "x in m, deflection dimensionless, slope in 1/m") +
                          csv_table(cols, rows));

      std::string summary = file_header(hash, "frequencies in Hz and rad/s; mass in kg");
      summary += "total_mass_kg " + format_double(basis.total_mass) + "\n";
      for (int i = 0; i < basis.mode_count(); ++i) {
        summary += "mode " + std::to_string(i + 1) + " " +
                   format_double(basis.omega(i) / (2.0 * kPi)) + " Hz (" +
                   format_double(basis.omega(i)) + " rad/s)\n";
      }
      write_text_file(out / "modal_summary.txt", summary);
      std::cout << summary;
      return 0;
    }

    if (*cmd_network) {
      const auto op = resolve_point(cfg, g.mode, cfg.network.alpha0, cfg.network.alpha_n);
      std::vector<std::string> cols{"mode", "lambda"};
      for (int i = 0; i < op.n; ++i) cols.push_back("psi_" + std::to_string(i + 1));
      std::vector<std::vector<double>> rows;
      for (int h = 0; h < op.modes.effective_dim; ++h) {
        std::vector<double> row{static_cast<double>(h + 1), op.modes.lambda(h)};
        for (int i = 0; i < op.n; ++i) row.push_back(op.modes.psi(i, h));
        rows.push_back(std::move(row));
      }
      write_text_file(out / "electric_modes.csv",
                      file_header(hash, "dimensionless eigenvalues and chi-normalised modes") +
                          csv_table(cols, rows));
      std::cout << "lambda1 = " << format_double(op.lambda1)
                << ", effective coupling = " << format_double(op.gamma_eff) << " ("
                << op.mode << " mode, boundaries " << format_double(cfg.network.alpha0) << ", "
                << format_double(cfg.network.alpha_n) << ")\n";
      return 0;
    }

    if (*cmd_scan) {
      const auto op = resolve_point(cfg, g.mode, cfg.network.alpha0, cfg.network.alpha_n);
      const int res = g.grid > 0 ? g.grid : cfg.solver.boundary_grid;
      const auto scan = boundary_scan(op.gamma_row, op.chi, op.n, res);
      detail::emit_scan(scan, out / "boundary_scan.csv", hash);
      std::cout << "argmax (alpha0, alpha_n) = (" << format_double(scan.alpha0_opt) << ", "
                << format_double(scan.alpha_n_opt)
                << "), gamma_max = " << format_double(scan.gamma_max) << "\n";
      return 0;
    }

    if (*cmd_orl || *cmd_or) {
      const auto op = resolve_point(cfg, g.mode, 1.0, -1.0);
      const int res = g.grid > 0 ? g.grid : cfg.solver.boundary_grid;
      const auto scan = boundary_scan(op.gamma_row, op.chi, op.n, res);
      const auto opt_modes =
          electric_modes(build_lattice_matrix(op.n, scan.alpha0_opt, scan.alpha_n_opt), op.chi);
      const double lambda1 = opt_modes.lambda(0);
      const double gamma = effective_coupling(op.gamma_row, op.chi, opt_modes);
      detail::emit_scan(scan, out / "boundary_scan.csv", hash);

      nlohmann::ordered_json j;
      std::string txt = file_header(hash, "H, ohm, rad/s, dimensionless");
      if (*cmd_orl) {
        const auto rl = optimal_rl(lambda1, gamma, op.mean_capacitance, op.omega1);
        j["network"] = "rl";
        j["input_mode"] = op.mode;
        j["lambda1"] = rl.lambda1;
        j["gamma"] = rl.gamma;
        j["inductance_h"] = rl.inductance;
        j["resistance_ohm"] = rl.resistance;
        j["resistance_flat_ohm"] = rl.resistance_flat;
        j["beta"] = rl.beta;
        j["delta"] = rl.delta;
        j["delta_flat"] = rl.delta_flat;
        j["predicted_peak_response"] = rl.predicted_hinf;
        j["alpha0"] = scan.alpha0_opt;
        j["alpha_n"] = scan.alpha_n_opt;
        j["boundary_r0"] = detail::boundary_json(boundary_element(scan.alpha0_opt, rl.resistance));
        j["boundary_l0"] = detail::boundary_json(boundary_element(scan.alpha0_opt, rl.inductance));
        j["boundary_rn"] = detail::boundary_json(boundary_element(scan.alpha_n_opt, rl.resistance));
        j["boundary_ln"] = detail::boundary_json(boundary_element(scan.alpha_n_opt, rl.inductance));
        txt += "network rl (" + op.mode + " mode)\n";
        txt += "lambda1 " + format_double(rl.lambda1) + "\n";
        txt += "gamma " + format_double(rl.gamma) + "\n";
        txt += "L_opt " + format_double(rl.inductance) + " H\n";
        txt += "R_opt " + format_double(rl.resistance) + " ohm\n";
        txt += "R_flat " + format_double(rl.resistance_flat) + " ohm\n";
        txt += "predicted peak response " + format_double(rl.predicted_hinf) + "\n";
        txt += "boundaries alpha0 " + format_double(scan.alpha0_opt) + " (R0 " +
               detail::describe_boundary(boundary_element(scan.alpha0_opt, rl.resistance), "ohm") +
               ", L0 " +
               detail::describe_boundary(boundary_element(scan.alpha0_opt, rl.inductance), "H") +
               "), alpha_n " + format_double(scan.alpha_n_opt) + " (Rn " +
               detail::describe_boundary(boundary_element(scan.alpha_n_opt, rl.resistance), "ohm") +
               ", Ln " +
               detail::describe_boundary(boundary_element(scan.alpha_n_opt, rl.inductance), "H") +
               ")\n";
        std::cout << "L_opt = " << format_double(rl.inductance)
                  << " H, R_opt = " << format_double(rl.resistance)
                  << " ohm, gamma = " << format_double(rl.gamma) << "\n";
      } else {
        const auto ro = optimal_r(lambda1, gamma, op.mean_capacitance, op.omega1);
        j["network"] = "r";
        j["input_mode"] = op.mode;
        j["lambda1"] = ro.lambda1;
        j["gamma"] = ro.gamma;
        j["resistance_ohm"] = ro.resistance;
        j["delta"] = ro.delta;
        j["predicted_peak_response"] = ro.predicted_hinf;
        j["alpha0"] = scan.alpha0_opt;
        j["alpha_n"] = scan.alpha_n_opt;
        j["boundary_r0"] = detail::boundary_json(boundary_element(scan.alpha0_opt, ro.resistance));
        j["boundary_rn"] = detail::boundary_json(boundary_element(scan.alpha_n_opt, ro.resistance));
        txt += "network r (" + op.mode + " mode)\n";
        txt += "lambda1 " + format_double(ro.lambda1) + "\n";
        txt += "gamma " + format_double(ro.gamma) + "\n";
        txt += "R_opt " + format_double(ro.resistance) + " ohm\n";
        txt += "predicted peak response " + format_double(ro.predicted_hinf) + "\n";
        txt += "boundaries alpha0 " + format_double(scan.alpha0_opt) + " (R0 " +
               detail::describe_boundary(boundary_element(scan.alpha0_opt, ro.resistance), "ohm") +
               "), alpha_n " + format_double(scan.alpha_n_opt) + " (Rn " +
               detail::describe_boundary(boundary_element(scan.alpha_n_opt, ro.resistance), "ohm") +
               ")\n";
        std::cout << "R_opt = " << format_double(ro.resistance)
                  << " ohm, gamma = " << format_double(ro.gamma) << "\n";
      }
      write_text_file(out / "report.txt", txt);
      write_text_file(out / "report.json", j.dump(2) + "\n");
      return 0;
    }

    if (*cmd_respond) {
      const auto op = resolve_point(cfg, g.mode, cfg.network.alpha0, cfg.network.alpha_n);
      const bool want_rl = cfg.network.kind == "rl";
      double line_l = 0.0;
      double center_r = 0.0;
      if (want_rl) {
        const auto rl = optimal_rl(op.lambda1, op.gamma_eff, op.mean_capacitance, op.omega1);
        line_l = cfg.network.line_inductance.value_or(rl.inductance);
        center_r = cfg.network.line_resistance.value_or(rl.resistance_flat);
      } else {
        const auto ro = optimal_r(op.lambda1, op.gamma_eff, op.mean_capacitance, op.omega1);
        center_r = cfg.network.line_resistance.value_or(ro.resistance);
      }

      LatticeNetwork net;
      net.node_count = op.n;
      net.alpha0 = cfg.network.alpha0;
      net.alpha_n = cfg.network.alpha_n;
      net.chi = op.chi;
      if (want_rl) net.inductance = line_l;

      Eigen::VectorXd omegas;
      Eigen::MatrixXd grow;
      if (op.mode == "physics") {
        omegas = op.basis->omega;
        grow = op.table->dimensionless;
      } else {
        omegas.resize(1);
        omegas << op.omega1;
        grow.resize(1, op.n);
        grow.row(0) = calibrated_coupling_row(op.gamma_row, op.chi, op.modes).transpose();
      }
      Eigen::VectorXd zeta;
      if (!g.damping.empty()) {
        zeta = Eigen::Map<const Eigen::VectorXd>(g.damping.data(),
                                                 static_cast<Eigen::Index>(g.damping.size()));
        if (zeta.size() != omegas.size()) {
          throw ValidationError("--damping needs one ratio per retained mode");
        }
      } else if (!cfg.damping.empty()) {
        zeta = Eigen::Map<const Eigen::VectorXd>(cfg.damping.data(),
                                                 static_cast<Eigen::Index>(cfg.damping.size()));
        if (zeta.size() != omegas.size()) {
          throw ValidationError("config.damping needs one ratio per retained mode");
        }
      }

      const int pts = g.grid > 0 ? g.grid : cfg.solver.grid_points;
      const double whi = cfg.solver.max_dimensionless_frequency;
      const auto grid = linspace(whi / pts, whi, pts);
      Eigen::VectorXd drive = Eigen::VectorXd::Zero(omegas.size());
      drive(0) = 1.0;

      const std::vector<detail::VariantSpec> variants{
          {"optimal", center_r, want_rl ? std::optional<double>(line_l) : std::nullopt},
          {"half_resistance", 0.5 * center_r,
           want_rl ? std::optional<double>(line_l) : std::nullopt},
          {"double_resistance", 2.0 * center_r,
           want_rl ? std::optional<double>(line_l) : std::nullopt}};
      for (const auto& v : variants) {
        LatticeNetwork vnet = net;
        vnet.resistance = v.resistance;
        vnet.inductance = v.inductance;
        auto sys = assemble_modal(omegas, grow, vnet, zeta);
        set_line_impedances(sys, vnet, op.mean_capacitance);
        auto resp = frequency_response(sys, drive, grid);
        resp.meta.push_back("variant=" + v.label);
        resp.meta.push_back("network=" + cfg.network.kind);
        resp.meta.push_back("line_resistance_ohm=" + format_double(v.resistance));
        if (v.inductance) {
          resp.meta.push_back("line_inductance_h=" + format_double(*v.inductance));
        }
        if (g.hz && !g.dimensionless) {
          resp.frequency_in_hz = true;
          for (auto& f : resp.frequency) f *= op.omega1 / (2.0 * kPi);
        }
        write_text_file(out / ("response_" + v.label + ".csv"), response_csv(resp, hash));
      }
      std::cout << "wrote " << variants.size() << " response files to " << out.string() << "\n";
      return 0;
    }

    if (*cmd_synth) {
      if (!cfg.catalog) throw ValidationError("synth requires a catalog section in the config");
      auto cat = default_catalog(cfg.catalog->capacitors, cfg.catalog->resistor_min,
                                 cfg.catalog->resistor_max);
      cat.allow_capacitor_pairs = cfg.catalog->allow_capacitor_pairs;
      cat.capacitor_dielectric = cfg.catalog->capacitor_dielectric;
      double target = synth_target;
      if (target <= 0.0) {
        const auto op = resolve_point(cfg, g.mode, 1.0, -1.0);
        target = optimal_rl(op.lambda1, op.gamma_eff, op.mean_capacitance, op.omega1).inductance;
      }
      const auto topo = synth_topology == "deboo" ? InductorTopology::DebooFloating
                                                  : InductorTopology::AntoniouGrounded;
      const auto real = synthesize(target, topo, cat);

      nlohmann::ordered_json j;
      j["topology"] = synth_topology;
      j["target_h"] = real.target;
      j["feasible"] = real.feasible;
      j["realized_h"] = real.realized;
      j["relative_error"] = real.relative_error;
      std::string txt = file_header(hash, "ohm, F, H");
      txt += "topology " + synth_topology + "\n";
      txt += "target " + format_double(real.target) + " H\n";
      if (!real.feasible) {
        j["achievable_min_h"] = real.achievable_min;
        j["achievable_max_h"] = real.achievable_max;
        txt += "infeasible: achievable range [" + format_double(real.achievable_min) + ", " +
               format_double(real.achievable_max) + "] H\n";
      } else if (topo == InductorTopology::DebooFloating) {
        j["resistance_ohm"] = real.resistance;
        j["capacitance_f"] = real.capacitance;
        j["capacitor_dielectric"] = cat.capacitor_dielectric;
        txt += "R " + format_double(real.resistance) + " ohm\n";
        txt += "C " + format_double(real.capacitance) + " F (" + cat.capacitor_dielectric +
               ")\n";
      } else {
        j["r1_ohm"] = real.r1;
        j["r2_ohm"] = real.r2;
        j["r3_ohm"] = real.r3;
        j["r4_ohm"] = real.r4;
        j["r6_ohm"] = real.r6;
        j["c5_f"] = real.c5;
        j["capacitor_dielectric"] = cat.capacitor_dielectric;
        txt += "R1 " + format_double(real.r1) + " ohm\n";
        txt += "R2 " + format_double(real.r2) + " ohm\n";
        txt += "R3 " + format_double(real.r3) + " ohm (quality trim)\n";
        txt += "R4 " + format_double(real.r4) + " ohm\n";
        txt += "R6 " + format_double(real.r6) + " ohm\n";
        txt += "C5 " + format_double(real.c5) + " F (" + cat.capacitor_dielectric + ")\n";
      }
      if (!real.capacitor_composition.empty()) {
        j["capacitor_composition"] = real.capacitor_composition;
        j["capacitor_part_a_f"] = real.capacitor_part_a;
        j["capacitor_part_b_f"] = real.capacitor_part_b;
        txt += "capacitor composed as " + real.capacitor_composition + " of " +
               format_double(real.capacitor_part_a) + " F and " +
               format_double(real.capacitor_part_b) + " F\n";
      }
      txt += "realized " + format_double(real.realized) + " H (relative error " +
             format_double(real.relative_error) + ")\n";
      write_text_file(out / "realization.txt", txt);
      write_text_file(out / "realization.json", j.dump(2) + "\n");
      std::cout << txt;
      return real.feasible ? 0 : 2;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace pembeam::cli
