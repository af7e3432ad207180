#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pembeam/beam.hpp"
#include "pembeam/errors.hpp"
#include "pembeam/numeric.hpp"

namespace pembeam {

/// Measured per-transducer parameters injected directly, bypassing the beam model.
struct MeasuredParams {
  Eigen::VectorXd coupling;      // dimensionless per-transducer coupling row
  Eigen::VectorXd capacitances;  // F
  double omega1 = 0.0;           // rad/s

  int node_count() const { return static_cast<int>(coupling.size()); }
  double mean_capacitance() const { return capacitances.mean(); }
  Eigen::VectorXd chi() const { return capacitances / capacitances.mean(); }
};

struct NetworkSettings {
  std::string kind = "rl";  // "rl" or "r"
  double alpha0 = 1.0;
  double alpha_n = -1.0;
  std::optional<double> line_inductance;  // H
  std::optional<double> line_resistance;  // ohm
};

struct SolverSettings {
  int elements_per_segment = 8;
  int modes = 5;
  int grid_points = 4001;
  double max_dimensionless_frequency = 3.0;
  int boundary_grid = 81;
};

struct CatalogSettings {
  double resistor_min = 1.0;
  double resistor_max = 1.0e7;
  std::vector<double> capacitors;  // F
  std::string capacitor_dielectric = "polyester";
  bool allow_capacitor_pairs = false;
};

struct ProjectConfig {
  std::optional<MeasuredParams> measured;
  std::optional<BeamAssembly> assembly;
  NetworkSettings network;
  SolverSettings solver;
  std::optional<CatalogSettings> catalog;
  std::vector<double> damping;  // modal damping ratios, optional
  std::string source_text;      // raw bytes, hashed into emitted artifacts

  std::uint64_t hash() const { return fnv1a64(source_text); }
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void config_error(const std::string& path, const std::string& what) {
  throw ValidationError("config." + path + ": " + what);
}

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      std::string known;
      for (const auto& k : allowed) known += (known.empty() ? "" : ", ") + k;
      config_error(join_path(path, it.key()),
                   "unknown key (known keys: " + known + ")");
    }
  }
}

inline double get_double(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) config_error(join_path(path, key), "missing required number");
  if (!obj[key].is_number()) config_error(join_path(path, key), "must be a number");
  return obj[key].get<double>();
}

inline double get_double_or(const json& obj, const std::string& path, const std::string& key,
                            double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) config_error(join_path(path, key), "must be a number");
  return obj[key].get<double>();
}

inline int get_int_or(const json& obj, const std::string& path, const std::string& key,
                      int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) config_error(join_path(path, key), "must be an integer");
  return obj[key].get<int>();
}

inline std::vector<double> get_array(const json& obj, const std::string& path,
                                     const std::string& key) {
  if (!obj.contains(key)) config_error(join_path(path, key), "missing required array");
  if (!obj[key].is_array()) config_error(join_path(path, key), "must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : obj[key]) {
    if (!x.is_number()) config_error(join_path(path, key), "must contain only numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

inline MeasuredParams parse_measured(const json& obj) {
  reject_unknown_keys(obj, "measured",
                      {"coupling", "capacitances_f", "first_mode_hz", "first_mode_rad_s"});
  MeasuredParams m;
  const auto g = get_array(obj, "measured", "coupling");
  const auto c = get_array(obj, "measured", "capacitances_f");
  if (g.size() != c.size()) {
    config_error("measured", "coupling and capacitances_f must have the same length");
  }
  if (g.size() < 2) config_error("measured", "needs at least 2 transducers");
  m.coupling = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
  m.capacitances = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  for (double x : c) {
    if (!(x > 0.0)) config_error("measured.capacitances_f", "values must be positive");
  }
  const bool has_hz = obj.contains("first_mode_hz");
  const bool has_rad = obj.contains("first_mode_rad_s");
  if (has_hz == has_rad) {
    config_error("measured", "specify exactly one of first_mode_hz, first_mode_rad_s");
  }
  m.omega1 = has_hz ? 2.0 * kPi * get_double(obj, "measured", "first_mode_hz")
                    : get_double(obj, "measured", "first_mode_rad_s");
  if (!(m.omega1 > 0.0)) config_error("measured", "first mode frequency must be positive");
  return m;
}

inline TransducerPatch parse_transducer(const json& obj, const std::string& path) {
  reject_unknown_keys(obj, path,
                      {"x_m", "length_m", "bending_stiffness_nm2", "mass_per_length_kg_m",
                       "coupling_nm_v", "capacitance_f"});
  TransducerPatch t;
  t.x = get_double(obj, path, "x_m");
  t.length = get_double(obj, path, "length_m");
  t.stiffness = get_double(obj, path, "bending_stiffness_nm2");
  t.mass_per_length = get_double(obj, path, "mass_per_length_kg_m");
  t.coupling = get_double(obj, path, "coupling_nm_v");
  t.capacitance = get_double(obj, path, "capacitance_f");
  return t;
}

inline BeamAssembly parse_assembly(const json& root) {
  BeamAssembly a;
  const auto& beam = root["beam"];
  if (!beam.is_object()) config_error("beam", "must be an object");
  reject_unknown_keys(beam, "beam",
                      {"length_m", "bending_stiffness_nm2", "mass_per_length_kg_m"});
  a.length = get_double(beam, "beam", "length_m");
  a.stiffness = get_double(beam, "beam", "bending_stiffness_nm2");
  a.mass_per_length = get_double(beam, "beam", "mass_per_length_kg_m");

  if (!root.contains("transducers") || !root["transducers"].is_array()) {
    config_error("transducers", "physics mode requires a transducer array");
  }
  int idx = 0;
  for (const auto& t : root["transducers"]) {
    a.transducers.push_back(parse_transducer(t, "transducers[" + std::to_string(idx) + "]"));
    ++idx;
  }
  if (root.contains("actuator")) {
    const auto& act = root["actuator"];
    reject_unknown_keys(act, "actuator",
                        {"x_m", "length_m", "bending_stiffness_nm2", "mass_per_length_kg_m",
                         "coupling_nm_v"});
    ActuatorPatch p;
    p.x = get_double(act, "actuator", "x_m");
    p.length = get_double(act, "actuator", "length_m");
    p.stiffness = get_double(act, "actuator", "bending_stiffness_nm2");
    p.mass_per_length = get_double(act, "actuator", "mass_per_length_kg_m");
    p.coupling = get_double(act, "actuator", "coupling_nm_v");
    a.actuator = p;
  }
  return a;
}

}  // namespace detail

inline ProjectConfig parse_config(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("config root must be an object");
  detail::reject_unknown_keys(root, "",
                              {"measured", "beam", "transducers", "actuator", "network",
                               "solver", "catalog", "damping"});

  ProjectConfig cfg;
  cfg.source_text = text;

  if (root.contains("measured")) cfg.measured = detail::parse_measured(root["measured"]);
  if (root.contains("beam")) cfg.assembly = detail::parse_assembly(root);
  if (!root.contains("beam") && root.contains("transducers")) {
    detail::config_error("transducers", "requires a beam section");
  }
  if (!cfg.measured && !cfg.assembly) {
    throw ValidationError(
        "config: specify measured parameters, a beam assembly, or both");
  }

  if (root.contains("network")) {
    const auto& net = root["network"];
    detail::reject_unknown_keys(net, "network",
                                {"kind", "alpha0", "alpha_n", "line_inductance_h",
                                 "line_resistance_ohm"});
    if (net.contains("kind")) {
      if (!net["kind"].is_string()) detail::config_error("network.kind", "must be a string");
      cfg.network.kind = net["kind"].get<std::string>();
      if (cfg.network.kind != "rl" && cfg.network.kind != "r") {
        detail::config_error("network.kind", "must be \"rl\" or \"r\"");
      }
    }
    cfg.network.alpha0 = detail::get_double_or(net, "network", "alpha0", 1.0);
    cfg.network.alpha_n = detail::get_double_or(net, "network", "alpha_n", -1.0);
    if (cfg.network.alpha0 < -1.0 || cfg.network.alpha0 > 1.0 || cfg.network.alpha_n < -1.0 ||
        cfg.network.alpha_n > 1.0) {
      detail::config_error("network", "boundary parameters must lie in [-1, 1]");
    }
    if (net.contains("line_inductance_h")) {
      cfg.network.line_inductance = detail::get_double(net, "network", "line_inductance_h");
      if (!(*cfg.network.line_inductance > 0.0)) {
        detail::config_error("network.line_inductance_h", "must be positive");
      }
    }
    if (net.contains("line_resistance_ohm")) {
      cfg.network.line_resistance = detail::get_double(net, "network", "line_resistance_ohm");
      if (!(*cfg.network.line_resistance > 0.0)) {
        detail::config_error("network.line_resistance_ohm", "must be positive");
      }
    }
  }

  if (root.contains("solver")) {
    const auto& s = root["solver"];
    detail::reject_unknown_keys(s, "solver",
                                {"elements_per_segment", "modes", "grid_points",
                                 "max_dimensionless_frequency", "boundary_grid"});
    cfg.solver.elements_per_segment = detail::get_int_or(s, "solver", "elements_per_segment", 8);
    cfg.solver.modes = detail::get_int_or(s, "solver", "modes", 5);
    cfg.solver.grid_points = detail::get_int_or(s, "solver", "grid_points", 4001);
    cfg.solver.max_dimensionless_frequency =
        detail::get_double_or(s, "solver", "max_dimensionless_frequency", 3.0);
    cfg.solver.boundary_grid = detail::get_int_or(s, "solver", "boundary_grid", 81);
    if (cfg.solver.elements_per_segment < 1) {
      detail::config_error("solver.elements_per_segment", "must be >= 1");
    }
    if (cfg.solver.modes < 1) detail::config_error("solver.modes", "must be >= 1");
    if (cfg.solver.grid_points < 16) detail::config_error("solver.grid_points", "must be >= 16");
    if (!(cfg.solver.max_dimensionless_frequency > 0.0)) {
      detail::config_error("solver.max_dimensionless_frequency", "must be positive");
    }
    if (cfg.solver.boundary_grid < 11) {
      detail::config_error("solver.boundary_grid", "must be >= 11");
    }
  }

  if (root.contains("catalog")) {
    const auto& c = root["catalog"];
    detail::reject_unknown_keys(c, "catalog",
                                {"resistor_min_ohm", "resistor_max_ohm", "capacitors_f",
                                 "capacitor_dielectric", "allow_capacitor_pairs"});
    CatalogSettings cat;
    cat.resistor_min = detail::get_double_or(c, "catalog", "resistor_min_ohm", 1.0);
    cat.resistor_max = detail::get_double_or(c, "catalog", "resistor_max_ohm", 1.0e7);
    cat.capacitors = detail::get_array(c, "catalog", "capacitors_f");
    if (c.contains("capacitor_dielectric")) {
      if (!c["capacitor_dielectric"].is_string()) {
        detail::config_error("catalog.capacitor_dielectric", "must be a string");
      }
      cat.capacitor_dielectric = c["capacitor_dielectric"].get<std::string>();
    }
    if (c.contains("allow_capacitor_pairs")) {
      if (!c["allow_capacitor_pairs"].is_boolean()) {
        detail::config_error("catalog.allow_capacitor_pairs", "must be a boolean");
      }
      cat.allow_capacitor_pairs = c["allow_capacitor_pairs"].get<bool>();
    }
    cfg.catalog = cat;
  }

  if (root.contains("damping")) {
    cfg.damping = detail::get_array(root, "", "damping");
    for (double z : cfg.damping) {
      if (z < 0.0) detail::config_error("damping", "ratios must be nonnegative");
    }
  }
  return cfg;
}

inline ProjectConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pembeam
