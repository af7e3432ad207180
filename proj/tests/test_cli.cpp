#include <unistd.h>

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pembeam/cli.hpp"
#include "pembeam/dataset.hpp"

using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("pembeam_test_" + tag + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const TempDir& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir.path / name;
  std::ofstream out(p);
  out << text;
  return p;
}

int run_quiet(std::vector<std::string> args) {
  std::ostringstream captured;
  auto* old = std::cout.rdbuf(captured.rdbuf());
  const int rc = pembeam::cli::run(std::move(args));
  std::cout.rdbuf(old);
  return rc;
}

const char* physics_config = R"({
  "beam": {"length_m": 1.0, "bending_stiffness_nm2": 1.0, "mass_per_length_kg_m": 1.0},
  "transducers": [
    {"x_m": 0.05, "length_m": 0.1, "bending_stiffness_nm2": 1e-6,
     "mass_per_length_kg_m": 1e-6, "coupling_nm_v": 1e-3, "capacitance_f": 5e-8},
    {"x_m": 0.25, "length_m": 0.1, "bending_stiffness_nm2": 1e-6,
     "mass_per_length_kg_m": 1e-6, "coupling_nm_v": 1e-3, "capacitance_f": 5e-8}
  ],
  "solver": {"modes": 3}
})";

}  // namespace

TEST_CASE("optimize-rl emits the design report and scan artifact") {
  TempDir dir("orl");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  const auto out = dir.path / "out";

  REQUIRE(run_quiet({"optimize-rl", "--config", cfg.string(), "--out", out.string()}) == 0);

  const auto j = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(j["network"] == "rl");
  CHECK(j["inductance_h"].get<double>() == Approx(139.07).epsilon(1e-3));
  CHECK(j["resistance_ohm"].get<double>() == Approx(130.24e3).epsilon(1e-3));
  CHECK(j["gamma"].get<double>() == Approx(0.16796).epsilon(1e-3));
  CHECK(j["alpha0"].get<double>() == 1.0);
  CHECK(j["alpha_n"].get<double>() == -1.0);
  CHECK(j["boundary_l0"]["open"].get<bool>());
  CHECK(j["boundary_ln"]["short"].get<bool>());

  const auto scan = read_file(out / "boundary_scan.csv");
  CHECK(scan.find("# pembeam") == 0);
  CHECK(scan.find("alpha0,alpha_n,gamma") != std::string::npos);

  const auto txt = read_file(out / "report.txt");
  CHECK(txt.find("L_opt") != std::string::npos);
}

TEST_CASE("optimize-r reproduces the resistive design") {
  TempDir dir("or");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  const auto out = dir.path / "out";
  REQUIRE(run_quiet({"optimize-r", "--config", cfg.string(), "--out", out.string()}) == 0);
  const auto j = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(j["resistance_ohm"].get<double>() == Approx(17.61e3).epsilon(1e-3));
}

TEST_CASE("artifacts are byte-identical across runs") {
  TempDir dir("det");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  const auto out1 = dir.path / "a";
  const auto out2 = dir.path / "b";
  REQUIRE(run_quiet({"optimize-rl", "--config", cfg.string(), "--out", out1.string()}) == 0);
  REQUIRE(run_quiet({"optimize-rl", "--config", cfg.string(), "--out", out2.string()}) == 0);
  CHECK(read_file(out1 / "report.json") == read_file(out2 / "report.json"));
  CHECK(read_file(out1 / "boundary_scan.csv") == read_file(out2 / "boundary_scan.csv"));
  CHECK(read_file(out1 / "report.txt") == read_file(out2 / "report.txt"));
}

TEST_CASE("boundary-scan respects the grid override") {
  TempDir dir("scan");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  const auto out = dir.path / "out";
  REQUIRE(run_quiet({"boundary-scan", "--config", cfg.string(), "--out", out.string(),
                     "--grid", "21"}) == 0);
  const auto scan = read_file(out / "boundary_scan.csv");
  // header lines plus column names plus 21 x 21 cells
  const auto rows = std::count(scan.begin(), scan.end(), '\n');
  CHECK(rows == 3 + 1 + 21 * 21);
}

TEST_CASE("respond writes the variant responses") {
  TempDir dir("resp");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  const auto out = dir.path / "out";
  REQUIRE(run_quiet({"respond", "--config", cfg.string(), "--out", out.string(), "--grid",
                     "301", "--hz"}) == 0);
  for (const char* name : {"response_optimal.csv", "response_half_resistance.csv",
                           "response_double_resistance.csv"}) {
    const auto text = read_file(out / name);
    CHECK(text.find("frequency_hz,magnitude,phase_rad") != std::string::npos);
    CHECK(text.find("# variant=") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') > 300);
  }
}

TEST_CASE("respond accepts damping ratios") {
  TempDir dir("respz");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  const auto out = dir.path / "out";
  REQUIRE(run_quiet({"respond", "--config", cfg.string(), "--out", out.string(), "--grid",
                     "101", "--damping", "0.01"}) == 0);
  const auto text = read_file(out / "response_optimal.csv");
  CHECK(text.find("mechanical_damping=on") != std::string::npos);
}

TEST_CASE("synth selects the bench components") {
  TempDir dir("synth");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  const auto out = dir.path / "out";
  REQUIRE(run_quiet({"synth", "--config", cfg.string(), "--out", out.string(), "--target",
                     "130.5"}) == 0);
  const auto j = nlohmann::json::parse(read_file(out / "realization.json"));
  CHECK(j["topology"] == "deboo");
  CHECK(j["resistance_ohm"].get<double>() == 2700.0);
  CHECK(j["capacitance_f"].get<double>() == Approx(17.9e-6));
  CHECK(j["realized_h"].get<double>() == Approx(130.491).epsilon(1e-5));
}

TEST_CASE("modal runs on a physics config") {
  TempDir dir("modal");
  const auto cfg = write_config(dir, "beam.json", physics_config);
  const auto out = dir.path / "out";
  REQUIRE(run_quiet({"modal", "--config", cfg.string(), "--out", out.string()}) == 0);
  const auto csv = read_file(out / "modes.csv");
  CHECK(csv.find("mode3_slope_per_m") != std::string::npos);
  const auto summary = read_file(out / "modal_summary.txt");
  CHECK(summary.find("mode 1") != std::string::npos);

  // a first frequency close to the uniform closed form (the patches are weightless)
  const auto j1 = summary.find("mode 1 ");
  const double f1 = std::stod(summary.substr(j1 + 7));
  CHECK(f1 == Approx(1.87510407 * 1.87510407 / (2.0 * pembeam::kPi)).epsilon(1e-3));
}

TEST_CASE("network emits the eigen table") {
  TempDir dir("net");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  const auto out = dir.path / "out";
  REQUIRE(run_quiet({"network", "--config", cfg.string(), "--out", out.string()}) == 0);
  const auto csv = read_file(out / "electric_modes.csv");
  CHECK(csv.find("mode,lambda,psi_1,psi_2,psi_3,psi_4,psi_5") != std::string::npos);
  CHECK(csv.find("0.121222") != std::string::npos);
}

TEST_CASE("verify passes on the bundled dataset") {
  REQUIRE(run_quiet({"verify"}) == 0);
}

TEST_CASE("invalid configuration exits with the validation code") {
  TempDir dir("bad");
  const auto cfg = write_config(dir, "bad.json", R"({"measured": {"coupling": [0.1]}})");
  CHECK(run_quiet({"optimize-rl", "--config", cfg.string()}) == 1);
  CHECK(run_quiet({"optimize-rl", "--config", (dir.path / "missing.json").string()}) == 1);
  CHECK(run_quiet({"network", "--config", cfg.string(), "--mode", "nonsense"}) == 1);
}

TEST_CASE("modal on a measured-only config is a validation error") {
  TempDir dir("modalbad");
  const auto cfg = write_config(dir, "proto.json", pembeam::prototype_config_json());
  CHECK(run_quiet({"modal", "--config", cfg.string(), "--out",
                   (dir.path / "out").string()}) == 1);
}
