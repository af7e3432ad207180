#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pembeam/errors.hpp"
#include "pembeam/frequency_response.hpp"
#include "pembeam/numeric.hpp"
#include "pembeam/version.hpp"

namespace pembeam {

/// Header stamped onto every emitted file: toolkit version, config hash, units.
inline std::string file_header(std::uint64_t config_hash, const std::string& units,
                               const std::vector<std::string>& extra = {}) {
  std::string h;
  h += std::string("# pembeam ") + kVersion + "\n";
  h += "# config " + to_hex(config_hash) + "\n";
  h += "# units: " + units + "\n";
  for (const auto& line : extra) h += "# " + line + "\n";
  return h;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  out << content;
}

inline std::string csv_table(const std::vector<std::string>& columns,
                             const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    s += columns[i];
    s += i + 1 < columns.size() ? "," : "\n";
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      s += format_double(row[i]);
      s += i + 1 < row.size() ? "," : "\n";
    }
  }
  return s;
}

/// Response serialisation: frequency, magnitude, phase; grid unit per flag.
inline std::string response_csv(const FrequencyResponse& r, std::uint64_t config_hash) {
  std::string s = file_header(config_hash,
                              r.frequency_in_hz
                                  ? "frequency_hz, magnitude, phase_rad"
                                  : "dimensionless_frequency, magnitude, phase_rad",
                              r.meta);
  s += r.frequency_in_hz ? "frequency_hz,magnitude,phase_rad\n"
                         : "frequency,magnitude,phase_rad\n";
  for (std::size_t i = 0; i < r.frequency.size(); ++i) {
    s += format_double(r.frequency[i]);
    s += ",";
    s += format_double(std::abs(r.sample[i]));
    s += ",";
    s += format_double(std::arg(r.sample[i]));
    s += "\n";
  }
  return s;
}

}  // namespace pembeam
