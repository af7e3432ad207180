#pragma once

#include <complex>
#include <string>
#include <vector>

namespace pembeam {

/// Sampled complex response over a frequency grid. The grid is either
/// dimensionless (scaled by the reference frequency) or in Hz, as flagged.
struct FrequencyResponse {
  std::vector<double> frequency;
  bool frequency_in_hz = false;
  std::vector<std::complex<double>> sample;
  std::vector<std::string> meta;  // name=value lines describing the run
};

}  // namespace pembeam
