#pragma once

#include <stdexcept>
#include <string>

namespace pembeam {

/// Invalid user input: bad geometry, out-of-range parameters, malformed config.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A solver failed to produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pembeam
