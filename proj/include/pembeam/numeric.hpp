#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace pembeam {

inline constexpr double kPi = 3.14159265358979323846;

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
  v.back() = hi;
  return v;
}

/// Locates the maximum of a unimodal function on [a, b] by golden-section search.
inline double golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 double xtol = 1e-12) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Bisection on a sign change of f; the bracket must satisfy f(a)*f(b) <= 0.
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double xtol = 1e-13) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > xtol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fa * fm <= 0.0) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

/// FNV-1a 64-bit hash, used to stamp emitted artifacts with a config fingerprint.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[v & 0xf];
    v >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

/// Shortest round-trip decimal representation; keeps emitted files byte-stable.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// 4-point Gauss-Legendre rule on [0, 1]; exact through degree 7.
struct GaussRule4 {
  std::array<double, 4> node{0.069431844202973712, 0.330009478207571868,
                             0.669990521792428132, 0.930568155797026288};
  std::array<double, 4> weight{0.173927422568726929, 0.326072577431273071,
                               0.326072577431273071, 0.173927422568726929};
};

}  // namespace pembeam
