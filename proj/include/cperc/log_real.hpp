#ifndef CPERC_LOG_REAL_HPP
#define CPERC_LOG_REAL_HPP

#include <cmath>
#include <limits>
#include <span>

namespace cperc {

/// A positive quantity carried as its natural logarithm.
///
/// Quantities such as kappa^d, v_d or (1+rho)^d over- or underflow long before
/// the dimensions of interest; every analytic routine works on `log` and only
/// materialises `value()` at the edge.
struct LogReal {
  double log = -std::numeric_limits<double>::infinity();

  static LogReal from_value(double v) { return LogReal{std::log(v)}; }

  double value() const { return std::exp(log); }
  // True when exp(log) is a finite, normal double.
  bool representable() const {
    return std::isfinite(log) && log < std::log(std::numeric_limits<double>::max()) &&
           log > std::log(std::numeric_limits<double>::min());
  }

  friend LogReal operator*(LogReal a, LogReal b) { return {a.log + b.log}; }
  friend LogReal operator/(LogReal a, LogReal b) { return {a.log - b.log}; }
  friend bool operator<(LogReal a, LogReal b) { return a.log < b.log; }
};

/// log(1 + exp(x)) without overflow.
inline double log1pexp(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

/// log(1 - exp(-a)) for a > 0 (Maechler's switch at ln 2).
inline double log1mexp(double a) {
  if (a <= 0.6931471805599453) return std::log(-std::expm1(-a));
  return std::log1p(-std::exp(-a));
}

/// log(exp(a) - exp(b)) for a >= b.
inline double log_diff_exp(double a, double b) {
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + log1mexp(a - b);
}

inline double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace cperc

#endif  // CPERC_LOG_REAL_HPP
