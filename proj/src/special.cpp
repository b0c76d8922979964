#include "cperc/special.hpp"

#include <cmath>
#include <limits>

#include "cperc/error.hpp"
#include "cperc/log_real.hpp"

namespace cperc {

namespace {

// Continued fraction for I_x(a, b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw SearchFailure("incomplete beta continued fraction did not converge");
}

double log_front(double a, double b, double x) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
         b * std::log1p(-x);
}

}  // namespace

double log_ibeta(double a, double b, double x) {
  require(a >= 0.0 && b > 0.0, "incomplete beta needs a >= 0, b > 0");
  require(x >= 0.0 && x <= 1.0, "incomplete beta needs x in [0, 1]");
  if (a == 0.0 || x == 1.0) return 0.0;
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x < (a + 1.0) / (a + b + 2.0))
    return log_front(a, b, x) - std::log(a) + std::log(beta_continued_fraction(a, b, x));
  const double log_tail =
      log_front(b, a, 1.0 - x) - std::log(b) + std::log(beta_continued_fraction(b, a, 1.0 - x));
  return log1mexp(-log_tail);
}

}  // namespace cperc
