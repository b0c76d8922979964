#ifndef CPERC_SPECIAL_HPP
#define CPERC_SPECIAL_HPP

namespace cperc {

/// log of the regularized incomplete beta function I_x(a, b), for a >= 0,
/// b > 0, x in [0, 1]. I_x(0, b) is taken as 1.
double log_ibeta(double a, double b, double x);

}  // namespace cperc

#endif  // CPERC_SPECIAL_HPP
