#ifndef CPERC_GEOMETRY_HPP
#define CPERC_GEOMETRY_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "cperc/error.hpp"
#include "cperc/log_real.hpp"

namespace cperc {

// Dimension is a runtime quantity: one binary serves every experiment.
template <typename Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Point = PointT<double>;

/// Open Euclidean ball B(center, radius).
template <typename Scalar>
struct BallT {
  PointT<Scalar> center;
  Scalar radius{1};

  BallT() = default;
  BallT(PointT<Scalar> c, Scalar r) : center(std::move(c)), radius(r) {
    require(radius > Scalar(0), "ball radius must be positive");
    require(center.allFinite(), "ball center must be finite");
  }

  Eigen::Index dim() const { return center.size(); }
};

using Ball = BallT<double>;

/// x = (x', x'') with x' in R^2 and x'' in R^{d-2}.
template <typename Scalar>
struct SplitPointT {
  Eigen::Matrix<Scalar, 2, 1> head;
  PointT<Scalar> tail;

  static SplitPointT split(const PointT<Scalar>& x) {
    require(x.size() >= 3, "split points need dimension >= 3");
    return {x.template head<2>(), x.tail(x.size() - 2)};
  }

  PointT<Scalar> join() const {
    PointT<Scalar> x(tail.size() + 2);
    x << head, tail;
    return x;
  }
};

using SplitPoint = SplitPointT<double>;

/// log v_d = (d/2) ln(pi) - lgamma(d/2 + 1).
inline double log_unit_ball_volume(int d) {
  require(d >= 0, "unit ball volume needs d >= 0");
  const double half = 0.5 * d;
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

/// Volume of the unit ball in R^d. Underflows to 0 past d ~ 1300; use the log form there.
inline double unit_ball_volume(int d) {
  require(d >= 1, "unit ball volume needs d >= 1");
  return std::exp(log_unit_ball_volume(d));
}

inline LogReal unit_ball_volume_log(int d) {
  require(d >= 1, "unit ball volume needs d >= 1");
  return {log_unit_ball_volume(d)};
}

template <typename DerivedA, typename DerivedB>
auto distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  require(a.size() == b.size(), "dimension mismatch");
  return (a - b).norm();
}

template <typename Scalar>
bool balls_intersect(const BallT<Scalar>& a, const BallT<Scalar>& b) {
  require(a.dim() == b.dim(), "dimension mismatch");
  // Open balls: tangency does not count.
  const Scalar reach = a.radius + b.radius;
  return (a.center - b.center).squaredNorm() < reach * reach;
}

template <typename Scalar>
BallT<Scalar> rescale(const BallT<Scalar>& b, Scalar a) {
  require(a > Scalar(0), "rescale factor must be positive");
  return BallT<Scalar>(b.center * a, b.radius * a);
}

}  // namespace cperc

#endif  // CPERC_GEOMETRY_HPP
