#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "cperc/embedding.hpp"
#include "cperc/error.hpp"
#include "cperc/measures.hpp"
#include "cperc/special.hpp"

using namespace cperc;

TEST_CASE("geometry validation and radii") {
  CHECK_THROWS_AS(EmbeddingGeometry(2, 1.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(EmbeddingGeometry(5, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(EmbeddingGeometry(5, 1.5, 0.0), InvalidArgument);
  const EmbeddingGeometry g(100, 1.5, 0.99);
  CHECK(g.c1_outer() == doctest::Approx(2.5 - 0.06));
  CHECK(g.c1_inner() == doctest::Approx(2.5 - 0.07));
  CHECK(g.c2_outer() == doctest::Approx(std::sqrt(2.0) * 2.5 - 0.06));
  CHECK(g.c2_inner() == doctest::Approx(std::sqrt(2.0) * 2.5 - 0.07));
  CHECK(g.regions_disjoint());
  CHECK(g.theorem_range());
  CHECK_FALSE(EmbeddingGeometry(100, 2.5, 0.99).theorem_range());
}

TEST_CASE("log_ibeta against boost ibeta") {
  for (double a : {0.5, 1.0, 1.5, 3.0, 10.5, 200.0, 998.5})
    for (double b : {0.5, 1.0, 2.5, 30.0})
      for (double x : {0.01, 0.2, 0.5, 0.73, 0.99}) {
        const double oracle = boost::math::ibeta(a, b, x);
        if (oracle < 1e-300) continue;
        CHECK(std::abs(log_ibeta(a, b, x) - std::log(oracle)) < 1e-11 * std::max(1.0, std::abs(std::log(oracle))));
      }
  CHECK(log_ibeta(0.0, 0.5, 0.5) == 0.0);
}

TEST_CASE("region volumes: degenerate dimensions") {
  CHECK_THROWS_AS(region_volumes(EmbeddingGeometry(3, 1.5, 1.0)), DegenerateRegion);
  CHECK_NOTHROW(region_volumes(EmbeddingGeometry(4, 1.5, 1.0)));
}

TEST_CASE("region volumes: exact pieces") {
  const EmbeddingGeometry g(20, 1.5, 1.0);
  const RegionVolumes v = region_volumes(g);
  const int m = 18;
  const double vm = unit_ball_volume(m);
  CHECK(v.c1_tail.value() ==
        doctest::Approx(vm * (std::pow(g.c1_outer(), m) - std::pow(g.c1_inner(), m))).epsilon(1e-12));
  CHECK(v.c2_tail.value() ==
        doctest::Approx(vm * (std::pow(g.c2_outer(), m) - std::pow(g.c2_inner(), m))).epsilon(1e-12));
  CHECK(v.c1.value() == doctest::Approx(v.c1_tail.value() / 20.0).epsilon(1e-12));
  CHECK(v.d2.value() == doctest::Approx(v.d2_tail.value() / 20.0).epsilon(1e-12));
  CHECK(v.d2_tail.value() ==
        doctest::Approx((std::pow(g.c2_outer(), m) - std::pow(g.c2_inner(), m)) * v.s_cone.value()).epsilon(1e-12));
}

TEST_CASE("cone sector sandwich for d in [5, 2000]") {
  for (int d = 5; d <= 2000; ++d) CHECK(region_volumes(EmbeddingGeometry(d, 1.5, 1.0)).sandwich_holds);
}

TEST_CASE("cone sector volume against Monte Carlo integration") {
  CounterRng rng{51, 0};
  const int n = 1000000;
  for (int m = 2; m <= 12; m += 2) {
    // Uniform points in the cube [-1,1]^m; count those in the unit ball and within pi/4 of axis 0.
    int hits = 0;
    Eigen::VectorXd x(m);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < m; ++i) x(i) = rng.uniform(-1.0, 1.0);
      const double r2 = x.squaredNorm();
      if (r2 < 1.0 && x(0) > 0.0 && 2.0 * x(0) * x(0) >= r2) ++hits;
    }
    const double p = static_cast<double>(hits) / n;
    const double cube = std::ldexp(1.0, m);
    const double estimate = cube * p;
    const double se = cube * std::sqrt(p * (1.0 - p) / n);
    const double exact = std::exp(log_cone_sector_volume(m));
    CHECK(std::abs(estimate - exact) < 3.0 * se);
  }
  // m = 1: the segment [0, 1] (the half-line is the whole cone).
  CHECK(std::exp(log_cone_sector_volume(1)) == doctest::Approx(1.0).epsilon(1e-12));
  // m = 2: a quarter of the disk.
  CHECK(std::exp(log_cone_sector_volume(2)) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
}

TEST_CASE("volume asymptotics at d = 500") {
  const double rho = 1.5;
  const RegionVolumes v = region_volumes(EmbeddingGeometry(500, rho, 1.0));
  const double lvd = log_unit_ball_volume(500);
  CHECK(std::abs((v.c1.log - lvd) / 500.0 - std::log(1.0 + rho)) < 0.05);
  CHECK(std::abs((v.c2.log - lvd) / 500.0 - std::log(std::sqrt(2.0) * (1.0 + rho))) < 0.05);
  CHECK(std::abs((v.d2_tail.log - log_unit_ball_volume(498)) / 500.0 - std::log(1.0 + rho)) < 0.05);
}

TEST_CASE("inclusion certificates") {
  // Direct evaluation at d = 3, rho = 1.5.
  const EmbeddingGeometry g3(3, 1.5, 1.0);
  const InclusionCertificate c3 = certify_inclusions(g3, 20000, 3);
  const double R = 2.5, r1o = R - 2.0, r1i = R - 7.0 / 3.0;
  const double r2o = std::sqrt(2.0) * R - 2.0, r2i = std::sqrt(2.0) * R - 7.0 / 3.0;
  CHECK(c3.margin1 == doctest::Approx(R * R - (8.0 / 3.0 + r1o * r1o)));
  CHECK(c3.margin2 == doctest::Approx(R * R - (2.0 / 3.0 + r1o * r1o + r2o * r2o - std::sqrt(2.0) * r1i * r2i)));
  CHECK(c3.inclus1 == (c3.margin1 > 0.0));
  CHECK(c3.inclus2 == (c3.margin2 > 0.0));
  for (int d : {6, 10, 50, 1000}) {
    const InclusionCertificate c = certify_inclusions(EmbeddingGeometry(d, 1.5, 1.0), 20000, 4);
    CHECK(c.inclus1);
    CHECK(c.inclus2);
    CHECK(c.violations1 == 0);
    CHECK(c.violations2 == 0);
    CHECK(c.max_sampled_sq1 < R * R - c.margin1 + 1e-12);
    CHECK(c.max_sampled_sq2 < R * R - c.margin2 + 1e-12);
  }
}

TEST_CASE("region samplers land in their regions") {
  const EmbeddingGeometry g(12, 1.5, 1.0);
  CounterRng rng{52, 0};
  const int m = g.tail_dim();
  double cos_sum = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const Point y = sample_c1(g, rng);
    const double ry = y.tail(m).norm();
    CHECK(ry >= g.c1_inner() - 1e-12);
    CHECK(ry < g.c1_outer() + 1e-12);
    CHECK(y(0) >= 0.0);
    CHECK(y(0) <= g.scale());
    const Point z = sample_d2(g, y, rng);
    const double rz = z.tail(m).norm();
    CHECK(rz >= g.c2_inner() - 1e-12);
    CHECK(rz < g.c2_outer() + 1e-12);
    const double cosine = z.tail(m).dot(y.tail(m)) / (rz * ry);
    CHECK(cosine >= std::sqrt(0.5) - 1e-12);
    cos_sum += cosine;
  }
  // Mean cosine of the angle over the cone, by quadrature of sin^{m-2} on [0, pi/4].
  double num = 0.0, den = 0.0;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) * (std::numbers::pi / 4.0) / steps;
    const double w = std::pow(std::sin(t), m - 2);
    num += std::cos(t) * w;
    den += w;
  }
  CHECK(std::abs(cos_sum / n - num / den) < 0.002);
}

TEST_CASE("branch parameter definitions") {
  const EmbeddingGeometry g(30, 1.5, 0.99);
  const BranchParameters p = branch_parameters(g);
  const RegionVolumes v = region_volumes(g);
  const TwoTypeIntensities lam = two_type_intensities(0.99, 1.5, 30);
  CHECK(p.alpha1.value() == doctest::Approx(lam.unit.value() * v.c1.value()).epsilon(1e-12));
  CHECK(p.alpha2.value() == doctest::Approx(lam.large.value() * v.d2.value()).epsilon(1e-12));
  CHECK(p.eta.value() ==
        doctest::Approx(p.alpha1.value() * -std::expm1(-p.alpha2.value())).epsilon(1e-12));
  CHECK(p.interference.value() ==
        doctest::Approx(p.alpha1.value() * v.d2_tail.value() / v.c2_tail.value()).epsilon(1e-12));
  CHECK(p.failure_bound() == doctest::Approx(std::exp(-p.eta.value()) + p.interference.value()));
  const BranchLimits lim = branch_limits(0.99, 1.5);
  CHECK(lim.eta == doctest::Approx(2.0 * std::log(0.99 / (2.0 * std::sqrt(1.5) / 2.5))));
  CHECK(lim.eta == doctest::Approx(lim.alpha1 + lim.alpha2));
}

TEST_CASE("branch parameter rates and monotonicity") {
  const double kappa = 0.99, rho = 1.5;
  const BranchLimits lim = branch_limits(kappa, rho);
  const BranchLimits s = branch_log_slopes(kappa, rho, 800);
  CHECK(std::abs(s.alpha1 - lim.alpha1) < 0.02);
  CHECK(std::abs(s.alpha2 - lim.alpha2) < 0.02);
  CHECK(std::abs(s.eta - lim.eta) < 0.02);
  CHECK(std::abs(s.interference - lim.interference) < 0.02);
  // (1/d) ln alpha_1 converges slowly but is within tolerance too.
  const BranchLimits n = branch_parameters(EmbeddingGeometry(800, rho, kappa)).normalized_logs(800);
  CHECK(std::abs(n.alpha1 - lim.alpha1) < 0.02);
  CHECK(std::abs(n.alpha2 - lim.alpha2) < 0.02);

  double prev_eta = -INFINITY, prev_int = INFINITY;
  for (int d = 40; d <= 2000; ++d) {
    const BranchParameters p = branch_parameters(EmbeddingGeometry(d, rho, kappa));
    CHECK(p.eta.log > prev_eta);
    CHECK(p.interference.log < prev_int);
    prev_eta = p.eta.log;
    prev_int = p.interference.log;
  }
  CHECK(branch_parameters(EmbeddingGeometry(2000, rho, kappa)).failure_bound() < 1e-6);
}

TEST_CASE("find_step picks the lexicographically smallest witnesses") {
  const int d = 3;
  Point x0 = Point::Zero(d);
  Eigen::MatrixXd unit(d, 3), large(d, 3);
  unit.col(0) << 2.0, 0.0, 0.0;
  unit.col(1) << 1.0, 1.0, 0.0;
  unit.col(2) << 9.0, 0.0, 0.0;  // too far from x0
  large.col(0) << 3.0, 1.0, 0.0;
  large.col(1) << 2.5, 0.5, 0.0;
  large.col(2) << 11.0, 0.0, 0.0;  // only reachable from the far unit point
  const auto w = find_step(x0, unit, large, 2.5);
  REQUIRE(w.has_value());
  CHECK(w->x2 == large.col(1));
  CHECK(w->x1 == unit.col(1));
  CHECK_FALSE(find_step(x0, unit.rightCols(1), large, 2.5).has_value());
  CHECK_FALSE(find_step(x0, unit, large.rightCols(1), 2.5).has_value());
}

TEST_CASE("G+ estimate: limits, translation invariance and the lower bound") {
  const EmbeddingGeometry tiny(6, 1.5, 0.01);
  Point x0 = Point::Zero(6);
  x0(1) = -0.5 * tiny.scale();
  CHECK(estimate_g_plus(tiny, x0, 200, 1).p_hat == 0.0);

  const EmbeddingGeometry g(6, 1.5, 0.9);
  x0(1) = -0.5 * g.scale();
  const GPlusEstimate a = estimate_g_plus(g, x0, 4000, 2);
  Point shifted = x0;
  shifted.tail(4) << 3.0, -1.0, 0.5, 2.0;
  const GPlusEstimate b = estimate_g_plus(g, shifted, 4000, 3);
  CHECK(std::abs(a.p_hat - b.p_hat) < 3.0 * std::hypot(a.std_error, b.std_error));
  CHECK(b.tail_radius == doctest::Approx(5.0 + shifted.tail(4).norm()));
  const BranchParameters p = branch_parameters(g);
  CHECK(a.p_hat >= 1.0 - p.failure_bound() - 3.0 * a.std_error);

  Point outside = x0;
  outside(1) = 0.1;
  CHECK_THROWS_AS(estimate_g_plus(g, outside, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(estimate_g_plus(EmbeddingGeometry(30, 1.5, 3.0), Point::Zero(30), 10, 1), InvalidArgument);
}

TEST_CASE("G+ estimate is thread-count independent and sized") {
  const EmbeddingGeometry g(6, 1.5, 1.5);
  Point x0 = Point::Zero(6);
  x0(1) = -0.5 * g.scale();
  const GPlusEstimate one = estimate_g_plus(g, x0, 500, 9, 1);
  const GPlusEstimate many = estimate_g_plus(g, x0, 500, 9, 8);
  CHECK(one.p_hat == many.p_hat);
  Point x0_30 = Point::Zero(30);
  x0_30(1) = -0.5 / std::sqrt(30.0);
  CHECK_THROWS_AS(estimate_g_plus(EmbeddingGeometry(30, 1.5, 3.0), x0_30, 10, 1), SizingError);
}
