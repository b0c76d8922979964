#include "cperc/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "cperc/error.hpp"
#include "cperc/measures.hpp"
#include "cperc/parallel.hpp"
#include "cperc/special.hpp"

namespace cperc {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// log(1 - exp(-exp(l))), accurate when exp(l) underflows.
double log_one_minus_exp_neg(double log_x) {
  if (log_x < -30.0) return log_x - 0.5 * std::exp(log_x);
  return log1mexp(std::exp(log_x));
}

bool lex_less(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

EmbeddingGeometry::EmbeddingGeometry(int dim, double r, double k) : d(dim), rho(r), kappa(k) {
  require(d >= 3, "the embedding needs d >= 3");
  require(rho > 1.0 && std::isfinite(rho), "the embedding needs rho > 1");
  require(kappa > 0.0 && std::isfinite(kappa), "kappa must be positive");
}

double EmbeddingGeometry::scale() const { return 1.0 / std::sqrt(static_cast<double>(d)); }
double EmbeddingGeometry::c1_outer() const { return reach() - 6.0 / d; }
double EmbeddingGeometry::c1_inner() const { return reach() - 7.0 / d; }
double EmbeddingGeometry::c2_outer() const { return kSqrt2 * reach() - 6.0 / d; }
double EmbeddingGeometry::c2_inner() const { return kSqrt2 * reach() - 7.0 / d; }

double log_cone_sector_volume(int m) {
  require(m >= 1, "cone sector needs dimension >= 1");
  // Fraction of the sphere within angle pi/4 of an axis: I_{sin^2}((m-1)/2, 1/2) / 2.
  return log_unit_ball_volume(m) + log_ibeta(0.5 * (m - 1), 0.5, 0.5) - std::numbers::ln2;
}

RegionVolumes region_volumes(const EmbeddingGeometry& g) {
  if (g.d < 4) throw DegenerateRegion("region volumes need d >= 4");
  if (g.c1_inner() <= 0.0 || g.c2_inner() <= 0.0)
    throw DegenerateRegion("annulus inner radius is not positive at this dimension");
  const int m = g.tail_dim();
  const double log_vm = log_unit_ball_volume(m);
  const double log_d = std::log(static_cast<double>(g.d));
  auto log_shell = [m](double outer, double inner) {
    return log_diff_exp(m * std::log(outer), m * std::log(inner));
  };

  RegionVolumes v;
  v.c1_tail = {log_vm + log_shell(g.c1_outer(), g.c1_inner())};
  v.c2_tail = {log_vm + log_shell(g.c2_outer(), g.c2_inner())};
  v.c1 = {v.c1_tail.log - log_d};
  v.c2 = {v.c2_tail.log - log_d};
  v.s_cone = {log_cone_sector_volume(m)};
  v.d2_tail = {log_shell(g.c2_outer(), g.c2_inner()) + v.s_cone.log};
  v.d2 = {v.d2_tail.log - log_d};
  const double log_half_sqrt2 = std::log(0.5 * kSqrt2);
  v.s_lower = {log_unit_ball_volume(m - 1) + m * log_half_sqrt2 - std::log(static_cast<double>(m))};
  v.s_upper = {log_unit_ball_volume(m - 1) + (m - 1) * log_half_sqrt2};
  v.sandwich_holds = v.s_lower.log <= v.s_cone.log && v.s_cone.log <= v.s_upper.log;
  return v;
}

Eigen::VectorXd sample_direction(int m, CounterRng& rng) {
  require(m >= 1, "direction needs dimension >= 1");
  Eigen::VectorXd u(m);
  double n2 = 0.0;
  do {
    for (int k = 0; k + 1 < m; k += 2) std::tie(u(k), u(k + 1)) = rng.normal_pair();
    if (m % 2) u(m - 1) = rng.normal();
    n2 = u.squaredNorm();
  } while (n2 == 0.0);
  return u / std::sqrt(n2);
}

namespace {

// Radius of a uniform point in the shell lo <= r < hi of R^m.
double sample_shell_radius(int m, double lo, double hi, CounterRng& rng) {
  const double t = lo > 0.0 ? std::exp(m * std::log(lo / hi)) : 0.0;
  const double u = rng.uniform();
  return hi * std::exp(std::log(t + u * (1.0 - t)) / m);
}

}  // namespace

Eigen::VectorXd sample_annulus(int m, double lo, double hi, CounterRng& rng) {
  require(0.0 <= lo && lo < hi, "annulus needs 0 <= lo < hi");
  const double r = sample_shell_radius(m, lo, hi, rng);
  return r * sample_direction(m, rng);
}

Point sample_c0(const EmbeddingGeometry& g, CounterRng& rng) {
  Point x = Point::Zero(g.d);
  x(0) = g.scale() * rng.uniform(-1.0, 1.0);
  x(1) = g.scale() * rng.uniform(-1.0, 0.0);
  return x;
}

Point sample_c1(const EmbeddingGeometry& g, CounterRng& rng) {
  Point x(g.d);
  x(0) = g.scale() * rng.uniform();
  x(1) = g.scale() * rng.uniform();
  x.tail(g.tail_dim()) = sample_annulus(g.tail_dim(), std::max(0.0, g.c1_inner()), g.c1_outer(), rng);
  return x;
}

Point sample_d2(const EmbeddingGeometry& g, const Point& y, CounterRng& rng) {
  const int m = g.tail_dim();
  const Eigen::VectorXd axis_raw = y.tail(m);
  require(axis_raw.norm() > 0.0, "D_2(y) needs y'' != 0");
  const Eigen::VectorXd axis = axis_raw.normalized();

  Eigen::VectorXd dir(m);
  if (m == 1) {
    dir = axis;
  } else {
    // s = sin^2(theta) has density proportional to s^{(m-3)/2} (1-s)^{-1/2} on
    // [0, 1/2]; propose from the first factor and accept with the second.
    double s = 0.0;
    while (true) {
      s = 0.5 * std::pow(rng.uniform_open(), 2.0 / (m - 1));
      if (rng.uniform() * kSqrt2 * std::sqrt(1.0 - s) < 1.0) break;
    }
    Eigen::VectorXd perp;
    do {
      perp = sample_direction(m, rng);
      perp -= perp.dot(axis) * axis;
    } while (perp.norm() < 1e-12);
    dir = std::sqrt(1.0 - s) * axis + std::sqrt(s) * perp.normalized();
  }
  Point z(g.d);
  z(0) = g.scale() * rng.uniform();
  z(1) = g.scale() * rng.uniform();
  z.tail(m) = sample_shell_radius(m, std::max(0.0, g.c2_inner()), g.c2_outer(), rng) * dir;
  return z;
}

InclusionCertificate certify_inclusions(const EmbeddingGeometry& g, std::size_t pairs,
                                        std::uint64_t seed) {
  InclusionCertificate cert;
  const double target = g.reach() * g.reach();
  const double r1o = g.c1_outer();
  const double r1i = std::max(0.0, g.c1_inner());
  const double r2o = g.c2_outer();
  const double r2i = std::max(0.0, g.c2_inner());
  cert.margin1 = target - (8.0 / g.d + r1o * r1o);
  cert.margin2 = target - (2.0 / g.d + r1o * r1o + r2o * r2o - kSqrt2 * r1i * r2i);
  cert.inclus1 = cert.margin1 > 0.0;
  cert.inclus2 = cert.margin2 > 0.0;

  // Fixed blocks with their own streams, so the outcome ignores the thread count.
  constexpr std::size_t kBlock = 4096;
  struct Tally {
    double max1 = 0.0, max2 = 0.0;
    std::size_t v1 = 0, v2 = 0;
  };
  const std::size_t blocks = (pairs + kBlock - 1) / kBlock;
  std::vector<Tally> tally(blocks);
  parallel_for(blocks, default_threads(), [&](std::size_t b) {
    CounterRng rng1{seed, 0x1c1ULL, b};
    CounterRng rng2{seed, 0x1c2ULL, b};
    Tally& t = tally[b];
    for (std::size_t k = b * kBlock; k < std::min(pairs, (b + 1) * kBlock); ++k) {
      const Point y0 = sample_c0(g, rng1);
      const Point z1 = sample_c1(g, rng1);
      const double sq1 = (z1 - y0).squaredNorm();
      t.max1 = std::max(t.max1, sq1);
      t.v1 += sq1 >= target;

      const Point y1 = sample_c1(g, rng2);
      const Point z2 = sample_d2(g, y1, rng2);
      const double sq2 = (z2 - y1).squaredNorm();
      t.max2 = std::max(t.max2, sq2);
      t.v2 += sq2 >= target;
    }
  });
  for (const Tally& t : tally) {
    cert.max_sampled_sq1 = std::max(cert.max_sampled_sq1, t.max1);
    cert.max_sampled_sq2 = std::max(cert.max_sampled_sq2, t.max2);
    cert.violations1 += t.v1;
    cert.violations2 += t.v2;
  }
  cert.sampled_pairs = pairs;
  return cert;
}

BranchLimits branch_limits(double kappa, double rho) {
  return {std::log(kappa * (1.0 + rho) / 2.0), std::log(kappa * (1.0 + rho) / (2.0 * rho)),
          std::log(kappa * kappa * (1.0 + rho) * (1.0 + rho) / (4.0 * rho)),
          std::log(kappa * (1.0 + rho) / (2.0 * kSqrt2))};
}

BranchParameters branch_parameters(const EmbeddingGeometry& g) {
  const RegionVolumes v = region_volumes(g);
  const TwoTypeIntensities lam = two_type_intensities(g.kappa, g.rho, g.d);
  BranchParameters p;
  p.alpha1 = lam.unit * v.c1;
  p.alpha2 = lam.large * v.d2;
  p.eta = {p.alpha1.log + log_one_minus_exp_neg(p.alpha2.log)};
  p.interference = p.alpha1 * v.d2_tail / v.c2_tail;
  p.limits = branch_limits(g.kappa, g.rho);
  return p;
}

BranchLimits BranchParameters::normalized_logs(int d) const {
  return {alpha1.log / d, alpha2.log / d, eta.log / d, interference.log / d};
}

double BranchParameters::failure_bound() const {
  return std::exp(-eta.value()) + interference.value();
}

BranchLimits branch_log_slopes(double kappa, double rho, int d) {
  const BranchParameters a = branch_parameters(EmbeddingGeometry(d, rho, kappa));
  const BranchParameters b = branch_parameters(EmbeddingGeometry(d + 1, rho, kappa));
  return {b.alpha1.log - a.alpha1.log, b.alpha2.log - a.alpha2.log, b.eta.log - a.eta.log,
          b.interference.log - a.interference.log};
}

std::optional<StepWitness> find_step(const Point& x0, const Eigen::MatrixXd& unit,
                                     const Eigen::MatrixXd& large, double reach) {
  const double reach2 = reach * reach;
  std::vector<Eigen::Index> firsts;
  for (Eigen::Index i = 0; i < unit.cols(); ++i)
    if ((unit.col(i) - x0).squaredNorm() < reach2) firsts.push_back(i);
  if (firsts.empty()) return std::nullopt;

  std::optional<Eigen::Index> best2;
  std::optional<Eigen::Index> best1;
  for (Eigen::Index j = 0; j < large.cols(); ++j) {
    std::optional<Eigen::Index> partner;
    for (Eigen::Index i : firsts) {
      if ((large.col(j) - unit.col(i)).squaredNorm() >= reach2) continue;
      if (!partner || lex_less(unit.col(i), unit.col(*partner))) partner = i;
    }
    if (!partner) continue;
    if (!best2 || lex_less(large.col(j), large.col(*best2))) {
      best2 = j;
      best1 = partner;
    }
  }
  if (!best2) return std::nullopt;
  return StepWitness{unit.col(*best1), large.col(*best2)};
}

GPlusEstimate estimate_g_plus(const EmbeddingGeometry& g, const Point& x0, std::size_t replicates,
                              std::uint64_t seed, int threads) {
  require(x0.size() == g.d, "x0 has the wrong dimension");
  require(replicates > 0, "need at least one replicate");
  const double s = g.scale();
  require(x0(0) > -s && x0(0) < s && x0(1) > -s && x0(1) < 0.0, "x0 must lie in W");
  const int m = g.tail_dim();

  GPlusEstimate est;
  est.replicates = replicates;
  est.tail_radius = 2.0 * g.reach() + x0.tail(m).norm();
  const TwoTypeIntensities lam = two_type_intensities(g.kappa, g.rho, g.d);
  const double log_region = log_unit_ball_volume(m) + m * std::log(est.tail_radius) -
                            std::log(static_cast<double>(g.d));
  est.expected_unit = std::exp(lam.unit.log + log_region);
  est.expected_large = std::exp(lam.large.log + log_region);
  if (!(est.expected_unit <= kMaxExpectedStepPoints && est.expected_large <= kMaxExpectedStepPoints))
    throw SizingError("G+ simulation would need too many points at this (d, kappa)");

  auto draw = [&](CounterRng& rng, double mean) {
    const auto n = static_cast<Eigen::Index>(rng.poisson(mean));
    Eigen::MatrixXd pts(g.d, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      pts(0, i) = s * rng.uniform();
      pts(1, i) = s * rng.uniform();
      pts.col(i).tail(m) = sample_annulus(m, 0.0, est.tail_radius, rng);
    }
    return pts;
  };

  std::vector<char> hit(replicates, 0);
  parallel_for(replicates, threads, [&](std::size_t r) {
    CounterRng rng_unit{seed, r, 0x6701ULL};
    CounterRng rng_large{seed, r, 0x6702ULL};
    const Eigen::MatrixXd unit = draw(rng_unit, est.expected_unit);
    const Eigen::MatrixXd large = draw(rng_large, est.expected_large);
    hit[r] = find_step(x0, unit, large, g.reach()).has_value() ? 1 : 0;
  });
  const double hits = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
  est.p_hat = hits / static_cast<double>(replicates);
  est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(replicates));
  return est;
}

}  // namespace cperc
