#include "cperc/branching.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "cperc/error.hpp"
#include "cperc/rng.hpp"

namespace cperc {

MeanMatrix2 MeanMatrix2::from_values(const Eigen::Matrix2d& m) {
  require((m.array() >= 0.0).all() && m.allFinite(), "mean matrix entries must be finite and >= 0");
  MeanMatrix2 out;
  out.log_entries = m.array().log().matrix();
  return out;
}

MeanMatrix2 mean_matrix(double kappa, double rho, int d) {
  require(kappa > 0.0, "kappa must be positive");
  require(rho > 0.0, "rho must be positive");
  require(d >= 1, "dimension must be >= 1");
  const double base = d * std::log(kappa);
  MeanMatrix2 out;
  out.log_entries << base, base + d * std::log((1.0 + rho) / (2.0 * rho)),
      base + d * std::log((1.0 + rho) / 2.0), base;
  return out;
}

LogReal perron_root(const MeanMatrix2& m) {
  const auto& L = m.log_entries;
  const double off = 0.5 * (L(0, 1) + L(1, 0));  // log sqrt(bc)
  if (L(0, 0) == L(1, 1)) {
    if (!std::isfinite(L(0, 0))) return {off};
    return {L(0, 0) + log1pexp(off - L(0, 0))};
  }
  const double scale = L.maxCoeff();
  const double a = std::exp(L(0, 0) - scale);
  const double e = std::exp(L(1, 1) - scale);
  const double bc = std::exp(L(0, 1) + L(1, 0) - 2.0 * scale);
  const double half_gap = 0.5 * (a - e);
  return {scale + std::log(0.5 * (a + e) + std::sqrt(half_gap * half_gap + bc))};
}

double kappa_critical(double rho) {
  require(rho > 0.0, "rho must be positive");
  return 2.0 * std::sqrt(rho) / (1.0 + rho);
}

std::string to_string(Criticality c) {
  switch (c) {
    case Criticality::subcritical: return "subcritical";
    case Criticality::critical: return "critical";
    case Criticality::supercritical: return "supercritical";
  }
  return "unknown";
}

Criticality classify(double kappa, double rho, int d) {
  const double log_r = perron_root(mean_matrix(kappa, rho, d)).log;
  if (std::abs(std::expm1(log_r)) <= kCriticalTolerance) return Criticality::critical;
  return log_r < 0.0 ? Criticality::subcritical : Criticality::supercritical;
}

double kappa_threshold_bisection(double rho, int d, double tol) {
  // ln r_d is increasing in kappa; r_d(kappa) >= kappa^d so kappa = 1 is supercritical.
  double lo = 1e-300, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (perron_root(mean_matrix(mid, rho, d)).log < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double mean_total_progeny(const Eigen::MatrixXd& means, int root_type) {
  require(means.rows() == means.cols(), "mean matrix must be square");
  require(root_type >= 0 && root_type < means.rows(), "root type out of range");
  const Eigen::Index k = means.rows();
  const Eigen::VectorXcd eig = means.eigenvalues();
  require(eig.cwiseAbs().maxCoeff() < 1.0, "mean total progeny is infinite unless subcritical");
  const Eigen::VectorXd expected =
      (Eigen::MatrixXd::Identity(k, k) - means).partialPivLu().solve(Eigen::VectorXd::Ones(k));
  return expected(root_type);
}

GWOutcome simulate_gw(const Eigen::MatrixXd& means, int root_type, std::uint64_t seed,
                      std::uint64_t cap, std::uint64_t replicate) {
  require(means.rows() == means.cols() && means.rows() >= 1, "mean matrix must be square");
  require((means.array() >= 0.0).all() && means.allFinite(), "offspring means must be finite and >= 0");
  require(root_type >= 0 && root_type < means.rows(), "root type out of range");
  require(cap > 0, "progeny cap must be positive");

  const Eigen::Index k = means.rows();
  CounterRng rng{seed, replicate, 0x67770000ULL};
  GWOutcome out;
  std::vector<std::uint64_t> current(static_cast<std::size_t>(k), 0);
  current[static_cast<std::size_t>(root_type)] = 1;
  out.generations.push_back(current);
  out.total = 1;
  while (true) {
    // The sum of z_i independent Poisson(m_ij) counts is Poisson(sum_i z_i m_ij).
    std::vector<std::uint64_t> next(static_cast<std::size_t>(k), 0);
    std::uint64_t born = 0;
    for (Eigen::Index j = 0; j < k; ++j) {
      double mean = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) mean += static_cast<double>(current[i]) * means(i, j);
      next[j] = rng.poisson(mean);
      born += next[j];
    }
    if (born == 0) {
      out.extinct = true;
      return out;
    }
    out.generations.push_back(next);
    out.total += born;
    if (out.total >= cap) {
      out.truncated = true;
      return out;
    }
    current = std::move(next);
  }
}

GWOutcome simulate_gw(double mean, std::uint64_t seed, std::uint64_t cap, std::uint64_t replicate) {
  return simulate_gw(Eigen::MatrixXd::Constant(1, 1, mean), 0, seed, cap, replicate);
}

}  // namespace cperc
