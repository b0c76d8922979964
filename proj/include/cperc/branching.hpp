#ifndef CPERC_BRANCHING_HPP
#define CPERC_BRANCHING_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cperc/log_real.hpp"

namespace cperc {

/// Mean offspring matrix of the two-type process, entries kept as logs.
///
/// Row = parent type, column = child type, with type 0 the unit-radius balls
/// and type 1 the radius-rho balls: m(i, j) is the mean number of type-j
/// children of a type-i parent. A zero entry is stored as -inf.
struct MeanMatrix2 {
  Eigen::Matrix2d log_entries = Eigen::Matrix2d::Constant(-std::numeric_limits<double>::infinity());

  static MeanMatrix2 from_values(const Eigen::Matrix2d& m);
  Eigen::Matrix2d values() const { return log_entries.array().exp().matrix(); }
  double log_entry(int i, int j) const { return log_entries(i, j); }
};

/// kappa^d [[1, ((1+rho)/(2 rho))^d], [((1+rho)/2)^d, 1]].
MeanMatrix2 mean_matrix(double kappa, double rho, int d);

/// Largest eigenvalue. For equal diagonals a the closed form a (1 + sqrt(bc))
/// is used; otherwise the 2x2 formula on the max-entry-scaled matrix.
LogReal perron_root(const MeanMatrix2& m);

/// 2 sqrt(rho) / (1 + rho).
double kappa_critical(double rho);

enum class Criticality { subcritical, critical, supercritical };
std::string to_string(Criticality c);

inline constexpr double kCriticalTolerance = 1e-12;

Criticality classify(double kappa, double rho, int d);

/// Root of kappa -> ln r_d(kappa) found by bisection on its sign.
double kappa_threshold_bisection(double rho, int d, double tol = 1e-12);

/// Expected total progeny (root included) started from one individual of
/// `root_type`: [(I - M)^{-1} 1]_root. Requires perron_root < 1.
double mean_total_progeny(const Eigen::MatrixXd& means, int root_type);

struct GWOutcome {
  std::uint64_t total = 0;                             // individuals, root included
  std::vector<std::vector<std::uint64_t>> generations;  // [g][type], g = 0 is the root
  bool extinct = false;
  bool truncated = false;
};

inline constexpr std::uint64_t kDefaultProgenyCap = 10'000'000;

/// Multi-type Galton-Watson process with Poisson offspring; `means(i, j)` is
/// the mean number of type-j children of a type-i parent. Stops with the
/// truncation flag once the population count reaches `cap`.
GWOutcome simulate_gw(const Eigen::MatrixXd& means, int root_type, std::uint64_t seed,
                      std::uint64_t cap = kDefaultProgenyCap, std::uint64_t replicate = 0);

GWOutcome simulate_gw(double mean, std::uint64_t seed, std::uint64_t cap = kDefaultProgenyCap,
                      std::uint64_t replicate = 0);

}  // namespace cperc

#endif  // CPERC_BRANCHING_HPP
