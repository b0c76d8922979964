#ifndef CPERC_EMBEDDING_HPP
#define CPERC_EMBEDDING_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cperc/geometry.hpp"
#include "cperc/log_real.hpp"
#include "cperc/rng.hpp"

namespace cperc {

/// Geometry of the one-step construction in R^d = R^2 x R^{d-2}.
///
/// The planar parts are squares of side d^{-1/2}; the tail parts of C_1 and C_2
/// are thin annuli just inside radius (1+rho) and sqrt(2)(1+rho):
///
///   C''_1 = B''(0, (1+rho) - 6/d)         \ B''(0, (1+rho) - 7/d)
///   C''_2 = B''(0, sqrt2 (1+rho) - 6/d)   \ B''(0, sqrt2 (1+rho) - 7/d)
///
/// and D''_2(y'') is C''_2 cut by the cone of half-angle pi/4 around y''.
struct EmbeddingGeometry {
  int d;
  double rho;
  double kappa;

  EmbeddingGeometry(int d, double rho, double kappa);

  int tail_dim() const { return d - 2; }
  double scale() const;  // d^{-1/2}
  double reach() const { return 1.0 + rho; }

  double c1_outer() const;
  double c1_inner() const;
  double c2_outer() const;
  double c2_inner() const;

  /// C_1 and C_2 are disjoint (the tail annuli do not overlap).
  bool regions_disjoint() const { return c1_outer() <= c2_inner(); }
  bool theorem_range() const { return rho > 1.0 && rho < 2.0; }
};

struct RegionVolumes {
  LogReal c1_tail;   // |C''_1|
  LogReal c2_tail;   // |C''_2|
  LogReal c1;        // |C_1| = |C''_1| / d
  LogReal c2;        // |C_2| = |C''_2| / d
  LogReal d2_tail;   // |D''_2|
  LogReal d2;        // |D_2| = |D''_2| / d
  LogReal s_cone;    // |S|: the pi/4 cone sector of the unit ball in R^{d-2}
  LogReal s_lower;   // v_{d-3} (sqrt2/2)^{d-2} / (d-2)
  LogReal s_upper;   // v_{d-3} (sqrt2/2)^{d-3}
  bool sandwich_holds = false;
};

/// Exact region volumes. Throws DegenerateRegion for d < 4 or a non-positive
/// inner radius.
RegionVolumes region_volumes(const EmbeddingGeometry& g);

/// log |S| = log v_m + log(I_{1/2}((m-1)/2, 1/2) / 2), m = d - 2.
double log_cone_sector_volume(int m);

struct InclusionCertificate {
  bool inclus1 = false;  // C_1 inside B(y, 1+rho) for all y in C_0
  bool inclus2 = false;  // D_2(y) inside B(y, 1+rho) for all y in C_1
  double margin1 = 0.0;  // (1+rho)^2 minus the worst-case squared distance bound
  double margin2 = 0.0;
  std::size_t sampled_pairs = 0;
  std::size_t violations1 = 0;  // sampled pairs at distance >= 1+rho
  std::size_t violations2 = 0;
  double max_sampled_sq1 = 0.0;
  double max_sampled_sq2 = 0.0;
};

/// Evaluates the two worst-case bounds
///   8/d + ((1+rho) - 6/d)^2                                        < (1+rho)^2
///   2/d + R1o^2 + R2o^2 - sqrt2 * R1i * R2i                        < (1+rho)^2
/// and cross-checks them on `pairs` random (y, z) pairs per inclusion.
InclusionCertificate certify_inclusions(const EmbeddingGeometry& g, std::size_t pairs = 100000,
                                        std::uint64_t seed = 1);

/// Uniform samplers for the regions (y'' = 0 in C_0).
Point sample_c0(const EmbeddingGeometry& g, CounterRng& rng);
Point sample_c1(const EmbeddingGeometry& g, CounterRng& rng);
Point sample_d2(const EmbeddingGeometry& g, const Point& y, CounterRng& rng);

/// Uniform point of the annulus {lo <= |x| < hi} in R^m.
Eigen::VectorXd sample_annulus(int m, double lo, double hi, CounterRng& rng);
/// Uniform direction on the unit sphere of R^m.
Eigen::VectorXd sample_direction(int m, CounterRng& rng);

struct BranchLimits {
  double alpha1;        // ln(kappa (1+rho) / 2)
  double alpha2;        // ln(kappa (1+rho) / (2 rho))
  double eta;           // ln(kappa^2 (1+rho)^2 / (4 rho)) = 2 ln(kappa / kappa_c)
  double interference;  // ln(kappa (1+rho) / (2 sqrt2))
};

BranchLimits branch_limits(double kappa, double rho);

struct BranchParameters {
  LogReal alpha1;        // lambda_1 |C_1|: mean number of first-step children
  LogReal alpha2;        // lambda_rho |D_2|
  LogReal eta;           // alpha1 (1 - exp(-alpha2))
  LogReal interference;  // E(N) |D''_2| / |C''_2| with E(N) = alpha1
  BranchLimits limits;

  /// (1/d) ln of each quantity, the finite-d counterpart of `limits`.
  BranchLimits normalized_logs(int d) const;
  /// exp(-eta) + interference, the bound on 1 - P(G+).
  double failure_bound() const;
};

BranchParameters branch_parameters(const EmbeddingGeometry& g);

/// Local log-slope d/dd ln q(d) ~ ln q(d+1) - ln q(d), per quantity.
BranchLimits branch_log_slopes(double kappa, double rho, int d);

/// Outcome of looking for an alternating pair x0 -> x1 (radius 1) -> x2 (radius rho).
struct StepWitness {
  Point x1;
  Point x2;
};

/// Among x1 in `unit` within 1+rho of x0 and x2 in `large` within 1+rho of
/// such an x1, picks the lexicographically smallest x2 and then the
/// lexicographically smallest partner x1. Points are columns.
std::optional<StepWitness> find_step(const Point& x0, const Eigen::MatrixXd& unit,
                                     const Eigen::MatrixXd& large, double reach);

struct GPlusEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
  double tail_radius = 0.0;     // truncation radius of the R^{d-2} part
  double expected_unit = 0.0;   // mean number of radius-1 points sampled per replicate
  double expected_large = 0.0;  // same for radius rho
};

inline constexpr double kMaxExpectedStepPoints = 1e6;

/// Monte Carlo frequency of G+(x0): radius-1 and radius-rho Poisson points in
/// W+ = d^{-1/2}(0,1)^2 x R^{d-2}, the tail truncated to the ball of radius
/// 2(1+rho) + |x0''| (no farther point can take part in the event).
GPlusEstimate estimate_g_plus(const EmbeddingGeometry& g, const Point& x0, std::size_t replicates,
                              std::uint64_t seed, int threads = 1);

}  // namespace cperc

#endif  // CPERC_EMBEDDING_HPP
