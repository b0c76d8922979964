#ifndef CPERC_ESTIMATOR_HPP
#define CPERC_ESTIMATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cperc/measures.hpp"
#include "cperc/sampling.hpp"

namespace cperc {

struct CurvePoint {
  double lambda;
  double frequency;
  double std_error;
};

/// Crossing window: a cube of side L * r_max padded by r_max.
BoxWindow crossing_window(int d, const RadiusMeasure& nu, double L);

/// Crossing frequency along axis 0 at one intensity. Replicate r of the point
/// uses the stream (seed, stream_id, r).
CurvePoint crossing_frequency(int d, const RadiusMeasure& nu, const BoxWindow& w, double lambda,
                              std::size_t replicates, std::uint64_t seed, std::uint64_t stream_id,
                              int threads = 1);

std::vector<CurvePoint> crossing_curve(int d, const RadiusMeasure& nu, const BoxWindow& w,
                                      const std::vector<double>& lambdas, std::size_t replicates,
                                      std::uint64_t seed, int threads = 1);

/// Pool-adjacent-violators fit of the frequencies (weights 1/se^2, floored),
/// nondecreasing in lambda. The input must be sorted by lambda.
std::vector<double> isotonic_frequencies(const std::vector<CurvePoint>& curve);

struct ThresholdOptions {
  double target = 0.5;
  double tolerance = 0.01;        // relative width of the final bracket
  std::size_t replicates = 400;   // per evaluated intensity
  int local_points = 5;           // local grid for the linear fit around the bracket
  double local_span = 0.08;       // relative half-width of that grid
  int max_doublings = 60;
  int threads = 1;
};

struct ThresholdEstimate {
  int d = 0;
  double L = 0.0;                 // window side in units of the largest radius
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  double lambda_hat = 0.0;
  double lambda_std_error = 0.0;
  double lambda_lo = 0.0;         // lambda_hat -/+ 1.96 standard errors
  double lambda_hi = 0.0;
  double bracket_lo = 0.0;        // final bisection bracket
  double bracket_hi = 0.0;
  double lambda_tilde = 0.0;      // lambda_hat * v_d 2^d moment(nu, d)
  double lambda_tilde_std_error = 0.0;
  double c_hat = 0.0;             // 1 - exp(-lambda_tilde / 2^d)
  double c_std_error = 0.0;
  bool finite_size_warning = false;  // lambda_tilde <= 1
  std::vector<CurvePoint> curve;     // every evaluated intensity, sorted
  std::vector<double> isotonic;      // monotone cleanup of `curve`
};

/// 0.5-crossing of the crossing probability at fixed window. Brackets by
/// doubling/halving from the intensity with normalized value 1, bisects to the
/// relative tolerance, then fits a weighted line through a small local grid to
/// get the point estimate and its standard error.
ThresholdEstimate bisect_threshold(int d, const RadiusMeasure& nu, double L, std::uint64_t seed,
                                   const ThresholdOptions& opt = {});

/// (1 - alpha) delta_1 + (alpha / rho^d) delta_rho; zero-mass atoms dropped.
RadiusMeasure mixture_measure(double alpha, double rho, int d);

struct SweepRow {
  double alpha;
  ThresholdEstimate estimate;
};

std::vector<SweepRow> mixture_sweep(int d, double rho, const std::vector<double>& alphas, double L,
                                    std::uint64_t seed, const ThresholdOptions& opt = {});

/// Header: d,rho,alpha,lambda_hat,lambda_lo,lambda_hi,lambda_tilde,c_hat,L,replicates,seed
void write_sweep_csv(std::ostream& out, int d, double rho, const std::vector<SweepRow>& rows);

}  // namespace cperc

#endif  // CPERC_ESTIMATOR_HPP
