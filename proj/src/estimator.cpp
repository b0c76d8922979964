#include "cperc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>

#include "cperc/error.hpp"
#include "cperc/parallel.hpp"
#include "cperc/percolation.hpp"
#include "cperc/rng.hpp"

namespace cperc {

BoxWindow crossing_window(int d, const RadiusMeasure& nu, double L) {
  require(L > 0.0, "window size must be positive");
  const double r = nu.max_radius();
  return BoxWindow::cube(d, L * r, r);
}

CurvePoint crossing_frequency(int d, const RadiusMeasure& nu, const BoxWindow& w, double lambda,
                              std::size_t replicates, std::uint64_t seed, std::uint64_t stream_id,
                              int threads) {
  require(replicates > 0, "need at least one replicate");
  const ModelParams params(d, lambda, nu);
  const std::uint64_t point_seed = derive_key({seed, stream_id});
  std::vector<char> crossed(replicates, 0);
  parallel_for(replicates, threads, [&](std::size_t r) {
    const BallConfiguration c = sample_boolean_model(params, w, point_seed, r);
    crossed[r] = crossing(c, 0) ? 1 : 0;
  });
  const double n = static_cast<double>(replicates);
  const double f = static_cast<double>(std::count(crossed.begin(), crossed.end(), 1)) / n;
  return {lambda, f, std::sqrt(f * (1.0 - f) / n)};
}

std::vector<CurvePoint> crossing_curve(int d, const RadiusMeasure& nu, const BoxWindow& w,
                                      const std::vector<double>& lambdas, std::size_t replicates,
                                      std::uint64_t seed, int threads) {
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    require(lambdas[k] > lambdas[k - 1], "intensity grid must be strictly increasing");
  std::vector<CurvePoint> out;
  out.reserve(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    out.push_back(crossing_frequency(d, nu, w, lambdas[k], replicates, seed, k, threads));
  return out;
}

std::vector<double> isotonic_frequencies(const std::vector<CurvePoint>& curve) {
  struct Block {
    double value;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (const CurvePoint& p : curve) {
    const double var = std::max(p.std_error * p.std_error, 1e-6);
    blocks.push_back({p.frequency, 1.0 / var, 1});
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].value > blocks.back().value) {
      Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.value = (a.value * a.weight + b.value * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.value);
  return out;
}

namespace {

struct LineFit {
  double lambda_hat;
  double std_error;
  bool ok;
};

// Weighted least squares f = a + b lambda through the points, solved for f = target.
LineFit fit_crossing(const std::vector<CurvePoint>& pts, double target, std::size_t replicates) {
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  if (n < 2) return {0.0, 0.0, false};
  const double scale = pts.front().lambda;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    X(k, 0) = 1.0;
    X(k, 1) = pts[k].lambda / scale;
    y(k) = pts[k].frequency;
    // Smoothed binomial variance keeps 0/1 frequencies from getting infinite weight.
    const double p = (pts[k].frequency * replicates + 0.5) / (replicates + 1.0);
    w(k) = replicates / (p * (1.0 - p));
  }
  const Eigen::Matrix2d info = X.transpose() * w.asDiagonal() * X;
  const Eigen::Vector2d beta = info.ldlt().solve(X.transpose() * w.asDiagonal() * y);
  if (!(beta(1) > 0.0)) return {0.0, 0.0, false};
  const Eigen::Matrix2d cov = info.inverse();
  const double x_hat = (target - beta(0)) / beta(1);
  const Eigen::Vector2d grad(-1.0 / beta(1), -x_hat / beta(1));
  const double var = grad.dot(cov * grad);
  return {x_hat * scale, std::sqrt(std::max(var, 0.0)) * scale, true};
}

}  // namespace

ThresholdEstimate bisect_threshold(int d, const RadiusMeasure& nu, double L, std::uint64_t seed,
                                   const ThresholdOptions& opt) {
  require(opt.target > 0.0 && opt.target < 1.0, "target frequency must lie in (0, 1)");
  require(opt.tolerance > 0.0, "tolerance must be positive");
  require(opt.local_points >= 2, "need at least two local points");
  const BoxWindow w = crossing_window(d, nu, L);
  const double log_norm =
      log_unit_ball_volume(d) + d * std::numbers::ln2 + log_moment(nu, d);  // lambda_tilde / lambda

  ThresholdEstimate est;
  est.d = d;
  est.L = L;
  est.replicates = opt.replicates;
  est.seed = seed;

  std::uint64_t stream = 0;
  auto eval = [&](double lambda) {
    const CurvePoint p =
        crossing_frequency(d, nu, w, lambda, opt.replicates, seed, stream++, opt.threads);
    est.curve.push_back(p);
    return p.frequency;
  };

  double lo = std::exp(-log_norm);
  double hi = lo;
  if (eval(lo) >= opt.target) {
    int k = 0;
    do {
      hi = lo;
      lo *= 0.5;
      if (++k > opt.max_doublings) throw SearchFailure("failed to bracket the threshold from above");
    } while (eval(lo) >= opt.target);
  } else {
    int k = 0;
    do {
      lo = hi;
      hi *= 2.0;
      if (++k > opt.max_doublings) throw SearchFailure("failed to bracket the threshold from below");
    } while (eval(hi) < opt.target);
  }
  while ((hi - lo) > opt.tolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) < opt.target)
      lo = mid;
    else
      hi = mid;
  }
  est.bracket_lo = lo;
  est.bracket_hi = hi;

  const double center = 0.5 * (lo + hi);
  for (int k = 0; k < opt.local_points; ++k) {
    const double t = opt.local_points == 1 ? 0.0 : 2.0 * k / (opt.local_points - 1) - 1.0;
    eval(center * (1.0 + opt.local_span * t));
  }
  std::sort(est.curve.begin(), est.curve.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.lambda < b.lambda; });
  est.isotonic = isotonic_frequencies(est.curve);

  std::vector<CurvePoint> local;
  for (const CurvePoint& p : est.curve)
    if (std::abs(p.lambda / center - 1.0) <= opt.local_span * (1.0 + 1e-9)) local.push_back(p);
  const LineFit fit = fit_crossing(local, opt.target, opt.replicates);
  if (fit.ok && fit.lambda_hat > 0.0) {
    est.lambda_hat = fit.lambda_hat;
    est.lambda_std_error = fit.std_error;
  } else {
    est.lambda_hat = center;
    est.lambda_std_error = 0.5 * (hi - lo);
  }
  est.lambda_lo = est.lambda_hat - 1.96 * est.lambda_std_error;
  est.lambda_hi = est.lambda_hat + 1.96 * est.lambda_std_error;

  const double norm = std::exp(log_norm);
  est.lambda_tilde = est.lambda_hat * norm;
  est.lambda_tilde_std_error = est.lambda_std_error * norm;
  est.c_hat = covered_volume_from_normalized(est.lambda_tilde, d);
  const double two_d = std::ldexp(1.0, d);
  est.c_std_error = std::exp(-est.lambda_tilde / two_d) / two_d * est.lambda_tilde_std_error;
  est.finite_size_warning = est.lambda_tilde <= 1.0;
  return est;
}

RadiusMeasure mixture_measure(double alpha, double rho, int d) {
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(rho > 0.0 && rho != 1.0, "rho must be positive and differ from 1");
  std::vector<Atom> atoms;
  if (alpha < 1.0) atoms.push_back({1.0, 1.0 - alpha});
  if (alpha > 0.0) atoms.push_back({rho, alpha * std::exp(-d * std::log(rho))});
  return RadiusMeasure(std::move(atoms));
}

std::vector<SweepRow> mixture_sweep(int d, double rho, const std::vector<double>& alphas, double L,
                                    std::uint64_t seed, const ThresholdOptions& opt) {
  std::vector<SweepRow> rows;
  for (double alpha : alphas)
    rows.push_back({alpha, bisect_threshold(d, mixture_measure(alpha, rho, d), L, seed, opt)});
  return rows;
}

void write_sweep_csv(std::ostream& out, int d, double rho, const std::vector<SweepRow>& rows) {
  out << "d,rho,alpha,lambda_hat,lambda_lo,lambda_hi,lambda_tilde,c_hat,L,replicates,seed\n";
  for (const SweepRow& r : rows) {
    const ThresholdEstimate& e = r.estimate;
    out << d << ',' << exact_decimal(rho) << ',' << exact_decimal(r.alpha) << ','
        << exact_decimal(e.lambda_hat) << ',' << exact_decimal(e.lambda_lo) << ','
        << exact_decimal(e.lambda_hi) << ',' << exact_decimal(e.lambda_tilde) << ','
        << exact_decimal(e.c_hat) << ',' << exact_decimal(e.L) << ',' << e.replicates << ','
        << e.seed << '\n';
  }
}

}  // namespace cperc
