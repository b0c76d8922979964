#include "cperc/oriented.hpp"

#include <cmath>

#include "cperc/error.hpp"
#include "cperc/measures.hpp"
#include "cperc/rng.hpp"

namespace cperc {

namespace {

constexpr std::uint64_t kBernoulliStream = 0x6265726eULL;
constexpr std::uint64_t kVirtualStream = 0x76697274ULL;
constexpr std::uint64_t kCellStream = 0x63656c6cULL;
constexpr std::uint64_t kOriginStream = 0x6f726967ULL;

std::uint64_t as_key(int v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }

double edge_uniform(std::uint64_t run_key, int n, int i, int dir) {
  const std::uint64_t h = splitmix64(run_key ^ splitmix64((static_cast<std::uint64_t>(n) << 32) ^
                                                          (static_cast<std::uint64_t>(i) << 1) ^
                                                          static_cast<std::uint64_t>(dir)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

OrientedLattice::OrientedLattice(int n) : n_max(n) {
  require(n_max >= 0, "lattice height must be nonnegative");
  open_left.resize(n_max);
  open_right.resize(n_max);
  for (int k = 0; k < n_max; ++k) {
    open_left[k].assign(k + 1, 0);
    open_right[k].assign(k + 1, 0);
  }
}

std::string to_string(OrientedMode m) {
  return m == OrientedMode::bernoulli ? "bernoulli" : "embedded";
}

OrientedMode parse_oriented_mode(const std::string& s) {
  if (s == "bernoulli") return OrientedMode::bernoulli;
  if (s == "embedded") return OrientedMode::embedded;
  throw InvalidArgument("unknown oriented mode '" + s + "'");
}

std::vector<Site> leftmost_open_path(const OrientedLattice& lat, int* deepest) {
  const int N = lat.n_max;
  std::vector<std::vector<char>> wet(N + 1);
  wet[0].assign(1, 1);
  int depth = 0;
  for (int n = 0; n < N; ++n) {
    wet[n + 1].assign(n + 2, 0);
    bool any = false;
    for (int i = 0; i <= n; ++i) {
      if (!wet[n][i]) continue;
      if (lat.open_left[n][i]) wet[n + 1][i] = 1, any = true;
      if (lat.open_right[n][i]) wet[n + 1][i + 1] = 1, any = true;
    }
    if (!any) break;
    depth = n + 1;
  }
  if (deepest) *deepest = depth;

  // good[n][i]: wet and an open path continues from it down to `depth`.
  std::vector<std::vector<char>> good(depth + 1);
  good[depth] = wet[depth];
  for (int n = depth - 1; n >= 0; --n) {
    good[n].assign(n + 1, 0);
    for (int i = 0; i <= n; ++i)
      good[n][i] = wet[n][i] && ((lat.open_left[n][i] && good[n + 1][i]) ||
                                 (lat.open_right[n][i] && good[n + 1][i + 1]));
  }
  // Greedy left-first descent through good sites yields the pointwise leftmost path.
  std::vector<Site> path{{0, 0}};
  int i = 0;
  for (int n = 0; n < depth; ++n) {
    if (lat.open_left[n][i] && good[n + 1][i]) {
      // left child keeps slot i
    } else {
      ++i;
    }
    path.push_back({2 * i - (n + 1), n + 1});
  }
  return path;
}

OrientedResult simulate_oriented_bernoulli(double p, int n_max, std::uint64_t seed,
                                           std::uint64_t replicate) {
  require(p >= 0.0 && p <= 1.0, "edge probability must lie in [0, 1]");
  require(n_max >= 1, "n_max must be positive");
  OrientedLattice lat(n_max);
  const std::uint64_t run_key = derive_key({seed, replicate, kBernoulliStream});
  std::vector<char> wet{1};
  for (int n = 0; n < n_max; ++n) {
    std::vector<char> next(n + 2, 0);
    bool any = false;
    for (int i = 0; i <= n; ++i) {
      if (!wet[i]) continue;
      lat.open_left[n][i] = edge_uniform(run_key, n, i, 0) < p;
      lat.open_right[n][i] = edge_uniform(run_key, n, i, 1) < p;
      if (lat.open_left[n][i]) next[i] = 1, any = true;
      if (lat.open_right[n][i]) next[i + 1] = 1, any = true;
    }
    wet = std::move(next);
    if (!any) break;
  }
  OrientedResult out;
  out.leftmost_path = leftmost_open_path(lat, &out.max_level);
  out.survival = out.max_level == n_max;
  return out;
}

OrientedResult simulate_oriented_embedded(const EmbeddingGeometry& g, double p_floor, int n_max,
                                          std::uint64_t seed, std::uint64_t replicate) {
  require(p_floor >= 0.0 && p_floor <= 1.0, "p_floor must lie in [0, 1]");
  require(n_max >= 1, "n_max must be positive");
  const int m = g.tail_dim();
  const double s = g.scale();
  const TwoTypeIntensities lam = two_type_intensities(g.kappa, g.rho, g.d);
  const double log_v = log_unit_ball_volume(m) - std::log(static_cast<double>(g.d));
  const double mean_unit = std::exp(lam.unit.log + log_v + m * std::log(g.reach()));
  const double mean_large = std::exp(lam.large.log + log_v + m * std::log(2.0 * g.reach()));
  if (!(mean_unit <= kMaxExpectedStepPoints && mean_large <= kMaxExpectedStepPoints))
    throw SizingError("embedded oriented percolation would need too many points per cell");

  // Poisson points of one type in the half-cell square (k, n) whose tail lies
  // within `radius` of `center`. Every square is examined by at most one site,
  // so sampling it lazily around that site's anchor is exact.
  auto cell_points = [&](int k, int n, int type, const Eigen::VectorXd& center, double radius,
                         double mean) {
    CounterRng rng{seed, replicate, kCellStream, as_key(n), as_key(k), static_cast<std::uint64_t>(type)};
    const auto count = static_cast<Eigen::Index>(rng.poisson(mean));
    Eigen::MatrixXd pts(g.d, count);
    for (Eigen::Index i = 0; i < count; ++i) {
      pts(0, i) = s * (k + rng.uniform());
      pts(1, i) = s * (n + rng.uniform());
      pts.col(i).tail(m) = center + sample_annulus(m, 0.0, radius, rng);
    }
    return pts;
  };

  OrientedLattice lat(n_max);
  lat.anchor.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) lat.anchor[n].assign(n + 1, std::nullopt);

  // x(0, 0): the radius-rho point of W_{0,0} closest to the axis, found shell by shell.
  {
    const double log_area = std::log(2.0 / g.d);
    double inner = 0.0;
    double outer = g.reach();
    for (int shell = 0;; ++shell) {
      if (shell > 4096) throw SearchFailure("no radius-rho point found near the origin cell");
      const double log_shell =
          log_unit_ball_volume(m) + (inner > 0.0 ? log_diff_exp(m * std::log(outer), m * std::log(inner))
                                                 : m * std::log(outer));
      const double mean = std::exp(lam.large.log + log_area + log_shell);
      if (!(mean <= kMaxExpectedStepPoints)) throw SizingError("origin shell too populated");
      CounterRng rng{seed, replicate, kOriginStream, static_cast<std::uint64_t>(shell)};
      const std::uint64_t count = rng.poisson(mean);
      std::optional<Point> best;
      for (std::uint64_t i = 0; i < count; ++i) {
        Point x(g.d);
        x(0) = s * rng.uniform(-1.0, 1.0);
        x(1) = s * rng.uniform(-1.0, 0.0);
        x.tail(m) = sample_annulus(m, inner, outer, rng);
        if (!best || x.tail(m).norm() < best->tail(m).norm()) best = x;
      }
      if (best) {
        lat.anchor[0][0] = *best;
        break;
      }
      inner = outer;
      outer *= 2.0;
    }
  }

  std::vector<std::vector<std::optional<StepWitness>>> z_left(n_max), z_right(n_max);
  OrientedResult out;
  for (int n = 0; n < n_max; ++n) {
    z_left[n].assign(n + 1, std::nullopt);
    z_right[n].assign(n + 1, std::nullopt);
    for (int i = 0; i <= n; ++i) {
      const int a = 2 * i - n;
      const auto& x = lat.anchor[n][i];
      if (!x) {
        CounterRng coin{seed, replicate, kVirtualStream, as_key(n), as_key(i)};
        lat.open_left[n][i] = coin.bernoulli(p_floor);
        lat.open_right[n][i] = coin.bernoulli(p_floor);
        out.virtual_edges_opened += lat.open_left[n][i] + lat.open_right[n][i];
        continue;
      }
      ++out.real_sites;
      const Eigen::VectorXd tail = x->tail(m);
      for (int dir = 0; dir < 2; ++dir) {
        const int k = dir == 0 ? a - 1 : a;  // W^-_{a,n} = square a-1, W^+_{a,n} = square a
        const Eigen::MatrixXd unit = cell_points(k, n, 1, tail, g.reach(), mean_unit);
        const Eigen::MatrixXd large = cell_points(k, n, 2, tail, 2.0 * g.reach(), mean_large);
        auto step = find_step(*x, unit, large, g.reach());
        if (dir == 0) {
          lat.open_left[n][i] = step.has_value();
          z_left[n][i] = std::move(step);
        } else {
          lat.open_right[n][i] = step.has_value();
          z_right[n][i] = std::move(step);
        }
      }
    }
    // x(a, n+1) prefers z+(a-1, n), then z-(a+1, n).
    for (int j = 0; j <= n + 1; ++j) {
      if (j >= 1 && z_right[n][j - 1])
        lat.anchor[n + 1][j] = z_right[n][j - 1]->x2;
      else if (j <= n && z_left[n][j])
        lat.anchor[n + 1][j] = z_left[n][j]->x2;
    }
  }
  for (int j = 0; j <= n_max; ++j)
    if (lat.anchor[n_max][j]) ++out.real_sites;

  out.leftmost_path = leftmost_open_path(lat, &out.max_level);
  out.survival = out.max_level == n_max;

  out.chain.emplace_back(*lat.anchor[0][0], g.rho);
  for (std::size_t k = 0; k + 1 < out.leftmost_path.size(); ++k) {
    const Site from = out.leftmost_path[k];
    const Site to = out.leftmost_path[k + 1];
    const int i = OrientedLattice::slot(from.a, from.n);
    const auto& step = to.a < from.a ? z_left[from.n][i] : z_right[from.n][i];
    if (!step) throw std::logic_error("open edge on the leftmost path has no witness");
    out.chain.emplace_back(step->x1, 1.0);
    out.chain.emplace_back(step->x2, g.rho);
    const auto& next_anchor = lat.anchor[to.n][OrientedLattice::slot(to.a, to.n)];
    if (!next_anchor || *next_anchor != step->x2)
      throw std::logic_error("leftmost path left the anchored chain");
  }
  return out;
}

OrientedResult simulate_oriented(const EmbeddingGeometry& g, double p_floor, int n_max,
                                 std::uint64_t seed, OrientedMode mode, std::uint64_t replicate) {
  if (mode == OrientedMode::bernoulli) return simulate_oriented_bernoulli(p_floor, n_max, seed, replicate);
  return simulate_oriented_embedded(g, p_floor, n_max, seed, replicate);
}

bool verify_alternating_chain(const std::vector<Ball>& chain, double rho) {
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const double expected = k % 2 == 0 ? rho : 1.0;
    if (chain[k].radius != expected) return false;
    if (k > 0 && !balls_intersect(chain[k - 1], chain[k])) return false;
    for (std::size_t j = 0; j < k; ++j)
      if (chain[j].center == chain[k].center) return false;
  }
  return true;
}

}  // namespace cperc
