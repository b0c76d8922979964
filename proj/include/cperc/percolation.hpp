#ifndef CPERC_PERCOLATION_HPP
#define CPERC_PERCOLATION_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cperc/cell_grid.hpp"
#include "cperc/geometry.hpp"
#include "cperc/sampling.hpp"

namespace cperc {

/// Partition of the balls of a configuration into overlap-connected clusters.
struct ClusterLabeling {
  std::vector<std::size_t> parent;   // union-find forest after all unions
  std::vector<std::uint8_t> rank;
  std::vector<std::size_t> label;    // dense cluster id in [0, count), by first ball
  std::vector<std::size_t> sizes;    // balls per cluster id
  std::size_t count = 0;

  std::size_t root(std::size_t i) const {
    while (parent[i] != i) i = parent[i];
    return i;
  }
};

/// Enumerates overlapping pairs via a CellGrid, or by brute force when the
/// grid would not pay off (3^d neighbour cells exceeding the ball count, or a
/// torus too small for three cells per axis).
class NeighborIndex {
 public:
  explicit NeighborIndex(const BallConfiguration& c);

  /// f(j) for every ball j != i overlapping ball i.
  template <typename F>
  void for_each_neighbor(std::size_t i, F&& f) const {
    if (grid_) {
      grid_->for_each_candidate(c_.centers.col(static_cast<Eigen::Index>(i)), [&](std::size_t j) {
        if (j != i && overlap(c_, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) f(j);
      });
      return;
    }
    for (Eigen::Index j = 0; j < c_.size(); ++j)
      if (static_cast<std::size_t>(j) != i && overlap(c_, static_cast<Eigen::Index>(i), j))
        f(static_cast<std::size_t>(j));
  }

  /// f(j) for every ball j overlapping an external ball b (not part of the configuration).
  template <typename F>
  void for_each_overlapping(const Ball& b, F&& f) const {
    for (Eigen::Index j = 0; j < c_.size(); ++j) {
      const double reach = b.radius + c_.radii(j);
      if (displacement(c_.window, b.center, c_.centers.col(j)).squaredNorm() < reach * reach)
        f(static_cast<std::size_t>(j));
    }
  }

 private:
  const BallConfiguration& c_;
  std::optional<CellGrid> grid_;
};

ClusterLabeling build_clusters(const BallConfiguration& c);

/// True iff one cluster touches both faces x_axis = 0 and x_axis = L_axis of
/// the core window. Only balls meeting the core window take part. On a torus
/// window the test is whether some cluster wraps around along `axis`.
bool crossing(const BallConfiguration& c, int axis);

struct ClusterStat {
  std::size_t id;
  std::size_t size;
  bool crossing;
};

/// Per-cluster sizes and crossing flags along `axis` (same rules as crossing()).
std::vector<ClusterStat> cluster_statistics(const BallConfiguration& c, int axis);
void write_cluster_csv(std::ostream& out, const std::vector<ClusterStat>& stats);

struct AlternatingResult {
  bool exists_to_boundary = false;
  int max_depth = 0;
  std::vector<int> depth;  // per ball; -1 when not reached by an alternating chain
};

/// Breadth-first search from an external root ball of the large radius where a
/// ball at depth n must have the large radius for even n and the small radius
/// for odd n. Reports the deepest level reached and whether some reached ball
/// sticks out of the core window.
AlternatingResult alternating_path(const BallConfiguration& c, const Ball& root);

struct GenealogyReport {
  // generation_sizes[g-1][a]: balls of atom a in generation g >= 1. The root
  // itself (generation 0) is not counted.
  std::vector<std::vector<std::uint64_t>> generation_sizes;
  std::vector<int> generation;  // per ball; -1 when never reached
  std::uint64_t total = 0;      // N_d: all descendants of the root
  bool truncated = false;
};

inline constexpr int kDefaultMaxGenerations = 10000;

/// Generation-by-generation peeling from the root: generation 1 are the balls
/// touching the root, generation n+1 the balls touching generation n that were
/// not claimed earlier. Flags truncation when a reached ball could touch balls
/// outside the sampled region or when `max_generations` is exhausted.
GenealogyReport genealogy(const BallConfiguration& c, const Ball& root,
                          int max_generations = kDefaultMaxGenerations);

/// Squared distance from x to the axis-aligned box [lo, hi].
double squared_distance_to_box(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& lo,
                               const Eigen::Ref<const Eigen::VectorXd>& hi);

}  // namespace cperc

#endif  // CPERC_PERCOLATION_HPP
