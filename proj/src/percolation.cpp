#include "cperc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>

#include "cperc/error.hpp"
#include "cperc/union_find.hpp"

namespace cperc {

NeighborIndex::NeighborIndex(const BallConfiguration& c) : c_(c) {
  const double cells = std::pow(3.0, c.dim());
  if (c.size() > 0 && cells < static_cast<double>(c.size())) {
    CellGrid grid(c);
    if (grid.usable()) grid_.emplace(std::move(grid));
  }
}

double squared_distance_to_box(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& lo,
                               const Eigen::Ref<const Eigen::VectorXd>& hi) {
  const Eigen::ArrayXd excess =
      (lo.array() - x.array()).max(0.0) + (x.array() - hi.array()).max(0.0);
  return excess.square().sum();
}

namespace {

ClusterLabeling finish(UnionFind& uf, const std::vector<bool>* include) {
  ClusterLabeling out;
  const std::size_t n = uf.size();
  out.label.assign(n, static_cast<std::size_t>(-1));
  std::vector<std::size_t> id_of_root(n, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < n; ++i) {
    if (include && !(*include)[i]) continue;
    const std::size_t r = uf.find(i);
    if (id_of_root[r] == static_cast<std::size_t>(-1)) {
      id_of_root[r] = out.count++;
      out.sizes.push_back(0);
    }
    out.label[i] = id_of_root[r];
    ++out.sizes[out.label[i]];
  }
  out.parent = uf.parents();
  out.rank = uf.ranks();
  return out;
}

ClusterLabeling label(const BallConfiguration& c, const std::vector<bool>* include) {
  UnionFind uf(static_cast<std::size_t>(c.size()));
  NeighborIndex index(c);
  for (std::size_t i = 0; i < uf.size(); ++i) {
    if (include && !(*include)[i]) continue;
    index.for_each_neighbor(i, [&](std::size_t j) {
      if (j > i && (!include || (*include)[j])) uf.unite(i, j);
    });
  }
  return finish(uf, include);
}

bool meets_core(const BallConfiguration& c, Eigen::Index i) {
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(c.dim());
  return squared_distance_to_box(c.centers.col(i), lo, c.window.sides) <
         c.radii(i) * c.radii(i);
}

// Face x_axis = value of the core window, as a degenerate box.
bool meets_face(const BallConfiguration& c, Eigen::Index i, int axis, double value) {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(c.dim());
  Eigen::VectorXd hi = c.window.sides;
  lo(axis) = value;
  hi(axis) = value;
  return squared_distance_to_box(c.centers.col(i), lo, hi) < c.radii(i) * c.radii(i);
}

std::vector<ClusterStat> padded_statistics(const BallConfiguration& c, int axis) {
  std::vector<bool> include(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) include[i] = meets_core(c, i);
  const ClusterLabeling lab = label(c, &include);
  std::vector<char> low(lab.count, 0), high(lab.count, 0);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!include[i]) continue;
    const std::size_t id = lab.label[i];
    if (meets_face(c, i, axis, 0.0)) low[id] = 1;
    if (meets_face(c, i, axis, c.window.sides(axis))) high[id] = 1;
  }
  std::vector<ClusterStat> out;
  for (std::size_t id = 0; id < lab.count; ++id)
    out.push_back({id, lab.sizes[id], low[id] && high[id]});
  return out;
}

// A cluster wraps along `axis` when two unwrapped positions of the same ball disagree.
std::vector<ClusterStat> torus_statistics(const BallConfiguration& c, int axis) {
  const std::size_t n = static_cast<std::size_t>(c.size());
  const ClusterLabeling lab = build_clusters(c);
  NeighborIndex index(c);
  std::vector<bool> seen(n, false);
  std::vector<char> wraps(lab.count, 0);
  Eigen::MatrixXd unwrapped(c.dim(), c.size());
  const double half = 0.5 * c.window.sides(axis);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    unwrapped.col(s) = c.centers.col(s);
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      index.for_each_neighbor(i, [&](std::size_t j) {
        const Eigen::VectorXd pos =
            unwrapped.col(i) + displacement(c.window, c.centers.col(i), c.centers.col(j));
        if (!seen[j]) {
          seen[j] = true;
          unwrapped.col(j) = pos;
          queue.push_back(j);
        } else if (std::abs(pos(axis) - unwrapped(axis, j)) > half) {
          wraps[lab.label[j]] = 1;
        }
      });
    }
  }
  std::vector<ClusterStat> out;
  for (std::size_t id = 0; id < lab.count; ++id) out.push_back({id, lab.sizes[id], wraps[id] != 0});
  return out;
}

}  // namespace

ClusterLabeling build_clusters(const BallConfiguration& c) { return label(c, nullptr); }

std::vector<ClusterStat> cluster_statistics(const BallConfiguration& c, int axis) {
  require(axis >= 0 && axis < c.window.dim(), "crossing axis out of range");
  if (c.window.boundary == Boundary::torus) return torus_statistics(c, axis);
  return padded_statistics(c, axis);
}

bool crossing(const BallConfiguration& c, int axis) {
  const auto stats = cluster_statistics(c, axis);
  return std::any_of(stats.begin(), stats.end(), [](const ClusterStat& s) { return s.crossing; });
}

void write_cluster_csv(std::ostream& out, const std::vector<ClusterStat>& stats) {
  out << "cluster_id,size,crossing\n";
  for (const ClusterStat& s : stats) out << s.id << ',' << s.size << ',' << (s.crossing ? 1 : 0) << '\n';
}

AlternatingResult alternating_path(const BallConfiguration& c, const Ball& root) {
  require(root.dim() == c.window.dim(), "root dimension differs from configuration");
  std::vector<double> radii{root.radius};
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (std::find(radii.begin(), radii.end(), c.radii(i)) == radii.end()) radii.push_back(c.radii(i));
  if (radii.size() > 2) throw InvalidArgument("alternating paths need exactly two radius values");
  const double large = root.radius;
  if (radii.size() == 2 && radii[1] > large)
    throw InvalidArgument("alternating root must carry the larger radius");

  AlternatingResult out;
  const std::size_t n = static_cast<std::size_t>(c.size());
  out.depth.assign(n, -1);
  // Even depths hold large balls and odd depths small ones, so the parity of a
  // ball's depth is fixed by its radius and plain BFS over large-small edges works.
  auto is_large = [&](std::size_t j) { return c.radii(static_cast<Eigen::Index>(j)) == large; };
  auto sticks_out = [&](std::size_t j) {
    const auto x = c.centers.col(static_cast<Eigen::Index>(j));
    const double r = c.radii(static_cast<Eigen::Index>(j));
    return ((x.array() - r) < 0.0).any() || ((x.array() + r) > c.window.sides.array()).any();
  };

  NeighborIndex index(c);
  std::deque<std::size_t> queue;
  index.for_each_overlapping(root, [&](std::size_t j) {
    if (!is_large(j)) {
      out.depth[j] = 1;
      queue.push_back(j);
    }
  });
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    out.max_depth = std::max(out.max_depth, out.depth[i]);
    if (sticks_out(i)) out.exists_to_boundary = true;
    index.for_each_neighbor(i, [&](std::size_t j) {
      if (out.depth[j] < 0 && is_large(j) != is_large(i)) {
        out.depth[j] = out.depth[i] + 1;
        queue.push_back(j);
      }
    });
  }
  return out;
}

GenealogyReport genealogy(const BallConfiguration& c, const Ball& root, int max_generations) {
  require(root.dim() == c.window.dim(), "root dimension differs from configuration");
  require(max_generations >= 1, "max_generations must be positive");
  GenealogyReport out;
  const std::size_t n = static_cast<std::size_t>(c.size());
  out.generation.assign(n, -1);
  int atoms = 1;
  for (int a : c.atom) atoms = std::max(atoms, a + 1);

  const double r_max = c.size() > 0 ? c.radii.maxCoeff() : 0.0;
  const Eigen::VectorXd lo = c.window.lower();
  const Eigen::VectorXd hi = c.window.upper();
  auto near_edge = [&](std::size_t j) {
    if (c.window.boundary == Boundary::torus) return false;
    const auto x = c.centers.col(static_cast<Eigen::Index>(j));
    const double reach = c.radii(static_cast<Eigen::Index>(j)) + r_max;
    const double margin = std::min((x - lo).minCoeff(), (hi - x).minCoeff());
    return margin < reach;
  };

  std::vector<std::size_t> frontier;
  NeighborIndex index(c);
  index.for_each_overlapping(root, [&](std::size_t j) {
    out.generation[j] = 1;
    frontier.push_back(j);
  });

  int g = 1;
  while (!frontier.empty()) {
    std::vector<std::uint64_t> sizes(static_cast<std::size_t>(atoms), 0);
    for (std::size_t j : frontier) {
      ++sizes[static_cast<std::size_t>(c.atom[j])];
      if (near_edge(j)) out.truncated = true;
    }
    out.total += frontier.size();
    out.generation_sizes.push_back(std::move(sizes));
    if (g == max_generations) {
      out.truncated = true;
      break;
    }
    std::vector<std::size_t> next;
    for (std::size_t i : frontier) {
      index.for_each_neighbor(i, [&](std::size_t j) {
        if (out.generation[j] < 0) {
          out.generation[j] = g + 1;
          next.push_back(j);
        }
      });
    }
    frontier = std::move(next);
    ++g;
  }
  return out;
}

}  // namespace cperc
