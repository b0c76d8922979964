#ifndef CPERC_CELL_GRID_HPP
#define CPERC_CELL_GRID_HPP

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "cperc/sampling.hpp"

namespace cperc {

/// Uniform grid with cell side = max ball diameter: overlapping balls sit in
/// the same or Chebyshev-adjacent cells.
///
/// On a torus window the number of cells per axis is floor(L / side) and the
/// lookup wraps; when an axis has fewer than three cells every pair along it is
/// a neighbour and callers should fall back to brute force (`usable()`).
class CellGrid {
 public:
  using Key = std::vector<std::int64_t>;

  explicit CellGrid(const BallConfiguration& c);

  double cell_side() const { return side_; }
  bool usable() const { return usable_; }
  std::size_t occupied_cells() const { return cells_.size(); }

  Key cell_of(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Calls f(j) for every ball j in the 3^d block of cells around x.
  template <typename F>
  void for_each_candidate(const Eigen::Ref<const Eigen::VectorXd>& x, F&& f) const {
    const Key base = cell_of(x);
    Key probe(base.size());
    const std::size_t d = base.size();
    std::vector<int> offset(d, -1);
    while (true) {
      for (std::size_t k = 0; k < d; ++k) probe[k] = wrap(k, base[k] + offset[k]);
      if (auto it = cells_.find(probe); it != cells_.end())
        for (std::size_t j : it->second) f(j);
      std::size_t k = 0;
      while (k < d && offset[k] == 1) offset[k++] = -1;
      if (k == d) break;
      ++offset[k];
    }
  }

 private:
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001b3ULL;
      return static_cast<std::size_t>(h);
    }
  };

  std::int64_t wrap(std::size_t axis, std::int64_t v) const {
    if (!torus_) return v;
    const std::int64_t n = counts_[axis];
    return ((v % n) + n) % n;
  }

  double side_ = 1.0;
  bool torus_ = false;
  bool usable_ = true;
  Eigen::VectorXd origin_;
  std::vector<std::int64_t> counts_;
  Eigen::VectorXd torus_side_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> cells_;
};

}  // namespace cperc

#endif  // CPERC_CELL_GRID_HPP
