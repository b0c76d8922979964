#include "cperc/cell_grid.hpp"

#include <algorithm>

namespace cperc {

CellGrid::CellGrid(const BallConfiguration& c) {
  const int d = c.window.dim();
  side_ = c.size() > 0 ? 2.0 * c.radii.maxCoeff() : 1.0;
  torus_ = c.window.boundary == Boundary::torus;
  origin_ = c.window.lower();
  if (torus_) {
    counts_.resize(d);
    torus_side_.resize(d);
    for (int k = 0; k < d; ++k) {
      counts_[k] = static_cast<std::int64_t>(std::floor(c.window.sides(k) / side_));
      if (counts_[k] < 3) usable_ = false;
      torus_side_(k) = c.window.sides(k) / static_cast<double>(std::max<std::int64_t>(counts_[k], 1));
    }
  }
  if (!usable_) return;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    cells_[cell_of(c.centers.col(i))].push_back(static_cast<std::size_t>(i));
}

CellGrid::Key CellGrid::cell_of(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Key key(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (torus_) {
      const double L = torus_side_(k) * static_cast<double>(counts_[k]);
      const double u = x(k) - L * std::floor(x(k) / L);
      key[k] = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(u / torus_side_(k))),
                                      counts_[k] - 1);
    } else {
      key[k] = static_cast<std::int64_t>(std::floor((x(k) - origin_(k)) / side_));
    }
  }
  return key;
}

}  // namespace cperc
