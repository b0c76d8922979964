#include "cperc/sampling.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cperc/error.hpp"
#include "cperc/rng.hpp"

namespace cperc {

BoxWindow::BoxWindow(Eigen::VectorXd s, double pad, Boundary b)
    : sides(std::move(s)), padding(pad), boundary(b) {
  require(sides.size() >= 1, "window needs at least one axis");
  require((sides.array() > 0.0).all() && sides.allFinite(), "window sides must be positive");
  require(padding >= 0.0 && std::isfinite(padding), "padding must be nonnegative");
}

void BallConfiguration::push_back(const Ball& b, int atom_index) {
  if (centers.size() == 0) centers.resize(b.dim(), 0);
  require(b.dim() == centers.rows(), "dimension mismatch");
  const Eigen::Index n = centers.cols();
  centers.conservativeResize(Eigen::NoChange, n + 1);
  centers.col(n) = b.center;
  radii.conservativeResize(n + 1);
  radii(n) = b.radius;
  atom.push_back(atom_index);
}

BallConfiguration sample_boolean_model(const ModelParams& p, const BoxWindow& w,
                                       std::uint64_t seed, std::uint64_t replicate) {
  require(w.dim() == p.dimension, "window and model dimension differ");
  const double volume = w.sampled_volume();
  const auto& atoms = p.measure.atoms();

  std::vector<double> means;
  for (const Atom& a : atoms) {
    const double mean = p.intensity * a.mass * volume;
    if (!(mean <= kMaxExpectedPoints))
      throw SizingError("expected point count " + std::to_string(mean) + " exceeds the cap");
    means.push_back(mean);
  }

  const Eigen::VectorXd lo = w.lower();
  const Eigen::VectorXd span = w.upper() - lo;

  BallConfiguration out;
  out.window = w;
  out.seed = seed;
  out.replicate = replicate;

  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  std::vector<CounterRng> streams;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    streams.emplace_back(CounterRng{seed, replicate, static_cast<std::uint64_t>(i)});
    counts.push_back(streams.back().poisson(means[i]));
    total += counts.back();
  }

  out.centers.resize(p.dimension, static_cast<Eigen::Index>(total));
  out.radii.resize(static_cast<Eigen::Index>(total));
  out.atom.reserve(total);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    CounterRng& rng = streams[i];
    for (std::uint64_t k = 0; k < counts[i]; ++k, ++col) {
      for (int axis = 0; axis < p.dimension; ++axis)
        out.centers(axis, col) = lo(axis) + span(axis) * rng.uniform();
      out.radii(col) = atoms[i].radius;
      out.atom.push_back(static_cast<int>(i));
    }
  }
  return out;
}

Eigen::VectorXd displacement(const BoxWindow& w, const Eigen::Ref<const Eigen::VectorXd>& a,
                             const Eigen::Ref<const Eigen::VectorXd>& b) {
  Eigen::VectorXd delta = b - a;
  if (w.boundary == Boundary::torus) {
    for (Eigen::Index k = 0; k < delta.size(); ++k) {
      const double L = w.sides(k);
      delta(k) -= L * std::round(delta(k) / L);
    }
  }
  return delta;
}

bool overlap(const BallConfiguration& c, Eigen::Index i, Eigen::Index j) {
  const double reach = c.radii(i) + c.radii(j);
  if (c.window.boundary == Boundary::torus)
    return displacement(c.window, c.centers.col(i), c.centers.col(j)).squaredNorm() < reach * reach;
  return (c.centers.col(i) - c.centers.col(j)).squaredNorm() < reach * reach;
}

void write_csv(std::ostream& out, const BallConfiguration& c) {
  const int d = c.dim() > 0 ? c.dim() : c.window.dim();
  for (int k = 0; k < d; ++k) out << "x_" << (k + 1) << ',';
  out << "radius\n";
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    for (int k = 0; k < d; ++k) out << exact_decimal(c.centers(k, i)) << ',';
    out << exact_decimal(c.radii(i)) << '\n';
  }
}

BallConfiguration read_csv(std::istream& in, const BoxWindow& w) {
  BallConfiguration c;
  c.window = w;
  c.centers.resize(w.dim(), 0);
  std::string line;
  bool header = true;
  std::vector<double> distinct;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    require(static_cast<int>(row.size()) == w.dim() + 1, "CSV row width does not match dimension");
    Point center = Eigen::Map<const Eigen::VectorXd>(row.data(), w.dim());
    const double r = row.back();
    int atom = 0;
    for (; atom < static_cast<int>(distinct.size()); ++atom)
      if (distinct[atom] == r) break;
    if (atom == static_cast<int>(distinct.size())) distinct.push_back(r);
    c.push_back(Ball(center, r), atom);
  }
  return c;
}

}  // namespace cperc
