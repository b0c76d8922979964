#ifndef CPERC_SAMPLING_HPP
#define CPERC_SAMPLING_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "cperc/geometry.hpp"
#include "cperc/measures.hpp"

namespace cperc {

enum class Boundary { padded, torus };

/// Core window [0, L_1] x ... x [0, L_d]. In padded mode the process is sampled
/// on the window dilated by `padding` on every side; in torus mode padding is
/// ignored and distances wrap.
struct BoxWindow {
  Eigen::VectorXd sides;
  double padding = 0.0;
  Boundary boundary = Boundary::padded;

  BoxWindow() = default;
  BoxWindow(Eigen::VectorXd sides, double padding, Boundary boundary = Boundary::padded);

  static BoxWindow cube(int d, double side, double padding,
                        Boundary boundary = Boundary::padded) {
    return BoxWindow(Eigen::VectorXd::Constant(d, side), padding, boundary);
  }

  int dim() const { return static_cast<int>(sides.size()); }
  double effective_padding() const { return boundary == Boundary::torus ? 0.0 : padding; }
  Eigen::VectorXd lower() const {
    return Eigen::VectorXd::Constant(dim(), -effective_padding());
  }
  Eigen::VectorXd upper() const { return sides.array() + effective_padding(); }
  double sampled_volume() const { return (upper() - lower()).prod(); }
};

/// Centers are stored column-wise (d x n); `atom[i]` indexes the driving measure.
struct BallConfiguration {
  BoxWindow window;
  Eigen::MatrixXd centers;
  Eigen::VectorXd radii;
  std::vector<int> atom;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  Eigen::Index size() const { return centers.cols(); }
  int dim() const { return static_cast<int>(centers.rows()); }
  Ball ball(Eigen::Index i) const { return Ball(centers.col(i), radii(i)); }

  /// Appends a ball (used by hand-built configurations and incremental tests).
  void push_back(const Ball& b, int atom_index = 0);
};

/// Largest expected number of points the sampler agrees to draw.
inline constexpr double kMaxExpectedPoints = 1e8;

/// Poisson Boolean model restricted to the (padded) window: for each atom, a
/// Poisson(lambda * m * |window|) number of i.i.d. uniform centers. The stream
/// for atom i is keyed by (seed, replicate, i).
BallConfiguration sample_boolean_model(const ModelParams& p, const BoxWindow& w,
                                       std::uint64_t seed, std::uint64_t replicate);

/// Difference vector b - a, using the minimum image on a torus window.
Eigen::VectorXd displacement(const BoxWindow& w, const Eigen::Ref<const Eigen::VectorXd>& a,
                             const Eigen::Ref<const Eigen::VectorXd>& b);

bool overlap(const BallConfiguration& c, Eigen::Index i, Eigen::Index j);

/// CSV with header x_1,...,x_d,radius; one row per ball.
void write_csv(std::ostream& out, const BallConfiguration& c);
BallConfiguration read_csv(std::istream& in, const BoxWindow& w);

}  // namespace cperc

#endif  // CPERC_SAMPLING_HPP
