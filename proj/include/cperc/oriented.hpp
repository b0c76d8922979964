#ifndef CPERC_ORIENTED_HPP
#define CPERC_ORIENTED_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cperc/embedding.hpp"
#include "cperc/geometry.hpp"

namespace cperc {

/// Site (a, n) of the oriented lattice {|a| <= n, a + n even}; edges go to (a -/+ 1, n + 1).
struct Site {
  int a = 0;
  int n = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

/// Edge states and anchors of an oriented lattice of height n_max, stored by
/// level; the site (a, n) has slot (a + n) / 2. The left child of slot i is
/// slot i on the next level, the right child slot i + 1.
struct OrientedLattice {
  int n_max = 0;
  std::vector<std::vector<char>> open_left;   // [n][i], levels 0..n_max-1
  std::vector<std::vector<char>> open_right;
  // Embedded mode only: x(a, n), or nullopt for the virtual site.
  std::vector<std::vector<std::optional<Point>>> anchor;

  explicit OrientedLattice(int n_max);
  static int slot(int a, int n) { return (a + n) / 2; }
};

enum class OrientedMode { bernoulli, embedded };
std::string to_string(OrientedMode m);
OrientedMode parse_oriented_mode(const std::string& s);

struct OrientedResult {
  bool survival = false;         // an open path from the origin reaches level n_max
  int max_level = 0;             // deepest level reached from the origin
  std::vector<Site> leftmost_path;
  // Embedded mode: balls along the leftmost path, radii rho, 1, rho, 1, ..., rho.
  std::vector<Ball> chain;
  std::size_t real_sites = 0;     // embedded: sites with a finite anchor
  std::size_t virtual_edges_opened = 0;
};

/// Leftmost open path from the origin to the deepest reachable level, given
/// the edge states. Returns the path and that level.
std::vector<Site> leftmost_open_path(const OrientedLattice& lattice, int* deepest = nullptr);

/// Bernoulli oriented percolation: each edge open independently with
/// probability p. The uniform behind each edge depends only on (seed,
/// replicate, edge), so runs with the same seed are coupled across p.
OrientedResult simulate_oriented_bernoulli(double p, int n_max, std::uint64_t seed,
                                           std::uint64_t replicate = 0);

/// Oriented percolation built from the two-type Boolean model: real sites open
/// an edge when the one-step event occurs in the corresponding half-cell,
/// virtual sites open each edge with probability p_floor independently.
OrientedResult simulate_oriented_embedded(const EmbeddingGeometry& g, double p_floor, int n_max,
                                          std::uint64_t seed, std::uint64_t replicate = 0);

OrientedResult simulate_oriented(const EmbeddingGeometry& g, double p_floor, int n_max,
                                 std::uint64_t seed, OrientedMode mode,
                                 std::uint64_t replicate = 0);

/// True iff `chain` alternates radii rho, 1, rho, ..., consecutive balls
/// overlap, and all centers are distinct.
bool verify_alternating_chain(const std::vector<Ball>& chain, double rho);

}  // namespace cperc

#endif  // CPERC_ORIENTED_HPP
