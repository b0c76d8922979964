#include <doctest.h>

#include <functional>

#include "cperc/error.hpp"
#include "cperc/oriented.hpp"
#include "cperc/percolation.hpp"
#include "cperc/rng.hpp"

using namespace cperc;

namespace {

// Depth-first search taking left edges first; the first path reaching `depth`
// is the lexicographically smallest, hence the pointwise leftmost one.
std::vector<Site> oracle_leftmost(const OrientedLattice& lat, int depth) {
  std::vector<Site> path{{0, 0}};
  std::function<bool(int, int)> go = [&](int n, int i) {
    if (n == depth) return true;
    for (int dir = 0; dir < 2; ++dir) {
      const bool open = dir == 0 ? lat.open_left[n][i] : lat.open_right[n][i];
      if (!open) continue;
      const int j = i + dir;
      path.push_back({2 * j - (n + 1), n + 1});
      if (go(n + 1, j)) return true;
      path.pop_back();
    }
    return false;
  };
  go(0, 0);
  return path;
}

int oracle_depth(const OrientedLattice& lat) {
  std::vector<char> wet{1};
  int depth = 0;
  for (int n = 0; n < lat.n_max; ++n) {
    std::vector<char> next(n + 2, 0);
    bool any = false;
    for (int i = 0; i <= n; ++i) {
      if (!wet[i]) continue;
      if (lat.open_left[n][i]) next[i] = 1, any = true;
      if (lat.open_right[n][i]) next[i + 1] = 1, any = true;
    }
    if (!any) break;
    wet = next;
    depth = n + 1;
  }
  return depth;
}

}  // namespace

TEST_CASE("mode parsing") {
  CHECK(parse_oriented_mode("bernoulli") == OrientedMode::bernoulli);
  CHECK(parse_oriented_mode("embedded") == OrientedMode::embedded);
  CHECK(to_string(OrientedMode::embedded) == "embedded");
  CHECK_THROWS_AS(parse_oriented_mode("other"), InvalidArgument);
}

TEST_CASE("Bernoulli extremes") {
  const OrientedResult all = simulate_oriented_bernoulli(1.0, 50, 1);
  CHECK(all.survival);
  CHECK(all.max_level == 50);
  REQUIRE(all.leftmost_path.size() == 51);
  for (int n = 0; n <= 50; ++n) CHECK(all.leftmost_path[n] == Site{-n, n});
  const OrientedResult none = simulate_oriented_bernoulli(0.0, 50, 1);
  CHECK_FALSE(none.survival);
  CHECK(none.max_level == 0);
  CHECK(none.leftmost_path.size() == 1);
  CHECK_THROWS_AS(simulate_oriented_bernoulli(1.5, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(simulate_oriented_bernoulli(0.5, 0, 1), InvalidArgument);
}

TEST_CASE("leftmost open path equals the exhaustive oracle") {
  CounterRng rng{61, 0};
  int agree = 0;
  for (int k = 0; k < 500; ++k) {
    const int n_max = 1 + static_cast<int>(rng.uniform() * 12);
    const double p = rng.uniform(0.4, 0.95);
    OrientedLattice lat(n_max);
    for (int n = 0; n < n_max; ++n)
      for (int i = 0; i <= n; ++i) {
        lat.open_left[n][i] = rng.bernoulli(p);
        lat.open_right[n][i] = rng.bernoulli(p);
      }
    int depth = -1;
    const auto path = leftmost_open_path(lat, &depth);
    agree += depth == oracle_depth(lat) && path == oracle_leftmost(lat, depth);
  }
  CHECK(agree == 500);
}

TEST_CASE("Bernoulli runs are coupled across p") {
  for (int r = 0; r < 300; ++r) {
    int prev = -1;
    for (double p : {0.5, 0.6, 0.7, 0.8, 0.9}) {
      const int level = simulate_oriented_bernoulli(p, 100, 62, r).max_level;
      CHECK(level >= prev);
      prev = level;
    }
  }
}

TEST_CASE("embedded mode yields verified alternating chains") {
  const EmbeddingGeometry g(6, 1.5, 2.0);
  int survived = 0;
  for (int r = 0; r < 20; ++r) {
    const OrientedResult res = simulate_oriented_embedded(g, 0.5, 12, 63, r);
    survived += res.survival;
    CHECK(res.chain.size() == 2 * res.leftmost_path.size() - 1);
    CHECK(verify_alternating_chain(res.chain, 1.5));
    CHECK(res.real_sites >= 1);

    // The chain is an alternating path in the sense of alternating_path.
    BallConfiguration c;
    c.window = BoxWindow::cube(6, 1e6, 0.0);
    c.centers.resize(6, 0);
    for (std::size_t k = 1; k < res.chain.size(); ++k) c.push_back(res.chain[k]);
    const AlternatingResult alt = alternating_path(c, res.chain.front());
    for (std::size_t k = 1; k < res.chain.size(); ++k) {
      const int depth = alt.depth[k - 1];
      CHECK(depth >= 1);
      CHECK(depth <= static_cast<int>(k));
      CHECK(depth % 2 == static_cast<int>(k % 2));
    }
  }
  CHECK(survived > 0);
}

TEST_CASE("embedded mode is deterministic") {
  const EmbeddingGeometry g(6, 1.5, 2.0);
  const OrientedResult a = simulate_oriented_embedded(g, 0.3, 8, 64, 5);
  const OrientedResult b = simulate_oriented(g, 0.3, 8, 64, OrientedMode::embedded, 5);
  CHECK(a.leftmost_path == b.leftmost_path);
  REQUIRE(a.chain.size() == b.chain.size());
  for (std::size_t k = 0; k < a.chain.size(); ++k) CHECK(a.chain[k].center == b.chain[k].center);
  CHECK(a.virtual_edges_opened == b.virtual_edges_opened);
}

TEST_CASE("virtual sites follow the p_floor coin") {
  // Every open edge out of a real site anchors its endpoint, so the cluster of
  // the origin only ever contains real sites; the coins of virtual sites fill
  // in the rest of the lattice.
  const EmbeddingGeometry g(6, 1.5, 1.2);
  const int n_max = 10;
  const std::size_t sites = n_max * (n_max + 1) / 2;  // levels 0 .. n_max-1
  for (int r = 0; r < 10; ++r) {
    const OrientedResult closed = simulate_oriented_embedded(g, 0.0, n_max, 65, r);
    const OrientedResult open = simulate_oriented_embedded(g, 1.0, n_max, 65, r);
    CHECK(closed.virtual_edges_opened == 0);
    CHECK(open.virtual_edges_opened % 2 == 0);
    CHECK(open.virtual_edges_opened / 2 + open.real_sites >= sites);
    CHECK(open.virtual_edges_opened / 2 + open.real_sites <= sites + n_max + 1);
    CHECK(open.leftmost_path == closed.leftmost_path);
    CHECK(open.real_sites == closed.real_sites);
  }
}

TEST_CASE("chain verification rejects broken chains") {
  Point a = Point::Zero(3), b = Point::Zero(3), c = Point::Zero(3);
  b(0) = 2.0;
  c(0) = 4.0;
  CHECK(verify_alternating_chain({Ball(a, 1.5), Ball(b, 1.0), Ball(c, 1.5)}, 1.5));
  c(0) = 4.6;
  CHECK_FALSE(verify_alternating_chain({Ball(a, 1.5), Ball(b, 1.0), Ball(c, 1.5)}, 1.5));
  CHECK_FALSE(verify_alternating_chain({Ball(a, 1.0), Ball(b, 1.5)}, 1.5));
  CHECK_FALSE(verify_alternating_chain({Ball(a, 1.5), Ball(b, 1.0), Ball(a, 1.5)}, 1.5));
}
