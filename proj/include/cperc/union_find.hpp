#ifndef CPERC_UNION_FIND_HPP
#define CPERC_UNION_FIND_HPP

#include <cstdint>
#include <numeric>
#include <vector>

namespace cperc {

// Union by rank with path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
    return true;
  }

  std::size_t size() const { return parent_.size(); }
  std::size_t components() const { return components_; }
  const std::vector<std::size_t>& parents() const { return parent_; }
  const std::vector<std::uint8_t>& ranks() const { return rank_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::size_t components_;
};

}  // namespace cperc

#endif  // CPERC_UNION_FIND_HPP
