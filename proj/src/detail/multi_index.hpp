#pragma once

#include <cstddef>
#include <vector>

namespace fracschrod::detail {

// Odometer over a box of extents, last index fastest.
class MultiIndex {
public:
  MultiIndex(std::size_t rank, std::size_t extent) : index_(rank, 0), extents_(rank, extent) {}
  explicit MultiIndex(std::vector<std::size_t> extents)
      : index_(extents.size(), 0), extents_(std::move(extents)) {}

  const std::vector<std::size_t>& operator*() const { return index_; }
  std::size_t operator[](std::size_t k) const { return index_[k]; }

  // Returns false after wrapping past the last index.
  bool next() {
    for (std::size_t k = index_.size(); k-- > 0;) {
      if (++index_[k] < extents_[k]) {
        return true;
      }
      index_[k] = 0;
    }
    return false;
  }

private:
  std::vector<std::size_t> index_;
  std::vector<std::size_t> extents_;
};

inline std::size_t product(const std::vector<std::size_t>& extents) {
  std::size_t p = 1;
  for (auto e : extents) {
    p *= e;
  }
  return p;
}

} // namespace fracschrod::detail
