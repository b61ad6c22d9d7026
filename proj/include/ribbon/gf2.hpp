#pragma once

#include <cstdint>
#include <vector>

namespace rib::gf2 {

/// Incremental GF(2) rank: feed bit-packed rows, keeps a reduced basis.
class RankAccumulator {
 public:
  explicit RankAccumulator(std::size_t columns)
      : columns_(columns), words_((columns + 63) / 64) {}

  std::size_t words() const { return words_; }
  std::size_t rank() const { return basis_.size(); }

  /// Reduces `row` in place against the basis; absorbs it when independent.
  /// Returns true if the rank grew.
  bool add_row(std::vector<uint64_t>& row) {
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      std::size_t p = pivot_[b];
      if (row[p / 64] & (1ULL << (p % 64)))
        for (std::size_t w = 0; w < words_; ++w) row[w] ^= basis_[b][w];
    }
    std::size_t lead = columns_;
    for (std::size_t w = 0; w < words_ && lead == columns_; ++w)
      if (row[w]) lead = w * 64 + static_cast<std::size_t>(__builtin_ctzll(row[w]));
    if (lead == columns_) return false;
    basis_.push_back(row);
    pivot_.push_back(lead);
    return true;
  }

 private:
  std::size_t columns_;
  std::size_t words_;
  std::vector<std::vector<uint64_t>> basis_;
  std::vector<std::size_t> pivot_;
};

}  // namespace rib::gf2
