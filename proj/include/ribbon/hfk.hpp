#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ribbon/grid.hpp"

namespace rib::hfk {

/// Grid size above the configured ceiling (the complex has size! generators).
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal self-check failure: broken gradings, inexact deconvolution,
/// asymmetric homology. Never produced by valid knot input.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kDefaultCeiling = 8;

/// A generator of the grid chain complex: match[c] is the row of the lattice
/// point on column c. The Alexander grading is stored doubled; it is even
/// (integral) exactly when the grid presents a knot.
struct GridState {
  std::vector<uint8_t> match;
  int maslov = 0;
  int alexander2 = 0;

  int alexander() const { return alexander2 / 2; }
  bool operator==(const GridState&) const = default;
};

/// Dimension table of a bigraded homology group.
struct BigradedDims {
  // (maslov, alexander) -> dimension; only positive entries are stored.
  std::map<std::pair<int, int>, long long> entries;

  long long total() const;
  long long dim(int maslov, int alexander) const;
  long long alexander_total(int alexander) const;
  int min_alexander() const;
  int max_alexander() const;
  bool operator==(const BigradedDims&) const = default;
};

struct AlexanderPolynomial {
  std::map<int, long long> coeffs;  // exponent -> coefficient, zeros omitted

  int degree() const;  // max exponent with nonzero coefficient
  long long eval_at_one() const;
  long long coeff(int exp) const;
  bool operator==(const AlexanderPolynomial&) const = default;
};

struct FiberednessReport {
  int genus = 0;
  bool fibered = false;
  bool nearly_fibered = false;
  long long top_dim = 0;
};

/// Precomputed grading and rectangle data for one diagram. All methods are
/// const and safe to call concurrently.
class GridComplex {
 public:
  explicit GridComplex(const grid::GridDiagram& g);

  const grid::GridDiagram& diagram() const { return g_; }
  int size() const { return n_; }

  int maslov(const std::vector<uint8_t>& match) const;
  int alexander2(const std::vector<uint8_t>& match) const;

  /// Appends to `out` the matches of all states appearing in the boundary of
  /// `match` (Z/2 tilde differential: empty rectangles, counted mod 2).
  void boundary(const std::vector<uint8_t>& match, std::vector<std::vector<uint8_t>>& out) const;

  uint64_t rank_of(const std::vector<uint8_t>& match) const;
  std::vector<uint8_t> unrank(uint64_t r) const;
  uint64_t num_states() const { return factorial_[static_cast<size_t>(n_)]; }

 private:
  bool rect_mark_free(int xll, int yll, int xur, int yur, int which) const;

  grid::GridDiagram g_;
  int n_;
  int joo_;  // J(O,O)
  int jxx_;  // J(X,X)
  std::vector<uint64_t> factorial_;
  // rect_free_[(((xll*n + yll)*n + xur)*n + yur)*4 + which]
  std::vector<uint8_t> rect_free_;
};

struct HomologyOptions {
  int ceiling = kDefaultCeiling;
  int workers = 1;
};

/// All size! states in lexicographic match order, with gradings.
std::vector<GridState> enumerate_states(const grid::GridDiagram& g,
                                        const HomologyOptions& opts = {});

/// The Z/2 boundary of one state, sorted lexicographically.
std::vector<GridState> differential(const grid::GridDiagram& g, const GridState& x);

/// Bigraded dimensions of the homology of the tilde complex over Z/2.
/// Requires a knot grid (integral Alexander gradings).
BigradedDims homology_tilde(const grid::GridDiagram& g, const HomologyOptions& opts = {});

/// Hat-flavor dimensions: deconvolves the tilde table by (1 + m^-1 a^-1)^(size-1).
/// The division must be exact; failure signals corrupted gradings.
BigradedDims hat_from_tilde(const BigradedDims& tilde, int grid_size);
BigradedDims hfk_hat(const grid::GridDiagram& g, const HomologyOptions& opts = {});

/// Graded Euler characteristic of a hat table, normalized symmetric with
/// value 1 at t = 1.
AlexanderPolynomial alexander_polynomial(const BigradedDims& hat);

/// genus = top nonzero Alexander grading; fibered iff its total dimension is
/// 1; nearly fibered iff it is 2.
FiberednessReport genus_and_fiberedness(const BigradedDims& hat);

/// Exhaustive check that the boundary map squares to zero; returns the rank
/// of an offending state, or -1 if the check passes.
long long find_d_squared_failure(const grid::GridDiagram& g, const HomologyOptions& opts = {});

}  // namespace rib::hfk
