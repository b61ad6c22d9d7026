#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "ribbon/grid.hpp"
#include "ribbon/hfk.hpp"

namespace rib::cover {

class CoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sheet-shift convention for the branch cuts: crossing the vertical cut of
/// a column in the +x direction shifts by +1 when the X sits above the O
/// (the knot pierces the surface upward there), or by the opposite sign.
enum class SheetConvention { knot_linking, reversed };

/// Combinatorial shadow of the n-fold cyclic branched-cover Heegaard diagram
/// built from a grid: delta*n alpha and beta circles, an incidence matrix
/// with all row and column sums delta, and one basepoint per base marking.
struct CoverDiagram {
  grid::GridDiagram base;
  int sheets = 1;
  SheetConvention convention = SheetConvention::knot_linking;
  // shift[i][j], j in 0..delta: accumulated sheet offset of the row-i circle
  // walking from column 0 to column j; shift[i][delta] == 0.
  std::vector<std::vector<int>> shift;

  int delta() const { return base.size(); }
  int alpha_count() const { return delta() * sheets; }
  int beta_count() const { return delta() * sheets; }

  /// Sheet offset accumulated crossing columns [from, to) at height row,
  /// wrapping when to < from.
  int shift_between(int row, int from, int to) const;

  /// Incidence count between alpha circle (row i, sheet s) and beta circle
  /// (column j, sheet t): 1 iff t == s + shift[i][j] mod n.
  int incidence(int i, int s, int j, int t) const;
  std::vector<std::vector<long long>> incidence_matrix() const;
};

CoverDiagram build_cover(const grid::GridDiagram& g, int n,
                         SheetConvention convention = SheetConvention::knot_linking);

/// Exact generator count (permanent of the incidence matrix) plus the
/// matching upper bound (delta!)^n, exact because the diagram is
/// delta-regular.
struct MatchingCount {
  std::optional<mpz_class> exact;  // engaged when within the permanent ceiling
  mpq_class bregman_bound;
};

struct CoverOptions {
  int permanent_ceiling = 24;  // largest matrix side for the exact permanent
  int workers = 1;
};

MatchingCount count_generators(const CoverDiagram& d, const CoverOptions& opts = {});

/// Permanent of a square nonnegative matrix by Gray-coded inclusion-
/// exclusion, exact integer arithmetic. Sides up to 24 are practical.
mpz_class permanent(const std::vector<std::vector<long long>>& matrix, int workers = 1);

/// (delta!)^n / 2^(delta-1) as an exact rational.
mpq_class dimension_bound(int delta, int n);

struct CoverHomologyOptions {
  long long max_generators = 200000;
  int workers = 1;
};

/// Homology of the cover complex over Z/2 with gradings reported relative
/// (Maslov normalized to 0 at the bottom of each connected component,
/// Alexander unresolved and reported as 0). Hard-fails if the differential
/// does not square to zero.
hfk::BigradedDims cover_homology_experimental(const CoverDiagram& d,
                                              const CoverHomologyOptions& opts = {});

}  // namespace rib::cover
