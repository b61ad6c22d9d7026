#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace rib::dyn {

class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPrimitiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square nonnegative integer matrix, e.g. the incidence matrix of a train
/// track map.
class PFMatrix {
 public:
  explicit PFMatrix(std::vector<std::vector<long long>> entries);
  PFMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  int size() const { return static_cast<int>(entries_.size()); }
  long long at(int i, int j) const {
    return entries_[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  const std::vector<std::vector<long long>>& entries() const { return entries_; }

 private:
  std::vector<std::vector<long long>> entries_;
};

/// Matrix file format: first line the size k, then k lines of k nonnegative
/// integers. '#' lines are comments.
PFMatrix parse_matrix(const std::string& text);
PFMatrix load_matrix_file(const std::string& path);

/// True iff some power up to the Wielandt bound (k-1)^2 + 1 is strictly
/// positive.
bool is_primitive(const PFMatrix& m);

struct TracePoint {
  int n = 0;
  mpz_class trace;
  double value = 0;  // trace^(1/n)
  bool power_of_two = false;
};

struct DilatationEstimate {
  double spectral_radius = 0;  // midpoint of the certified interval
  double lower = 0;            // Collatz-Wielandt bounds, outward-rounded
  double upper = 0;
  long iterations = 0;
  std::vector<TracePoint> trace_sequence;
  bool trace_tail_monotone = false;   // |value - rho| nonincreasing on the tail
  bool pow2_tail_monotone = false;    // same along n = 1, 2, 4, ...
  bool trace_upper_bound_ok = false;  // value_n <= k^(1/n) * upper for all n
  double final_trace_gap = 0;
  bool trace_converged = false;
};

/// Power iteration; at every step min_i (Mv)_i / v_i <= rho <= max_i, and the
/// two ratio sequences are monotone. Stops when the certified interval is
/// narrower than tol.
DilatationEstimate spectral_radius(const PFMatrix& m, double tol, long max_iterations = 1000000);

/// Exact integer traces of M^n for n = 1..n_max plus convergence diagnostics
/// of trace^(1/n) against the certified spectral radius. trace_tol judges
/// the final gap; rho_tol is the certified interval width.
DilatationEstimate trace_limit_check(const PFMatrix& m, int n_max, double trace_tol = 1e-6,
                                     double rho_tol = 1e-9);

mpz_class trace_of_power_sequential(const PFMatrix& m, int n);
mpz_class trace_of_power_squaring(const PFMatrix& m, int n);

/// True iff count(n) <= dim(n) - 1 for every n; the lists must cover the
/// same n values.
bool fixed_point_bound_check(const std::vector<std::pair<int, long long>>& fix_counts,
                             const std::vector<std::pair<int, long long>>& hfk_top_dims);

}  // namespace rib::dyn
