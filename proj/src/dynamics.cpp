#include "ribbon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ribbon/certified.hpp"

namespace rib::dyn {

PFMatrix::PFMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : PFMatrix(std::vector<std::vector<long long>>(rows.begin(), rows.end())) {}

PFMatrix::PFMatrix(std::vector<std::vector<long long>> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw MatrixError("matrix must be nonempty");
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].size() != entries_.size())
      throw MatrixError("row " + std::to_string(i) + " has " + std::to_string(entries_[i].size()) +
                        " entries, expected " + std::to_string(entries_.size()));
    for (size_t j = 0; j < entries_[i].size(); ++j)
      if (entries_[i][j] < 0)
        throw MatrixError("negative entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
}

PFMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> content;
  while (std::getline(in, line)) {
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    content.push_back(line);
  }
  if (content.empty()) throw MatrixError("empty matrix file");
  int k = 0;
  {
    std::istringstream ls(content[0]);
    std::string extra;
    if (!(ls >> k) || (ls >> extra) || k < 1)
      throw MatrixError("first line must be the matrix size, got '" + content[0] + "'");
  }
  if (static_cast<int>(content.size()) != k + 1)
    throw MatrixError("expected " + std::to_string(k) + " matrix rows, got " +
                      std::to_string(content.size() - 1));
  std::vector<std::vector<long long>> rows;
  for (int i = 1; i <= k; ++i) {
    std::istringstream ls(content[static_cast<size_t>(i)]);
    std::vector<long long> row;
    long long v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw MatrixError("non-integer entry in row " + std::to_string(i - 1));
    if (static_cast<int>(row.size()) != k)
      throw MatrixError("row " + std::to_string(i - 1) + " has " + std::to_string(row.size()) +
                        " entries, expected " + std::to_string(k));
    rows.push_back(std::move(row));
  }
  return PFMatrix(std::move(rows));
}

PFMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixError("cannot open matrix file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

namespace {

using BoolMatrix = std::vector<std::vector<uint64_t>>;  // bit-packed rows

BoolMatrix bool_from(const PFMatrix& m) {
  const int k = m.size();
  const size_t words = (static_cast<size_t>(k) + 63) / 64;
  BoolMatrix b(static_cast<size_t>(k), std::vector<uint64_t>(words, 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (m.at(i, j) > 0) b[static_cast<size_t>(i)][static_cast<size_t>(j) / 64] |= 1ULL << (j % 64);
  return b;
}

BoolMatrix bool_mul(const BoolMatrix& a, const BoolMatrix& b) {
  const size_t k = a.size();
  const size_t words = a[0].size();
  BoolMatrix out(k, std::vector<uint64_t>(words, 0));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      if (a[i][j / 64] & (1ULL << (j % 64)))
        for (size_t w = 0; w < words; ++w) out[i][w] |= b[j][w];
  return out;
}

bool all_positive(const BoolMatrix& m, int k) {
  for (const auto& row : m) {
    int count = 0;
    for (uint64_t w : row) count += __builtin_popcountll(w);
    if (count != k) return false;
  }
  return true;
}

using BigMatrix = std::vector<std::vector<mpz_class>>;

BigMatrix big_from(const PFMatrix& m) {
  const size_t k = static_cast<size_t>(m.size());
  BigMatrix out(k, std::vector<mpz_class>(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      out[i][j] = static_cast<long>(m.at(static_cast<int>(i), static_cast<int>(j)));
  return out;
}

BigMatrix big_mul(const BigMatrix& a, const BigMatrix& b) {
  const size_t k = a.size();
  BigMatrix out(k, std::vector<mpz_class>(k, 0));
  mpz_class tmp;
  for (size_t i = 0; i < k; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < k; ++j) {
        tmp = a[i][l] * b[l][j];
        out[i][j] += tmp;
      }
    }
  return out;
}

mpz_class trace_of(const BigMatrix& m) {
  mpz_class t = 0;
  for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

// trace^(1/n) without overflow: via mpz_get_d_2exp.
double root_of_trace(const mpz_class& trace, int n) {
  if (trace == 0) return 0;
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, trace.get_mpz_t());
  double log_value = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
  return std::exp(log_value / n);
}

}  // namespace

bool is_primitive(const PFMatrix& m) {
  const int k = m.size();
  const long long wielandt = static_cast<long long>(k - 1) * (k - 1) + 1;
  BoolMatrix p = bool_from(m);
  if (all_positive(p, k)) return true;
  long long power = 1;
  while (power < wielandt) {
    p = bool_mul(p, p);
    power *= 2;
    if (all_positive(p, k)) return true;
  }
  return false;
}

DilatationEstimate spectral_radius(const PFMatrix& m, double tol, long max_iterations) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  if (!is_primitive(m))
    throw NotPrimitiveError("matrix is not primitive: no power up to the Wielandt bound is positive");

  const int k = m.size();
  std::vector<double> v(static_cast<size_t>(k), 1.0), w(static_cast<size_t>(k), 0.0);
  DilatationEstimate est;
  double lower = 0, upper = std::numeric_limits<double>::infinity();
  double best_min = 0, best_max = std::numeric_limits<double>::infinity();
  // Accumulated dot-product error: k nonnegative terms plus one division.
  const int slop = k + 4;
  for (long iter = 1; iter <= max_iterations; ++iter) {
    double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0, norm = 0;
    for (int i = 0; i < k; ++i) {
      double sum = 0;
      for (int j = 0; j < k; ++j)
        sum += static_cast<double>(m.at(i, j)) * v[static_cast<size_t>(j)];
      w[static_cast<size_t>(i)] = sum;
      double ratio = sum / v[static_cast<size_t>(i)];
      ratio_min = std::min(ratio_min, ratio);
      ratio_max = std::max(ratio_max, ratio);
      norm = std::max(norm, sum);
    }
    best_min = std::max(best_min, ratio_min);
    best_max = std::min(best_max, ratio_max);
    lower = std::max(lower, cert::bump_down(ratio_min, slop));
    upper = std::min(upper, cert::bump_up(ratio_max, slop));
    est.iterations = iter;
    if (upper - lower < tol) {
      est.lower = lower;
      est.upper = upper;
      est.spectral_radius = best_min + (best_max - best_min) / 2;
      return est;
    }
    for (int i = 0; i < k; ++i) v[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / norm;
  }
  throw ConvergenceError("power iteration did not reach tolerance " + std::to_string(tol) +
                         " in " + std::to_string(max_iterations) +
                         " iterations (near-periodic spectrum?)");
}

mpz_class trace_of_power_sequential(const PFMatrix& m, int n) {
  if (n < 1) throw std::invalid_argument("power must be at least 1");
  BigMatrix base = big_from(m), p = base;
  for (int i = 2; i <= n; ++i) p = big_mul(p, base);
  return trace_of(p);
}

mpz_class trace_of_power_squaring(const PFMatrix& m, int n) {
  if (n < 1) throw std::invalid_argument("power must be at least 1");
  BigMatrix base = big_from(m);
  BigMatrix result;
  bool have = false;
  unsigned rest = static_cast<unsigned>(n);
  while (rest > 0) {
    if (rest & 1) {
      result = have ? big_mul(result, base) : base;
      have = true;
    }
    rest >>= 1;
    if (rest > 0) base = big_mul(base, base);
  }
  return trace_of(result);
}

DilatationEstimate trace_limit_check(const PFMatrix& m, int n_max, double trace_tol,
                                     double rho_tol) {
  if (n_max < 2) throw std::invalid_argument("n_max must be at least 2");
  DilatationEstimate est = spectral_radius(m, rho_tol);

  const int k = m.size();
  BigMatrix base = big_from(m), p = base;
  est.trace_sequence.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) p = big_mul(p, base);
    TracePoint point;
    point.n = n;
    point.trace = trace_of(p);
    point.value = root_of_trace(point.trace, n);
    point.power_of_two = (n & (n - 1)) == 0;
    est.trace_sequence.push_back(std::move(point));
  }

  const double rho = est.spectral_radius;
  auto gap = [&](const TracePoint& pt) { return std::fabs(pt.value - rho); };

  est.final_trace_gap = gap(est.trace_sequence.back());
  est.trace_converged = est.final_trace_gap < trace_tol;

  // tr(M^n) <= k rho^n, so value_n <= k^(1/n) rho always.
  est.trace_upper_bound_ok = true;
  for (const auto& pt : est.trace_sequence) {
    double cap = cert::bump_up(std::pow(k, 1.0 / pt.n) * est.upper, 8);
    if (pt.value > cap) est.trace_upper_bound_ok = false;
  }

  const double slack = 1e-12 + 1e-9 * rho;
  auto monotone_tail = [&](const std::vector<const TracePoint*>& seq, size_t tail_len) {
    if (seq.size() < 2) return true;
    size_t start = seq.size() > tail_len ? seq.size() - tail_len : 0;
    for (size_t i = start; i + 1 < seq.size(); ++i)
      if (gap(*seq[i + 1]) > gap(*seq[i]) + slack) return false;
    return true;
  };

  std::vector<const TracePoint*> all, pow2;
  for (const auto& pt : est.trace_sequence) {
    all.push_back(&pt);
    if (pt.power_of_two) pow2.push_back(&pt);
  }
  est.trace_tail_monotone = monotone_tail(all, std::max<size_t>(4, all.size() / 4));
  est.pow2_tail_monotone = monotone_tail(pow2, std::max<size_t>(3, pow2.size() / 2));
  return est;
}

bool fixed_point_bound_check(const std::vector<std::pair<int, long long>>& fix_counts,
                             const std::vector<std::pair<int, long long>>& hfk_top_dims) {
  auto sorted = [](std::vector<std::pair<int, long long>> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  auto fix = sorted(fix_counts), dims = sorted(hfk_top_dims);
  if (fix.size() != dims.size())
    throw std::invalid_argument("fixed-point and dimension lists have different lengths");
  for (size_t i = 0; i < fix.size(); ++i) {
    if (fix[i].first != dims[i].first)
      throw std::invalid_argument("fixed-point and dimension lists cover different n values");
    if (fix[i].second > dims[i].second - 1) return false;
  }
  return true;
}

}  // namespace rib::dyn
