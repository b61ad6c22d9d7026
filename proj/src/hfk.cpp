#include "ribbon/hfk.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <map>
#include <mutex>

#include "ribbon/gf2.hpp"
#include "ribbon/parallel.hpp"

namespace rib::hfk {

long long BigradedDims::total() const {
  long long t = 0;
  for (const auto& [key, d] : entries) t += d;
  return t;
}

long long BigradedDims::dim(int maslov, int alexander) const {
  auto it = entries.find({maslov, alexander});
  return it == entries.end() ? 0 : it->second;
}

long long BigradedDims::alexander_total(int alexander) const {
  long long t = 0;
  for (const auto& [key, d] : entries)
    if (key.second == alexander) t += d;
  return t;
}

int BigradedDims::min_alexander() const {
  int a = 0;
  bool first = true;
  for (const auto& [key, d] : entries)
    if (first || key.second < a) a = key.second, first = false;
  return a;
}

int BigradedDims::max_alexander() const {
  int a = 0;
  bool first = true;
  for (const auto& [key, d] : entries)
    if (first || key.second > a) a = key.second, first = false;
  return a;
}

int AlexanderPolynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : coeffs)
    if (c != 0 && e > d) d = e;
  return d;
}

long long AlexanderPolynomial::eval_at_one() const {
  long long s = 0;
  for (const auto& [e, c] : coeffs) s += c;
  return s;
}

long long AlexanderPolynomial::coeff(int exp) const {
  auto it = coeffs.find(exp);
  return it == coeffs.end() ? 0 : it->second;
}

GridComplex::GridComplex(const grid::GridDiagram& g) : g_(g), n_(g.size()) {
  factorial_.assign(static_cast<size_t>(n_) + 1, 1);
  for (int i = 1; i <= n_; ++i)
    factorial_[static_cast<size_t>(i)] = factorial_[static_cast<size_t>(i - 1)] * static_cast<uint64_t>(i);

  // J(P,P) = I(P,P) for a set of cell-centered markings: count strict
  // southwest pairs.
  auto self_pairs = [&](const std::vector<int>& rows) {
    int count = 0;
    for (int c1 = 0; c1 < n_; ++c1)
      for (int c2 = c1 + 1; c2 < n_; ++c2)
        if (rows[static_cast<size_t>(c1)] < rows[static_cast<size_t>(c2)]) ++count;
    return count;
  };
  joo_ = self_pairs(g.os());
  jxx_ = self_pairs(g.xs());

  const int n = n_;
  rect_free_.assign(static_cast<size_t>(n) * n * n * n * 4, 0);
  for (int xll = 0; xll < n; ++xll)
    for (int xur = xll + 1; xur < n; ++xur)
      for (int yll = 0; yll < n; ++yll)
        for (int yur = yll + 1; yur < n; ++yur)
          for (int which = 0; which < 4; ++which) {
            size_t idx = ((((static_cast<size_t>(xll) * n + yll) * n + xur) * n + yur) * 4) +
                         static_cast<size_t>(which);
            rect_free_[idx] = rect_mark_free(xll, yll, xur, yur, which) ? 1 : 0;
          }
}

// The four rectangles on the torus with corners (xll,yll),(xur,yur):
//  0 = inner, 1 = complement in both directions, 2 = same columns with
//  complementary rows, 3 = complementary columns with the same rows.
bool GridComplex::rect_mark_free(int xll, int yll, int xur, int yur, int which) const {
  const auto& xs = g_.xs();
  const auto& os = g_.os();
  auto in_rows = [&](int r) { return r >= yll && r < yur; };
  switch (which) {
    case 0:
      for (int c = xll; c < xur; ++c)
        if (in_rows(xs[static_cast<size_t>(c)]) || in_rows(os[static_cast<size_t>(c)])) return false;
      return true;
    case 1:
      for (int c = 0; c < n_; ++c) {
        if (c >= xll && c < xur) continue;
        if (!in_rows(xs[static_cast<size_t>(c)]) || !in_rows(os[static_cast<size_t>(c)])) return false;
      }
      return true;
    case 2:
      for (int c = xll; c < xur; ++c)
        if (!in_rows(xs[static_cast<size_t>(c)]) || !in_rows(os[static_cast<size_t>(c)])) return false;
      return true;
    case 3:
      for (int c = 0; c < n_; ++c) {
        if (c >= xll && c < xur) continue;
        if (in_rows(xs[static_cast<size_t>(c)]) || in_rows(os[static_cast<size_t>(c)])) return false;
      }
      return true;
    default:
      return false;
  }
}

namespace {

// Markings live at cell centers (c+1/2, r+1/2); states at lattice points.
// State point southwest of marking needs only <=; marking southwest of state
// needs strict <.
int pairs_state_state(const std::vector<uint8_t>& match) {
  int count = 0;
  const int n = static_cast<int>(match.size());
  for (int c1 = 0; c1 < n; ++c1)
    for (int c2 = c1 + 1; c2 < n; ++c2)
      if (match[static_cast<size_t>(c1)] < match[static_cast<size_t>(c2)]) ++count;
  return count;
}

int pairs_state_marks(const std::vector<uint8_t>& match, const std::vector<int>& marks) {
  // I(x, P) + I(P, x)
  int count = 0;
  const int n = static_cast<int>(match.size());
  for (int c = 0; c < n; ++c) {
    int r = match[static_cast<size_t>(c)];
    for (int mc = 0; mc < n; ++mc) {
      int mr = marks[static_cast<size_t>(mc)];
      if (c <= mc && r <= mr) ++count;  // state SW of marking
      if (mc < c && mr < r) ++count;    // marking SW of state
    }
  }
  return count;
}

}  // namespace

int GridComplex::maslov(const std::vector<uint8_t>& match) const {
  return pairs_state_state(match) - pairs_state_marks(match, g_.os()) + joo_ + 1;
}

int GridComplex::alexander2(const std::vector<uint8_t>& match) const {
  // 2A = (M_O - M_X) - (n - 1)
  int mo_part = -pairs_state_marks(match, g_.os()) + joo_;
  int mx_part = -pairs_state_marks(match, g_.xs()) + jxx_;
  return mo_part - mx_part - (n_ - 1);
}

void GridComplex::boundary(const std::vector<uint8_t>& match,
                           std::vector<std::vector<uint8_t>>& out) const {
  const int n = n_;
  auto table = [&](int xll, int yll, int xur, int yur, int which) -> bool {
    size_t idx = ((((static_cast<size_t>(xll) * n + yll) * n + xur) * n + yur) * 4) +
                 static_cast<size_t>(which);
    return rect_free_[idx] != 0;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int ri = match[static_cast<size_t>(i)];
      int rj = match[static_cast<size_t>(j)];
      bool first = false, second = false;
      if (ri < rj) {
        first = table(i, ri, j, rj, 0);
        for (int k = i + 1; k < j && first; ++k) {
          int rk = match[static_cast<size_t>(k)];
          if (ri < rk && rk < rj) first = false;
        }
        second = table(i, ri, j, rj, 1);
        for (int k = 0; k < i && second; ++k) {
          int rk = match[static_cast<size_t>(k)];
          if (rk < ri || rk > rj) second = false;
        }
        for (int k = j + 1; k < n && second; ++k) {
          int rk = match[static_cast<size_t>(k)];
          if (rk < ri || rk > rj) second = false;
        }
      } else {
        first = table(i, rj, j, ri, 2);
        for (int k = i + 1; k < j && first; ++k) {
          int rk = match[static_cast<size_t>(k)];
          if (rk < rj || rk > ri) first = false;
        }
        second = table(i, rj, j, ri, 3);
        for (int k = 0; k < i && second; ++k) {
          int rk = match[static_cast<size_t>(k)];
          if (rk > rj && rk < ri) second = false;
        }
        for (int k = j + 1; k < n && second; ++k) {
          int rk = match[static_cast<size_t>(k)];
          if (rk > rj && rk < ri) second = false;
        }
      }
      if (first != second) {  // exactly one empty rectangle survives mod 2
        auto& y = out.emplace_back(match);
        std::swap(y[static_cast<size_t>(i)], y[static_cast<size_t>(j)]);
      }
    }
  }
}

uint64_t GridComplex::rank_of(const std::vector<uint8_t>& match) const {
  uint64_t rank = 0;
  const int n = n_;
  for (int i = 0; i < n; ++i) {
    int smaller = match[static_cast<size_t>(i)];
    for (int j = 0; j < i; ++j)
      if (match[static_cast<size_t>(j)] < match[static_cast<size_t>(i)]) --smaller;
    rank += static_cast<uint64_t>(smaller) * factorial_[static_cast<size_t>(n - i - 1)];
  }
  return rank;
}

std::vector<uint8_t> GridComplex::unrank(uint64_t r) const {
  const int n = n_;
  std::vector<uint8_t> avail(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) avail[static_cast<size_t>(i)] = static_cast<uint8_t>(i);
  std::vector<uint8_t> match(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    uint64_t f = factorial_[static_cast<size_t>(n - i - 1)];
    uint64_t q = r / f;
    r %= f;
    match[static_cast<size_t>(i)] = avail[static_cast<size_t>(q)];
    avail.erase(avail.begin() + static_cast<long>(q));
  }
  return match;
}

namespace {

void check_ceiling(const grid::GridDiagram& g, const HomologyOptions& opts) {
  if (g.size() > opts.ceiling) {
    throw SizeError("grid size " + std::to_string(g.size()) + " exceeds ceiling " +
                    std::to_string(opts.ceiling) + " (" + std::to_string(g.size()) +
                    "! generators); raise the ceiling to proceed");
  }
}

struct Block {
  int maslov = 0;
  int alexander2 = 0;
  std::vector<uint32_t> ranks;  // ascending
};

// Shared state-grading pass: fills per-state gradings in rank order.
void compute_gradings(const GridComplex& cx, const HomologyOptions& opts,
                      std::vector<int16_t>& mas, std::vector<int16_t>& alex2) {
  const uint64_t total = cx.num_states();
  mas.resize(total);
  alex2.resize(total);
  parallel_chunks(total, opts.workers, [&](std::size_t begin, std::size_t end) {
    if (begin == end) return;
    std::vector<uint8_t> match = cx.unrank(begin);
    for (std::size_t r = begin; r < end; ++r) {
      mas[r] = static_cast<int16_t>(cx.maslov(match));
      alex2[r] = static_cast<int16_t>(cx.alexander2(match));
      std::next_permutation(match.begin(), match.end());
    }
  });
}

std::vector<Block> collect_blocks(const std::vector<int16_t>& mas,
                                  const std::vector<int16_t>& alex2) {
  std::map<std::pair<int, int>, uint32_t> index;  // (a2, m) -> block id
  std::vector<Block> blocks;
  for (std::size_t r = 0; r < mas.size(); ++r) {
    auto key = std::make_pair(static_cast<int>(alex2[r]), static_cast<int>(mas[r]));
    auto [it, inserted] = index.try_emplace(key, static_cast<uint32_t>(blocks.size()));
    if (inserted) blocks.push_back({key.second, key.first, {}});
    blocks[it->second].ranks.push_back(static_cast<uint32_t>(r));
  }
  return blocks;
}

// Rank over GF(2) of the boundary matrix out of one block, with bit-packed
// rows. Target columns are positions in the (maslov-1, alexander2) block.
uint64_t block_rank(const GridComplex& cx, const Block& src, const Block* dst) {
  if (dst == nullptr || dst->ranks.empty() || src.ranks.empty()) return 0;
  gf2::RankAccumulator acc(dst->ranks.size());
  std::vector<uint64_t> row(acc.words());
  std::vector<std::vector<uint8_t>> targets;
  for (uint32_t src_rank : src.ranks) {
    std::fill(row.begin(), row.end(), 0);
    targets.clear();
    std::vector<uint8_t> match = cx.unrank(src_rank);
    cx.boundary(match, targets);
    for (const auto& y : targets) {
      uint64_t yr = cx.rank_of(y);
      auto it = std::lower_bound(dst->ranks.begin(), dst->ranks.end(), static_cast<uint32_t>(yr));
      // Every boundary state has gradings (maslov-1, alexander2), so it is in dst.
      std::size_t col = static_cast<std::size_t>(it - dst->ranks.begin());
      row[col / 64] ^= (1ULL << (col % 64));
    }
    acc.add_row(row);
  }
  return acc.rank();
}

}  // namespace

std::vector<GridState> enumerate_states(const grid::GridDiagram& g, const HomologyOptions& opts) {
  check_ceiling(g, opts);
  GridComplex cx(g);
  const uint64_t total = cx.num_states();
  std::vector<GridState> states(total);
  parallel_chunks(total, opts.workers, [&](std::size_t begin, std::size_t end) {
    if (begin == end) return;
    std::vector<uint8_t> match = cx.unrank(begin);
    for (std::size_t r = begin; r < end; ++r) {
      states[r].match = match;
      states[r].maslov = cx.maslov(match);
      states[r].alexander2 = cx.alexander2(match);
      std::next_permutation(match.begin(), match.end());
    }
  });
  return states;
}

std::vector<GridState> differential(const grid::GridDiagram& g, const GridState& x) {
  GridComplex cx(g);
  std::vector<std::vector<uint8_t>> targets;
  cx.boundary(x.match, targets);
  std::sort(targets.begin(), targets.end());
  std::vector<GridState> result;
  result.reserve(targets.size());
  for (auto& y : targets) {
    GridState s;
    s.maslov = cx.maslov(y);
    s.alexander2 = cx.alexander2(y);
    s.match = std::move(y);
    result.push_back(std::move(s));
  }
  return result;
}

BigradedDims homology_tilde(const grid::GridDiagram& g, const HomologyOptions& opts) {
  check_ceiling(g, opts);
  if (!g.is_knot()) {
    throw ConsistencyError("grid presents a link with " +
                           std::to_string(g.component_count()) +
                           " components; homology tables require a knot");
  }
  GridComplex cx(g);
  std::vector<int16_t> mas, alex2;
  compute_gradings(cx, opts, mas, alex2);
  std::vector<Block> blocks = collect_blocks(mas, alex2);

  // Locate the block one Maslov grading down from each block.
  std::map<std::pair<int, int>, std::size_t> by_key;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    by_key[{blocks[b].alexander2, blocks[b].maslov}] = b;

  std::vector<uint64_t> rank_out(blocks.size(), 0);
  parallel_chunks(blocks.size(), opts.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      auto it = by_key.find({blocks[b].alexander2, blocks[b].maslov - 1});
      const Block* dst = it == by_key.end() ? nullptr : &blocks[it->second];
      rank_out[b] = block_rank(cx, blocks[b], dst);
    }
  });

  BigradedDims dims;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    uint64_t rank_in = 0;
    auto above = by_key.find({blocks[b].alexander2, blocks[b].maslov + 1});
    if (above != by_key.end()) rank_in = rank_out[above->second];
    long long h = static_cast<long long>(blocks[b].ranks.size()) -
                  static_cast<long long>(rank_out[b]) - static_cast<long long>(rank_in);
    if (h < 0) throw ConsistencyError("negative homology dimension: boundary ranks inconsistent");
    if (h == 0) continue;
    if (blocks[b].alexander2 % 2 != 0)
      throw ConsistencyError("half-integral Alexander grading on a knot grid");
    dims.entries[{blocks[b].maslov, blocks[b].alexander2 / 2}] = h;
  }
  return dims;
}

BigradedDims hat_from_tilde(const BigradedDims& tilde, int grid_size) {
  const int k = grid_size - 1;
  std::vector<long long> binom(static_cast<size_t>(k) + 1, 1);
  for (int i = 1; i <= k; ++i)
    binom[static_cast<size_t>(i)] = binom[static_cast<size_t>(i - 1)] * (k - i + 1) / i;

  // The kernel (1 + m^-1 a^-1)^k spreads along diagonals d = maslov -
  // alexander, so deconvolve each diagonal independently from the top down.
  std::map<int, std::map<int, long long>> diagonals;  // d -> alexander -> dim
  for (const auto& [key, dim] : tilde.entries)
    diagonals[key.first - key.second][key.second] += dim;

  BigradedDims hat;
  for (auto& [d, column] : diagonals) {
    std::map<int, long long> solved;
    for (auto it = column.rbegin(); it != column.rend(); ++it) {
      int a = it->first;
      long long value = it->second;
      for (const auto& [a_hi, h] : solved) {
        int i = a_hi - a;
        if (i >= 1 && i <= k) value -= h * binom[static_cast<size_t>(i)];
      }
      if (value < 0)
        throw ConsistencyError("inexact hat deconvolution (corrupted gradings) at maslov " +
                               std::to_string(d + a) + " alexander " + std::to_string(a));
      if (value > 0) solved[a] = value;
    }
    for (const auto& [a, h] : solved) hat.entries[{d + a, a}] = h;
  }

  long long expect = hat.total();
  for (int i = 0; i < k; ++i) expect *= 2;
  if (expect != tilde.total())
    throw ConsistencyError("tilde total " + std::to_string(tilde.total()) +
                           " is not hat total times 2^" + std::to_string(k));
  return hat;
}

BigradedDims hfk_hat(const grid::GridDiagram& g, const HomologyOptions& opts) {
  return hat_from_tilde(homology_tilde(g, opts), g.size());
}

AlexanderPolynomial alexander_polynomial(const BigradedDims& hat) {
  AlexanderPolynomial poly;
  for (const auto& [key, dim] : hat.entries) {
    long long sign = (key.first % 2 == 0) ? 1 : -1;
    poly.coeffs[key.second] += sign * dim;
  }
  for (auto it = poly.coeffs.begin(); it != poly.coeffs.end();) {
    if (it->second == 0)
      it = poly.coeffs.erase(it);
    else
      ++it;
  }
  for (const auto& [e, c] : poly.coeffs) {
    if (poly.coeff(-e) != c)
      throw ConsistencyError("Alexander polynomial not symmetric at exponent " + std::to_string(e));
  }
  long long at_one = poly.eval_at_one();
  if (at_one != 1 && at_one != -1)
    throw ConsistencyError("Alexander polynomial evaluates to " + std::to_string(at_one) +
                           " at t=1 (corrupted homology)");
  if (at_one == -1)
    for (auto& [e, c] : poly.coeffs) c = -c;
  return poly;
}

FiberednessReport genus_and_fiberedness(const BigradedDims& hat) {
  if (hat.entries.empty()) throw ConsistencyError("empty homology table");
  FiberednessReport report;
  report.genus = hat.max_alexander();
  report.top_dim = hat.alexander_total(report.genus);
  report.fibered = report.top_dim == 1;
  report.nearly_fibered = report.top_dim == 2;
  return report;
}

long long find_d_squared_failure(const grid::GridDiagram& g, const HomologyOptions& opts) {
  check_ceiling(g, opts);
  GridComplex cx(g);
  const uint64_t total = cx.num_states();
  std::atomic<long long> failure{-1};
  parallel_chunks(total, opts.workers, [&](std::size_t begin, std::size_t end) {
    if (begin == end) return;
    std::vector<uint8_t> match = cx.unrank(begin);
    std::vector<std::vector<uint8_t>> first, second;
    std::vector<uint64_t> grand;
    for (std::size_t r = begin; r < end; ++r) {
      if (failure.load(std::memory_order_relaxed) >= 0) return;
      first.clear();
      cx.boundary(match, first);
      grand.clear();
      for (const auto& y : first) {
        second.clear();
        cx.boundary(y, second);
        for (const auto& z : second) grand.push_back(cx.rank_of(z));
      }
      std::sort(grand.begin(), grand.end());
      bool ok = grand.size() % 2 == 0;
      for (std::size_t i = 0; ok && i + 1 < grand.size(); i += 2)
        if (grand[i] != grand[i + 1]) ok = false;
      if (!ok) {
        long long expected = -1;
        failure.compare_exchange_strong(expected, static_cast<long long>(r));
        return;
      }
      std::next_permutation(match.begin(), match.end());
    }
  });
  return failure.load();
}

}  // namespace rib::hfk
