#include "ribbon/cover.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <queue>

#include "ribbon/gf2.hpp"
#include "ribbon/parallel.hpp"

namespace rib::cover {

int CoverDiagram::shift_between(int row, int from, int to) const {
  const auto& s = shift[static_cast<size_t>(row)];
  if (from <= to) return s[static_cast<size_t>(to)] - s[static_cast<size_t>(from)];
  // wrap: total monodromy of a full horizontal loop is zero
  return -s[static_cast<size_t>(from)] + s[static_cast<size_t>(to)];
}

int CoverDiagram::incidence(int i, int s, int j, int t) const {
  int want = s + shift[static_cast<size_t>(i)][static_cast<size_t>(j)];
  want %= sheets;
  if (want < 0) want += sheets;
  return want == t ? 1 : 0;
}

std::vector<std::vector<long long>> CoverDiagram::incidence_matrix() const {
  const int d = delta(), n = sheets;
  std::vector<std::vector<long long>> m(static_cast<size_t>(d * n),
                                        std::vector<long long>(static_cast<size_t>(d * n), 0));
  for (int i = 0; i < d; ++i)
    for (int s = 0; s < n; ++s)
      for (int j = 0; j < d; ++j)
        for (int t = 0; t < n; ++t)
          m[static_cast<size_t>(i * n + s)][static_cast<size_t>(j * n + t)] = incidence(i, s, j, t);
  return m;
}

CoverDiagram build_cover(const grid::GridDiagram& g, int n, SheetConvention convention) {
  if (n < 1) throw CoverError("cover degree must be at least 1");
  CoverDiagram d{g, n, convention, {}};
  const int delta = g.size();
  d.shift.assign(static_cast<size_t>(delta), std::vector<int>(static_cast<size_t>(delta) + 1, 0));
  for (int i = 0; i < delta; ++i) {
    auto& row = d.shift[static_cast<size_t>(i)];
    for (int j = 0; j < delta; ++j) {
      int xr = g.x_row(j), orow = g.o_row(j);
      int lo = std::min(xr, orow), hi = std::max(xr, orow);
      int cross = 0;
      if (lo < i && i <= hi) {
        cross = (xr > orow) ? 1 : -1;
        if (convention == SheetConvention::reversed) cross = -cross;
      }
      row[static_cast<size_t>(j) + 1] = row[static_cast<size_t>(j)] + cross;
    }
    if (row[static_cast<size_t>(delta)] != 0)
      throw CoverError("internal: nonzero total monodromy along a horizontal circle");
  }
  return d;
}

namespace {

void accumulate_i128(mpz_class& acc, unsigned __int128 value, bool negative) {
  mpz_class v = static_cast<unsigned long>(value >> 64);
  v <<= 64;
  v += static_cast<unsigned long>(value & ~0ULL);
  if (negative)
    acc -= v;
  else
    acc += v;
}

}  // namespace

mpz_class permanent(const std::vector<std::vector<long long>>& matrix, int workers) {
  const int k = static_cast<int>(matrix.size());
  if (k == 0) return 1;
  if (k > 63) throw CoverError("permanent: matrix side exceeds the subset-sweep limit");
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != k) throw CoverError("permanent: matrix is not square");
    for (long long v : row)
      if (v < 0) throw CoverError("permanent: negative entry");
  }
  // Row-sum products must fit unsigned __int128.
  long double magnitude = 1;
  for (const auto& row : matrix) {
    long double total = 0;
    for (long long v : row) total += static_cast<long double>(v);
    magnitude *= std::max<long double>(total, 1);
    if (magnitude > 1e36L)
      throw CoverError("permanent: entries too large for the 128-bit subset sweep");
  }

  const uint64_t total_subsets = 1ULL << k;
  std::mutex merge_mutex;
  mpz_class sum = 0;

  parallel_chunks(total_subsets - 1, std::max(workers, 1), [&](std::size_t begin, std::size_t end) {
    if (begin == end) return;
    // subsets are enumerated as gray(t) for t in [begin+1, end+1)
    uint64_t first_t = static_cast<uint64_t>(begin) + 1;
    uint64_t gray = first_t ^ (first_t >> 1);
    std::vector<long long> row_sums(static_cast<size_t>(k), 0);
    for (int j = 0; j < k; ++j)
      if (gray & (1ULL << j))
        for (int i = 0; i < k; ++i)
          row_sums[static_cast<size_t>(i)] += matrix[static_cast<size_t>(i)][static_cast<size_t>(j)];

    mpz_class acc = 0;
    for (uint64_t t = first_t; t <= static_cast<uint64_t>(end); ++t) {
      if (t != first_t) {
        uint64_t next_gray = t ^ (t >> 1);
        uint64_t changed = gray ^ next_gray;
        int j = __builtin_ctzll(changed);
        long long sign = (next_gray & changed) ? 1 : -1;
        for (int i = 0; i < k; ++i)
          row_sums[static_cast<size_t>(i)] += sign * matrix[static_cast<size_t>(i)][static_cast<size_t>(j)];
        gray = next_gray;
      }
      unsigned __int128 product = 1;
      bool zero = false;
      for (int i = 0; i < k && !zero; ++i) {
        long long rs = row_sums[static_cast<size_t>(i)];
        if (rs == 0) zero = true;
        product *= static_cast<unsigned __int128>(rs);
      }
      if (zero) continue;
      // Ryser: perm = (-1)^k sum_S (-1)^{|S|} prod_i rowsum_S(i); the term is
      // positive exactly when |S| and k have equal parity.
      bool positive = (__builtin_popcountll(gray) & 1) == (k & 1);
      accumulate_i128(acc, product, !positive);
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    sum += acc;
  });

  return sum;
}

mpq_class dimension_bound(int delta, int n) {
  if (delta < 2) throw CoverError("arc index must be at least 2");
  if (n < 1) throw CoverError("cover degree must be at least 1");
  mpz_class fact = 1;
  for (int i = 2; i <= delta; ++i) fact *= i;
  mpz_class numerator;
  mpz_pow_ui(numerator.get_mpz_t(), fact.get_mpz_t(), static_cast<unsigned long>(n));
  mpz_class denominator = 1;
  denominator <<= (delta - 1);
  mpq_class q(numerator, denominator);
  q.canonicalize();
  return q;
}

MatchingCount count_generators(const CoverDiagram& d, const CoverOptions& opts) {
  MatchingCount count;
  mpz_class fact = 1;
  for (int i = 2; i <= d.delta(); ++i) fact *= i;
  mpz_class bound;
  mpz_pow_ui(bound.get_mpz_t(), fact.get_mpz_t(), static_cast<unsigned long>(d.sheets));
  count.bregman_bound = mpq_class(bound);
  if (d.alpha_count() <= opts.permanent_ceiling)
    count.exact = permanent(d.incidence_matrix(), opts.workers);
  return count;
}

namespace {

// A cover state stores, per alpha circle (i,s) at index i*n+s, the base
// column of its matched intersection point; the beta sheet is forced by the
// shift table.
struct CoverComplex {
  const CoverDiagram& d;
  int delta;
  int n;
  std::vector<std::vector<uint8_t>> states;  // lexicographic

  int beta_id(int i, int s, int j) const {
    int t = s + d.shift[static_cast<size_t>(i)][static_cast<size_t>(j)];
    t %= n;
    if (t < 0) t += n;
    return j * n + t;
  }

  size_t index_of(const std::vector<uint8_t>& state) const {
    auto it = std::lower_bound(states.begin(), states.end(), state);
    return static_cast<size_t>(it - states.begin());
  }
};

void enumerate_cover_states(CoverComplex& cc, long long cap) {
  const int total = cc.delta * cc.n;
  std::vector<uint8_t> choice(static_cast<size_t>(total), 0);
  std::vector<char> used(static_cast<size_t>(total), 0);
  // Backtracking over alpha ids in order; column choices ascending gives
  // lexicographic enumeration.
  int a = 0;
  std::vector<int> next_col(static_cast<size_t>(total) + 1, 0);
  while (a >= 0) {
    if (a == total) {
      cc.states.push_back(choice);
      if (static_cast<long long>(cc.states.size()) > cap)
        throw CoverError("cover complex exceeds the generator ceiling (" + std::to_string(cap) +
                         ")");
      --a;
      if (a >= 0) used[static_cast<size_t>(cc.beta_id(a / cc.n, a % cc.n, choice[static_cast<size_t>(a)]))] = 0;
      continue;
    }
    int i = a / cc.n, s = a % cc.n;
    bool advanced = false;
    for (int j = next_col[static_cast<size_t>(a)]; j < cc.delta; ++j) {
      int b = cc.beta_id(i, s, j);
      if (used[static_cast<size_t>(b)]) continue;
      used[static_cast<size_t>(b)] = 1;
      choice[static_cast<size_t>(a)] = static_cast<uint8_t>(j);
      next_col[static_cast<size_t>(a)] = j + 1;
      next_col[static_cast<size_t>(a) + 1] = 0;
      ++a;
      advanced = true;
      break;
    }
    if (!advanced) {
      next_col[static_cast<size_t>(a)] = 0;
      --a;
      if (a >= 0) used[static_cast<size_t>(cc.beta_id(a / cc.n, a % cc.n, choice[static_cast<size_t>(a)]))] = 0;
    }
  }
}

struct RectSpan {
  int col_start, col_len;
  int row_start, row_len;  // row_start is the bottom edge height
};

// Marking-freeness of the base rectangle, cell spans taken toroidally.
bool base_rect_mark_free(const grid::GridDiagram& g, const RectSpan& r) {
  const int n = g.size();
  auto inside = [&](int start, int len, int v) {
    int diff = v - start;
    diff %= n;
    if (diff < 0) diff += n;
    return diff < len;
  };
  for (int c = 0; c < n; ++c) {
    if (!inside(r.col_start, r.col_len, c)) continue;
    if (inside(r.row_start, r.row_len, g.x_row(c))) return false;
    if (inside(r.row_start, r.row_len, g.o_row(c))) return false;
  }
  return true;
}

}  // namespace

hfk::BigradedDims cover_homology_experimental(const CoverDiagram& d,
                                              const CoverHomologyOptions& opts) {
  CoverComplex cc{d, d.delta(), d.sheets, {}};
  enumerate_cover_states(cc, opts.max_generators);
  const int delta = cc.delta, n = cc.n;
  const size_t count = cc.states.size();
  const int total = delta * n;

  // boundary edge lists, mod 2
  std::vector<std::vector<uint32_t>> boundary(count);
  parallel_chunks(count, opts.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      const auto& state = cc.states[x];
      for (int a1 = 0; a1 < total; ++a1) {
        int i1 = a1 / n, s1 = a1 % n;
        for (int a2 = a1 + 1; a2 < total; ++a2) {
          int i2 = a2 / n, s2 = a2 % n;
          if (i1 == i2) continue;
          int j1 = state[static_cast<size_t>(a1)], j2 = state[static_cast<size_t>(a2)];
          if (j1 == j2) continue;

          // Candidate rectangles with the state's points at the southwest
          // and northeast corners: row span either [i1,i2] or the wrap
          // [i2, i1+delta]; column span follows the corner layout.
          int empty = 0;
          auto try_rect = [&](const RectSpan& span, int sw_alpha_row, int sw_alpha_sheet,
                              int sw_col, int ne_alpha_sheet, int ne_col) {
            // lifted corners must land on the two matched alpha circles
            int strip_sw = sw_alpha_sheet + d.shift[static_cast<size_t>(sw_alpha_row)][static_cast<size_t>(sw_col)];
            int carried = strip_sw + d.shift_between(sw_alpha_row, sw_col, ne_col);
            int other_row = sw_alpha_row == i1 ? i2 : i1;
            int strip_ne = ne_alpha_sheet + d.shift[static_cast<size_t>(other_row)][static_cast<size_t>(ne_col)];
            int diff = (carried - strip_ne) % n;
            if (diff != 0) return;
            if (!base_rect_mark_free(d.base, span)) return;
            // interior lift emptiness
            for (int step = 1; step < span.col_len; ++step) {
              int jj = (span.col_start + step) % delta;
              int strip = strip_sw + d.shift_between(sw_alpha_row, sw_col, jj);
              for (int rstep = 1; rstep < span.row_len; ++rstep) {
                int ii = (span.row_start + rstep) % delta;
                int sheet = (strip - d.shift[static_cast<size_t>(ii)][static_cast<size_t>(jj)]) % n;
                if (sheet < 0) sheet += n;
                if (state[static_cast<size_t>(ii * n + sheet)] == jj) return;
              }
            }
            ++empty;
          };

          if (j1 < j2) {
            try_rect({j1, j2 - j1, i1, i2 - i1}, i1, s1, j1, s2, j2);
            try_rect({j2, delta - (j2 - j1), i2, delta - (i2 - i1)}, i2, s2, j2, s1, j1);
          } else {
            try_rect({j1, delta - (j1 - j2), i1, i2 - i1}, i1, s1, j1, s2, j2);
            try_rect({j2, j1 - j2, i2, delta - (i2 - i1)}, i2, s2, j2, s1, j1);
          }

          if (empty % 2 == 1) {
            std::vector<uint8_t> y = state;
            std::swap(y[static_cast<size_t>(a1)], y[static_cast<size_t>(a2)]);
            size_t yi = cc.index_of(y);
            if (yi >= count || cc.states[yi] != y)
              throw CoverError("internal: boundary state is not a valid matching");
            boundary[x].push_back(static_cast<uint32_t>(yi));
          }
        }
      }
      std::sort(boundary[x].begin(), boundary[x].end());
    }
  });

  // d^2 = 0 self-check; the construction convention is wrong otherwise.
  for (size_t x = 0; x < count; ++x) {
    std::vector<uint32_t> grand;
    for (uint32_t y : boundary[x])
      grand.insert(grand.end(), boundary[y].begin(), boundary[y].end());
    std::sort(grand.begin(), grand.end());
    if (grand.size() % 2 != 0)
      throw CoverError("cover differential does not square to zero");
    for (size_t i = 0; i + 1 < grand.size(); i += 2)
      if (grand[i] != grand[i + 1])
        throw CoverError("cover differential does not square to zero");
  }

  // Relative Maslov layering per connected component of the boundary graph.
  std::vector<int> component(count, -1), level(count, 0);
  int components = 0;
  std::vector<std::vector<uint32_t>> incoming(count);
  for (size_t x = 0; x < count; ++x)
    for (uint32_t y : boundary[x]) incoming[y].push_back(static_cast<uint32_t>(x));
  for (size_t start = 0; start < count; ++start) {
    if (component[start] >= 0) continue;
    int comp = components++;
    std::queue<uint32_t> queue;
    component[start] = comp;
    level[start] = 0;
    queue.push(static_cast<uint32_t>(start));
    while (!queue.empty()) {
      uint32_t x = queue.front();
      queue.pop();
      auto visit = [&](uint32_t other, int lv) {
        if (component[other] < 0) {
          component[other] = comp;
          level[other] = lv;
          queue.push(other);
        } else if (level[other] != lv) {
          throw CoverError("inconsistent relative Maslov layering in the cover complex");
        }
      };
      for (uint32_t y : boundary[x]) visit(y, level[x] - 1);
      for (uint32_t w : incoming[x]) visit(w, level[x] + 1);
    }
  }

  std::vector<int> min_level(static_cast<size_t>(components), 0);
  for (size_t x = 0; x < count; ++x)
    min_level[static_cast<size_t>(component[x])] =
        std::min(min_level[static_cast<size_t>(component[x])], level[x]);

  // Rank per (component, level) block.
  std::map<std::pair<int, int>, std::vector<uint32_t>> blocks;
  for (size_t x = 0; x < count; ++x)
    blocks[{component[x], level[x]}].push_back(static_cast<uint32_t>(x));

  std::map<std::pair<int, int>, long long> rank_out;
  for (const auto& [key, members] : blocks) {
    auto dst = blocks.find({key.first, key.second - 1});
    if (dst == blocks.end()) {
      rank_out[key] = 0;
      continue;
    }
    const auto& targets = dst->second;
    gf2::RankAccumulator acc(targets.size());
    std::vector<uint64_t> row(acc.words());
    for (uint32_t x : members) {
      std::fill(row.begin(), row.end(), 0);
      for (uint32_t y : boundary[x]) {
        auto it = std::lower_bound(targets.begin(), targets.end(), y);
        size_t col = static_cast<size_t>(it - targets.begin());
        row[col / 64] ^= 1ULL << (col % 64);
      }
      acc.add_row(row);
    }
    rank_out[key] = static_cast<long long>(acc.rank());
  }

  hfk::BigradedDims dims;
  for (const auto& [key, members] : blocks) {
    long long rank_in = 0;
    auto above = rank_out.find({key.first, key.second + 1});
    if (above != rank_out.end()) rank_in = above->second;
    long long h = static_cast<long long>(members.size()) - rank_out[key] - rank_in;
    if (h < 0) throw CoverError("internal: negative cover homology dimension");
    if (h == 0) continue;
    int normalized = key.second - min_level[static_cast<size_t>(key.first)];
    dims.entries[{normalized, 0}] += h;
  }
  return dims;
}

}  // namespace rib::cover
