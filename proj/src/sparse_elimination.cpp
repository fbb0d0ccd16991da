// Invariant factors of sparse integer matrices.
//
// Unit pivots are eliminated first (shortest row, then shortest column), which
// on boundary-type matrices removes almost everything.  The residual block goes
// through the dense Smith form.  Entries are kept in int64 while that is exact;
// on the first overflow the whole elimination restarts with GMP integers.

#include <algorithm>
#include <cstdint>
#include <queue>

#include "detail.hpp"
#include "finsheaf/zlinalg.hpp"

namespace finsheaf {

namespace {

struct Overflow {};

inline bool is_unit(std::int64_t v) { return v == 1 || v == -1; }
inline bool is_unit(const Integer& v) { return mpz_cmpabs_ui(v.get_mpz_t(), 1) == 0; }
inline bool is_zero(std::int64_t v) { return v == 0; }
inline bool is_zero(const Integer& v) { return sgn(v) == 0; }

// out = a - f * b
inline std::int64_t fms(std::int64_t a, std::int64_t f, std::int64_t b) {
  std::int64_t p, r;
  if (__builtin_mul_overflow(f, b, &p) || __builtin_sub_overflow(a, p, &r)) throw Overflow{};
  return r;
}
inline Integer fms(const Integer& a, const Integer& f, const Integer& b) { return a - f * b; }

inline std::int64_t neg(std::int64_t v) {
  if (v == INT64_MIN) throw Overflow{};
  return -v;
}
inline Integer neg(const Integer& v) { return -v; }

inline Integer to_mpz(std::int64_t v) {
  Integer z;
  mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
  return z;
}
inline Integer to_mpz(const Integer& v) { return v; }

std::int64_t from_mpz(const Integer& v, std::int64_t*) {
  if (!v.fits_slong_p()) throw Overflow{};
  return v.get_si();
}
Integer from_mpz(const Integer& v, Integer*) { return v; }

template <class T>
struct Eliminator {
  using Row = std::vector<std::pair<std::uint32_t, T>>;
  std::vector<Row> rows;
  std::vector<std::vector<std::uint32_t>> col_rows;  // may hold stale row ids
  std::vector<std::uint32_t> col_count;
  std::vector<char> row_alive;
  std::size_t unit_rank = 0;

  explicit Eliminator(const SparseIntMatrix& m)
      : rows(m.rows()), col_rows(m.cols()), col_count(m.cols(), 0), row_alive(m.rows(), 1) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      rows[i].reserve(m.row(i).size());
      for (const auto& e : m.row(i)) {
        rows[i].emplace_back(static_cast<std::uint32_t>(e.col), from_mpz(e.value, static_cast<T*>(nullptr)));
        col_rows[e.col].push_back(static_cast<std::uint32_t>(i));
        ++col_count[e.col];
      }
    }
  }

  const T* find(const Row& r, std::uint32_t c) const {
    auto it = std::lower_bound(r.begin(), r.end(), c, [](const auto& e, std::uint32_t col) { return e.first < col; });
    return (it != r.end() && it->first == c) ? &it->second : nullptr;
  }

  // target -= f * pivot, keeping column counts in sync
  void reduce(std::uint32_t target, const Row& pivot, const T& f) {
    Row& r = rows[target];
    Row out;
    out.reserve(r.size() + pivot.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < pivot.size()) {
      if (j == pivot.size() || (i < r.size() && r[i].first < pivot[j].first)) {
        out.push_back(std::move(r[i++]));
      } else if (i == r.size() || pivot[j].first < r[i].first) {
        T v = fms(T(0), f, pivot[j].second);
        ++col_count[pivot[j].first];
        col_rows[pivot[j].first].push_back(target);
        out.emplace_back(pivot[j].first, std::move(v));
        ++j;
      } else {
        T v = fms(r[i].second, f, pivot[j].second);
        if (is_zero(v)) {
          --col_count[r[i].first];
        } else {
          out.emplace_back(r[i].first, std::move(v));
        }
        ++i;
        ++j;
      }
    }
    r = std::move(out);
  }

  void run() {
    using Item = std::pair<std::size_t, std::uint32_t>;  // (row length, row)
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (std::uint32_t i = 0; i < rows.size(); ++i)
      if (!rows[i].empty()) heap.emplace(rows[i].size(), i);
    while (!heap.empty()) {
      auto [len, p] = heap.top();
      heap.pop();
      if (!row_alive[p] || rows[p].size() != len || rows[p].empty()) continue;
      // unit entry in the sparsest column
      std::int64_t best = -1;
      std::uint32_t best_count = 0;
      for (std::size_t k = 0; k < rows[p].size(); ++k)
        if (is_unit(rows[p][k].second) && (best < 0 || col_count[rows[p][k].first] < best_count)) {
          best = static_cast<std::int64_t>(k);
          best_count = col_count[rows[p][k].first];
        }
      if (best < 0) continue;  // re-queued if this row changes later
      const std::uint32_t c = rows[p][best].first;
      const T u = rows[p][best].second;
      row_alive[p] = 0;
      Row pivot = std::move(rows[p]);
      rows[p].clear();
      for (const auto& e : pivot) --col_count[e.first];
      std::vector<std::uint32_t> targets;
      targets.swap(col_rows[c]);
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      for (std::uint32_t t : targets) {
        if (t == p || !row_alive[t]) continue;
        const T* a = find(rows[t], c);
        if (!a) continue;
        T f = (u == T(1)) ? *a : neg(*a);  // a / u
        reduce(t, pivot, f);
        heap.emplace(rows[t].size(), t);
      }
      ++unit_rank;
    }
  }

  std::vector<Integer> residual_factors() const {
    std::vector<std::uint32_t> live_rows;
    std::vector<std::uint32_t> col_index(col_count.size(), UINT32_MAX);
    std::uint32_t ncols = 0;
    for (std::uint32_t i = 0; i < rows.size(); ++i) {
      if (!row_alive[i] || rows[i].empty()) continue;
      live_rows.push_back(i);
      for (const auto& e : rows[i])
        if (col_index[e.first] == UINT32_MAX) col_index[e.first] = ncols++;
    }
    std::vector<Integer> out(unit_rank, Integer(1));
    if (live_rows.empty()) return out;
    IntMatrix dense(live_rows.size(), ncols);
    for (std::size_t i = 0; i < live_rows.size(); ++i)
      for (const auto& e : rows[live_rows[i]]) dense(i, col_index[e.first]) = to_mpz(e.second);
    for (Integer& d : dense_invariant_factors(std::move(dense))) out.push_back(std::move(d));
    return out;
  }
};

}  // namespace

std::vector<Integer> invariant_factors(const SparseIntMatrix& m) {
  try {
    Eliminator<std::int64_t> e(m);
    e.run();
    return e.residual_factors();
  } catch (const Overflow&) {
    Eliminator<Integer> e(m);
    e.run();
    return e.residual_factors();
  }
}

}  // namespace finsheaf
