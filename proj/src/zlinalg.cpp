#include "finsheaf/zlinalg.hpp"

#include "detail.hpp"

#include <algorithm>
#include <sstream>

namespace finsheaf {

// *** IntMatrix

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw PreconditionError("ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw PreconditionError("matrix row has wrong length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return sgn(v) == 0; });
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && sgn((*this)(i, j)) != 0) return false;
  return true;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw PreconditionError("matrix product dimension mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

IntMatrix IntMatrix::operator-() const {
  IntMatrix out(*this);
  for (auto& v : out.data_) v = -v;
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw PreconditionError("matrix sum dimension mismatch");
  IntMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

IntMatrix IntMatrix::kron(const IntMatrix& rhs) const {
  IntMatrix out(rows_ * rhs.rows_, cols_ * rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const Integer& a = (*this)(i, j);
      if (sgn(a) == 0) continue;
      for (std::size_t k = 0; k < rhs.rows_; ++k)
        for (std::size_t l = 0; l < rhs.cols_; ++l) out(i * rhs.rows_ + k, j * rhs.cols_ + l) = a * rhs(k, l);
    }
  return out;
}

std::vector<std::vector<Integer>> IntMatrix::to_rows() const {
  std::vector<std::vector<Integer>> out(rows_, std::vector<Integer>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t r = k + 1;
      while (r < n && sgn(a(r, k)) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = v;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// *** SparseIntMatrix

SparseIntMatrix SparseIntMatrix::from_dense(const IntMatrix& m) {
  SparseIntMatrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0) s.row_entries_[i].push_back({j, m(i, j)});
  return s;
}

std::size_t SparseIntMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : row_entries_) n += r.size();
  return n;
}

void SparseIntMatrix::add(std::size_t r, std::size_t c, const Integer& value) {
  if (r >= rows_ || c >= cols_) throw PreconditionError("sparse entry out of range");
  if (sgn(value) == 0) return;
  auto& row = row_entries_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == c) {
    it->value += value;
    if (sgn(it->value) == 0) row.erase(it);
  } else {
    row.insert(it, Entry{c, value});
  }
}

IntMatrix SparseIntMatrix::to_dense() const {
  IntMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& e : row_entries_[i]) m(i, e.col) = e.value;
  return m;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  SparseIntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& e : row_entries_[i]) t.row_entries_[e.col].push_back({i, e.value});
  return t;
}

SparseIntMatrix SparseIntMatrix::operator*(const SparseIntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw PreconditionError("sparse product dimension mismatch");
  SparseIntMatrix out(rows_, rhs.cols_);
  std::vector<Integer> acc(rhs.cols_);
  std::vector<std::size_t> touched;
  std::vector<char> mark(rhs.cols_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    touched.clear();
    for (const auto& e : row_entries_[i])
      for (const auto& f : rhs.row_entries_[e.col]) {
        if (!mark[f.col]) {
          mark[f.col] = 1;
          touched.push_back(f.col);
          acc[f.col] = 0;
        }
        acc[f.col] += e.value * f.value;
      }
    std::sort(touched.begin(), touched.end());
    for (std::size_t c : touched) {
      mark[c] = 0;
      if (sgn(acc[c]) != 0) out.row_entries_[i].push_back({c, acc[c]});
    }
  }
  return out;
}

SparseIntMatrix SparseIntMatrix::identity(std::size_t n) {
  SparseIntMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) s.row_entries_[i].push_back({i, Integer(1)});
  return s;
}

SparseIntMatrix SparseIntMatrix::from_rows(std::size_t rows, std::size_t cols, std::vector<std::vector<Entry>> entries) {
  if (entries.size() != rows) throw PreconditionError("sparse row count mismatch");
  SparseIntMatrix s(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    auto& in = entries[i];
    std::sort(in.begin(), in.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    auto& out = s.row_entries_[i];
    for (auto& e : in) {
      if (e.col >= cols) throw PreconditionError("sparse entry out of range");
      if (!out.empty() && out.back().col == e.col) {
        out.back().value += e.value;
      } else {
        if (!out.empty() && sgn(out.back().value) == 0) out.pop_back();
        out.push_back(std::move(e));
      }
    }
    if (!out.empty() && sgn(out.back().value) == 0) out.pop_back();
  }
  return s;
}

Integer SparseIntMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = row_entries_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t col) { return e.col < col; });
  return (it != row.end() && it->col == c) ? it->value : Integer(0);
}

SparseIntMatrix SparseIntMatrix::operator+(const SparseIntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw PreconditionError("sparse sum dimension mismatch");
  SparseBuilder b(rows_, cols_);
  b.add_block(0, 0, *this);
  b.add_block(0, 0, rhs);
  return b.build();
}

SparseIntMatrix SparseIntMatrix::scaled(const Integer& c) const {
  SparseIntMatrix out(rows_, cols_);
  if (sgn(c) == 0) return out;
  out.row_entries_ = row_entries_;
  for (auto& r : out.row_entries_)
    for (auto& e : r) e.value *= c;
  return out;
}

SparseIntMatrix SparseIntMatrix::kron(const SparseIntMatrix& rhs) const {
  SparseIntMatrix out(rows_ * rhs.rows_, cols_ * rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < rhs.rows_; ++k) {
      auto& row = out.row_entries_[i * rhs.rows_ + k];
      for (const auto& a : row_entries_[i])
        for (const auto& b : rhs.row_entries_[k]) row.push_back({a.col * rhs.cols_ + b.col, a.value * b.value});
    }
  return out;
}

std::vector<Integer> SparseIntMatrix::apply(const std::vector<Integer>& v) const {
  if (v.size() != cols_) throw PreconditionError("vector length mismatch");
  std::vector<Integer> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& e : row_entries_[i]) out[i] += e.value * v[e.col];
  return out;
}

bool SparseIntMatrix::operator==(const SparseIntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto& a = row_entries_[i];
    const auto& b = rhs.row_entries_[i];
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k].col != b[k].col || a[k].value != b[k].value) return false;
  }
  return true;
}

void SparseBuilder::add(std::size_t r, std::size_t c, const Integer& v) {
  if (r >= rows_ || c >= cols_) throw PreconditionError("sparse entry out of range");
  if (sgn(v) != 0) entries_[r].push_back({c, v});
}

void SparseBuilder::add_block(std::size_t r0, std::size_t c0, const SparseIntMatrix& m, const Integer& scale) {
  if (sgn(scale) == 0) return;
  if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_) throw PreconditionError("block out of range");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& e : m.row(i)) entries_[r0 + i].push_back({c0 + e.col, e.value * scale});
}

SparseIntMatrix SparseBuilder::build() { return SparseIntMatrix::from_rows(rows_, cols_, std::move(entries_)); }

bool SparseIntMatrix::is_zero() const {
  return std::all_of(row_entries_.begin(), row_entries_.end(), [](const auto& r) { return r.empty(); });
}

// *** Smith normal form

namespace {

struct SnfWork {
  IntMatrix a;
  bool track;
  IntMatrix U, Uinv, V, Vinv;

  SnfWork(const IntMatrix& m, bool t) : a(m), track(t) {
    if (track) {
      U = Uinv = IntMatrix::identity(m.rows());
      V = Vinv = IntMatrix::identity(m.cols());
    }
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
    if (!track) return;
    for (std::size_t c = 0; c < U.cols(); ++c) std::swap(U(i, c), U(j, c));
    for (std::size_t r = 0; r < Uinv.rows(); ++r) std::swap(Uinv(r, i), Uinv(r, j));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
    if (!track) return;
    for (std::size_t r = 0; r < V.rows(); ++r) std::swap(V(r, i), V(r, j));
    for (std::size_t c = 0; c < Vinv.cols(); ++c) std::swap(Vinv(i, c), Vinv(j, c));
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
    if (!track) return;
    for (std::size_t c = 0; c < U.cols(); ++c) U(i, c) = -U(i, c);
    for (std::size_t r = 0; r < Uinv.rows(); ++r) Uinv(r, i) = -Uinv(r, i);
  }

  // row_i -= q * row_t
  void row_axpy(std::size_t i, std::size_t t, const Integer& q) {
    if (sgn(q) == 0) return;
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (sgn(a(t, c)) != 0) a(i, c) -= q * a(t, c);
    if (!track) return;
    for (std::size_t c = 0; c < U.cols(); ++c)
      if (sgn(U(t, c)) != 0) U(i, c) -= q * U(t, c);
    for (std::size_t r = 0; r < Uinv.rows(); ++r)
      if (sgn(Uinv(r, i)) != 0) Uinv(r, t) += q * Uinv(r, i);
  }

  // col_j -= q * col_t
  void col_axpy(std::size_t j, std::size_t t, const Integer& q) {
    if (sgn(q) == 0) return;
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (sgn(a(r, t)) != 0) a(r, j) -= q * a(r, t);
    if (!track) return;
    for (std::size_t r = 0; r < V.rows(); ++r)
      if (sgn(V(r, t)) != 0) V(r, j) -= q * V(r, t);
    for (std::size_t c = 0; c < Vinv.cols(); ++c)
      if (sgn(Vinv(j, c)) != 0) Vinv(t, c) += q * Vinv(j, c);
  }

  std::size_t run() {
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t t = 0;
    for (; t < m && t < n; ++t) {
      // smallest nonzero entry of the trailing block
      std::size_t pr = m, pc = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (sgn(a(i, j)) != 0 && (pr == m || cmpabs(a(i, j), a(pr, pc)) < 0)) {
            pr = i;
            pc = j;
          }
      if (pr == m) break;
      swap_rows(t, pr);
      swap_cols(t, pc);
      for (;;) {
        bool dirty = false;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (sgn(a(i, t)) == 0) continue;
          Integer q;
          mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
          row_axpy(i, t, q);
          if (sgn(a(i, t)) != 0) dirty = true;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (sgn(a(t, j)) == 0) continue;
          Integer q;
          mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
          col_axpy(j, t, q);
          if (sgn(a(t, j)) != 0) dirty = true;
        }
        if (dirty) {
          // move the smallest remainder in row/column t to the pivot
          std::size_t br = t, bc = t;
          for (std::size_t i = t + 1; i < m; ++i)
            if (sgn(a(i, t)) != 0 && cmpabs(a(i, t), a(br, bc)) < 0) br = i, bc = t;
          for (std::size_t j = t + 1; j < n; ++j)
            if (sgn(a(t, j)) != 0 && cmpabs(a(t, j), a(br, bc)) < 0) br = t, bc = j;
          swap_rows(t, br);
          swap_cols(t, bc);
          continue;
        }
        // divisibility fix-up
        std::size_t bad = m;
        for (std::size_t i = t + 1; i < m && bad == m; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
              bad = i;
              break;
            }
        if (bad == m) break;
        row_axpy(t, bad, Integer(-1));  // row_t += row_bad
      }
      if (sgn(a(t, t)) < 0) negate_row(t);
    }
    return t;
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  SnfWork w(m, true);
  std::size_t r = w.run();
  return SmithForm{std::move(w.a), std::move(w.U), std::move(w.V), std::move(w.Uinv), std::move(w.Vinv), r};
}

std::optional<std::vector<Integer>> solve_with(const SmithForm& s, const std::vector<Integer>& u) {
  const std::size_t m = s.U.rows(), n = s.V.rows();
  if (u.size() != m) throw PreconditionError("right-hand side has wrong length");
  std::vector<Integer> t(n);
  for (std::size_t i = 0; i < m; ++i) {
    Integer v = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (sgn(u[j]) != 0) v += s.U(i, j) * u[j];
    if (i < s.rank) {
      if (!mpz_divisible_p(v.get_mpz_t(), s.S(i, i).get_mpz_t())) return std::nullopt;
      mpz_divexact(t[i].get_mpz_t(), v.get_mpz_t(), s.S(i, i).get_mpz_t());
    } else if (sgn(v) != 0) {
      return std::nullopt;
    }
  }
  std::vector<Integer> c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < s.rank; ++j)
      if (sgn(t[j]) != 0) c[i] += s.V(i, j) * t[j];
  return c;
}

IntMatrix column_span_basis(const IntMatrix& m) {
  if (m.cols() == 0) return IntMatrix(m.rows(), 0);
  SmithForm s = smith_normal_form(m);
  IntMatrix out(m.rows(), s.rank);
  for (std::size_t j = 0; j < s.rank; ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = s.Uinv(i, j) * s.S(j, j);
  return out;
}

IntMatrix kernel_basis(const IntMatrix& m) {
  if (m.rows() == 0) return IntMatrix::identity(m.cols());
  SmithForm s = smith_normal_form(m);
  const std::size_t k = m.cols() - s.rank;
  IntMatrix out(m.cols(), k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m.cols(); ++i) out(i, j) = s.V(i, s.rank + j);
  return out;
}

std::vector<Integer> dense_invariant_factors(IntMatrix m) {
  SnfWork w(std::move(m), false);
  std::size_t r = w.run();
  std::vector<Integer> out;
  out.reserve(r);
  for (std::size_t i = 0; i < r; ++i) out.push_back(w.a(i, i));
  return out;
}

std::vector<Integer> invariant_factors(const IntMatrix& m) {
  return invariant_factors(SparseIntMatrix::from_dense(m));
}

// *** FgGroup

FgGroup::FgGroup(std::size_t rank, std::vector<Integer> torsion) : rank_(rank) {
  bool normalized = true;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] < 2) normalized = false;
    if (i && !mpz_divisible_p(torsion[i].get_mpz_t(), torsion[i - 1].get_mpz_t())) normalized = false;
  }
  if (normalized) {
    torsion_ = std::move(torsion);
  } else {
    FgGroup g = from_cyclic(torsion);
    if (g.rank_ != 0) throw PreconditionError("torsion orders must be nonzero");
    torsion_ = std::move(g.torsion_);
  }
}

FgGroup FgGroup::from_cyclic(const std::vector<Integer>& orders) {
  std::size_t rank = 0;
  std::vector<Integer> finite;
  for (const Integer& d : orders) {
    if (sgn(d) == 0) {
      ++rank;
    } else if (abs(d) != 1) {
      finite.push_back(abs(d));
    }
  }
  FgGroup g;
  g.rank_ = rank;
  if (finite.empty()) return g;
  IntMatrix diag(finite.size(), finite.size());
  for (std::size_t i = 0; i < finite.size(); ++i) diag(i, i) = finite[i];
  for (const Integer& d : dense_invariant_factors(diag))
    if (d != 1) g.torsion_.push_back(d);
  return g;
}

std::string FgGroup::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (rank_ > 0) {
    os << "Z";
    if (rank_ > 1) os << '^' << rank_;
    first = false;
  }
  for (const Integer& d : torsion_) {
    os << (first ? "" : " + ") << "Z/" << d;
    first = false;
  }
  return os.str();
}

bool groups_iso(const FgGroup& g, const FgGroup& h) { return g == h; }

FgGroup direct_sum(const FgGroup& g, const FgGroup& h) {
  std::vector<Integer> orders(g.rank() + h.rank(), Integer(0));
  orders.insert(orders.end(), g.torsion().begin(), g.torsion().end());
  orders.insert(orders.end(), h.torsion().begin(), h.torsion().end());
  return FgGroup::from_cyclic(orders);
}

static Integer gcd_of(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

FgGroup tensor(const FgGroup& g, const FgGroup& h) {
  std::vector<Integer> orders(g.rank() * h.rank(), Integer(0));
  for (std::size_t i = 0; i < h.rank(); ++i) orders.insert(orders.end(), g.torsion().begin(), g.torsion().end());
  for (std::size_t i = 0; i < g.rank(); ++i) orders.insert(orders.end(), h.torsion().begin(), h.torsion().end());
  for (const Integer& a : g.torsion())
    for (const Integer& b : h.torsion()) orders.push_back(gcd_of(a, b));
  return FgGroup::from_cyclic(orders);
}

FgGroup tor(const FgGroup& g, const FgGroup& h) {
  std::vector<Integer> orders;
  for (const Integer& a : g.torsion())
    for (const Integer& b : h.torsion()) orders.push_back(gcd_of(a, b));
  return FgGroup::from_cyclic(orders);
}

GroupDual fg_group_dual(const FgGroup& g) { return GroupDual{g.free_part(), g.torsion_part()}; }

// *** GradedGroups

GradedGroups::GradedGroups(std::initializer_list<std::pair<const int, FgGroup>> items) {
  for (const auto& [d, g] : items) add(d, g);
}

FgGroup GradedGroups::at(int degree) const {
  auto it = groups_.find(degree);
  return it == groups_.end() ? FgGroup() : it->second;
}

void GradedGroups::set(int degree, FgGroup g) {
  if (g.is_zero()) {
    groups_.erase(degree);
  } else {
    groups_[degree] = std::move(g);
  }
}

void GradedGroups::add(int degree, const FgGroup& g) { set(degree, direct_sum(at(degree), g)); }

GradedGroups GradedGroups::shifted(int k) const {
  GradedGroups out;
  for (const auto& [d, g] : groups_) out.groups_[d - k] = g;
  return out;
}

long GradedGroups::euler_characteristic() const {
  long chi = 0;
  for (const auto& [d, g] : groups_) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(g.rank());
  return chi;
}

bool GradedGroups::concentrated_in(int degree) const {
  return groups_.empty() || (groups_.size() == 1 && groups_.begin()->first == degree);
}

std::string GradedGroups::to_string() const {
  if (groups_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [d, g] : groups_) {
    os << (first ? "" : ", ") << d << ": " << g.to_string();
    first = false;
  }
  return os.str();
}

GradedGroups dual_graded(const GradedGroups& h) {
  GradedGroups out;
  for (const auto& [d, g] : h.items()) {
    out.add(-d, g.free_part());
    out.add(1 - d, g.torsion_part());
  }
  return out;
}

GradedGroups derived_tensor(const GradedGroups& a, const GradedGroups& b) {
  GradedGroups out;
  for (const auto& [p, g] : a.items())
    for (const auto& [q, h] : b.items()) {
      out.add(p + q, tensor(g, h));
      out.add(p + q - 1, tor(g, h));
    }
  return out;
}

// *** FreeComplexZ

FreeComplexZ::FreeComplexZ(int lo, std::vector<std::size_t> ranks) : lo_(lo), ranks_(std::move(ranks)) {
  for (std::size_t k = 0; k + 1 < ranks_.size(); ++k) diffs_.emplace_back(ranks_[k + 1], ranks_[k]);
}

std::size_t FreeComplexZ::rank(int degree) const {
  if (degree < lo_ || degree > hi()) return 0;
  return ranks_[degree - lo_];
}

const SparseIntMatrix& FreeComplexZ::differential(int degree) const {
  if (degree < lo_ || degree >= hi()) return empty_;
  return diffs_[degree - lo_];
}

SparseIntMatrix& FreeComplexZ::differential(int degree) {
  if (degree < lo_ || degree >= hi()) throw PreconditionError("differential degree out of range");
  return diffs_[degree - lo_];
}

void FreeComplexZ::set_differential(int degree, SparseIntMatrix d) {
  SparseIntMatrix& slot = differential(degree);
  if (d.rows() != slot.rows() || d.cols() != slot.cols()) throw PreconditionError("differential has wrong shape");
  slot = std::move(d);
}

bool FreeComplexZ::is_complex() const {
  for (std::size_t k = 0; k + 1 < diffs_.size(); ++k)
    if (!(diffs_[k + 1] * diffs_[k]).is_zero()) return false;
  return true;
}

long FreeComplexZ::euler_characteristic() const {
  long chi = 0;
  for (int d = lo_; d <= hi(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(rank(d));
  return chi;
}

GradedGroups homology_of(const FreeComplexZ& c) {
  if (!c.is_complex()) throw PreconditionError("d o d != 0");
  GradedGroups out;
  if (c.empty()) return out;
  std::vector<std::size_t> ranks;
  std::vector<std::vector<Integer>> factors;
  for (int d = c.lo(); d < c.hi(); ++d) {
    factors.push_back(invariant_factors(c.differential(d)));
  }
  auto rank_of = [&](int d) -> std::size_t {
    if (d < c.lo() || d >= c.hi()) return 0;
    return factors[d - c.lo()].size();
  };
  for (int d = c.lo(); d <= c.hi(); ++d) {
    std::size_t free_rank = c.rank(d) - rank_of(d) - rank_of(d - 1);
    std::vector<Integer> tors;
    if (d > c.lo())
      for (const Integer& f : factors[d - 1 - c.lo()])
        if (f != 1) tors.push_back(f);
    out.set(d, FgGroup(free_rank, std::move(tors)));
  }
  return out;
}

FreeComplexZ derived_dual(const FreeComplexZ& c) {
  if (c.empty()) return FreeComplexZ();
  std::vector<std::size_t> ranks;
  for (int d = c.hi(); d >= c.lo(); --d) ranks.push_back(c.rank(d));
  FreeComplexZ out(-c.hi(), ranks);
  // (C^vee)^{-k} = Hom(C^k, Z); differential -(k+1) -> -k is the transpose of d^k
  for (int k = c.lo(); k < c.hi(); ++k) out.set_differential(-(k + 1), c.differential(k).transpose());
  return out;
}

// *** presented cohomology

std::vector<Integer> PresentedCohomology::coordinates(const std::vector<Integer>& cocycle) const {
  if (cocycle.size() != coord_map.cols()) throw PreconditionError("cocycle has wrong length");
  std::vector<Integer> out;
  out.reserve(kept.size());
  const std::size_t nt = group.torsion().size();
  for (std::size_t g = 0; g < kept.size(); ++g) {
    Integer v = 0;
    for (std::size_t j = 0; j < cocycle.size(); ++j)
      if (sgn(cocycle[j]) != 0) v += coord_map(kept[g], j) * cocycle[j];
    if (g < nt) {
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), group.torsion()[g].get_mpz_t());
    }
    out.push_back(v);
  }
  return out;
}

PresentedCohomology present_cohomology(const IntMatrix& d_in, const IntMatrix& d_out, std::size_t dim) {
  if (d_in.rows() != dim && !(d_in.rows() == 0 && d_in.cols() == 0))
    throw PreconditionError("incoming differential has wrong shape");
  if (d_out.cols() != dim && !(d_out.rows() == 0 && d_out.cols() == 0))
    throw PreconditionError("outgoing differential has wrong shape");
  PresentedCohomology pc;
  // kernel of d_out
  IntMatrix kernel_basis, kernel_coords;
  if (d_out.rows() == 0 || d_out.cols() == 0) {
    kernel_basis = kernel_coords = IntMatrix::identity(dim);
  } else {
    SmithForm s = smith_normal_form(d_out);
    const std::size_t k = dim - s.rank;
    kernel_basis = IntMatrix(dim, k);
    kernel_coords = IntMatrix(k, dim);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < dim; ++i) {
        kernel_basis(i, j) = s.V(i, s.rank + j);
        kernel_coords(j, i) = s.Vinv(s.rank + j, i);
      }
  }
  const std::size_t k = kernel_basis.cols();
  // relations: image of d_in in kernel coordinates
  IntMatrix rel = (d_in.cols() == 0) ? IntMatrix(k, 0) : kernel_coords * d_in;
  SmithForm r = smith_normal_form(rel);
  IntMatrix gens = kernel_basis * r.Uinv;
  pc.coord_map = r.U * kernel_coords;
  std::vector<Integer> tors;
  for (std::size_t i = 0; i < r.rank; ++i)
    if (r.S(i, i) != 1) {
      pc.kept.push_back(i);
      tors.push_back(r.S(i, i));
    }
  for (std::size_t i = r.rank; i < k; ++i) pc.kept.push_back(i);
  pc.group = FgGroup(k - r.rank, tors);
  for (std::size_t g : pc.kept) {
    std::vector<Integer> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = gens(i, g);
    pc.generators.push_back(std::move(v));
  }
  return pc;
}

}  // namespace finsheaf
