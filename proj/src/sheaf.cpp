#include "finsheaf/sheaf.hpp"

#include <algorithm>

namespace finsheaf {

PosetPtr share(FinPoset X) { return std::make_shared<const FinPoset>(std::move(X)); }

// *** FreeStalkSheaf

FreeStalkSheaf::FreeStalkSheaf(PosetPtr base, std::vector<std::size_t> ranks,
                               const std::map<std::pair<int, int>, SparseIntMatrix>& cover_maps)
    : base_(std::move(base)), ranks_(std::move(ranks)) {
  const FinPoset& X = *base_;
  const int n = X.size();
  if (static_cast<int>(ranks_.size()) != n) throw PreconditionError("one stalk rank per element is required");
  for (const auto& [key, m] : cover_maps) {
    auto [x, y] = key;
    if (x < 0 || y < 0 || x >= n || y >= n || !X.is_cover(x, y))
      throw PreconditionError("cover map given for a non-cover pair");
    if (m.rows() != ranks_[y] || m.cols() != ranks_[x])
      throw PreconditionError("cover map " + X.label(x) + "->" + X.label(y) + " has wrong shape");
  }
  rho_.assign(static_cast<std::size_t>(n) * n, SparseIntMatrix());
  auto cover = [&](int z, int y) -> SparseIntMatrix {
    auto it = cover_maps.find({z, y});
    if (it != cover_maps.end()) return it->second;
    if (ranks_[z] == 0 || ranks_[y] == 0) return SparseIntMatrix(ranks_[y], ranks_[z]);
    throw PreconditionError("missing cover map " + X.label(z) + "->" + X.label(y));
  };
  std::map<std::pair<int, int>, SparseIntMatrix> covers;
  for (auto [z, y] : X.covers()) covers.emplace(std::make_pair(z, y), cover(z, y));
  for (int x = 0; x < n; ++x) {
    rho_[static_cast<std::size_t>(x) * n + x] = SparseIntMatrix::identity(ranks_[x]);
    for (int y : X.linear_extension()) {
      if (!X.lt(x, y)) continue;
      bool have = false;
      int first_via = -1;
      SparseIntMatrix& slot = rho_[static_cast<std::size_t>(x) * n + y];
      for (int z : X.lower_covers(y)) {
        if (!X.leq(x, z)) continue;
        SparseIntMatrix m = covers.at({z, y}) * rho_[static_cast<std::size_t>(x) * n + z];
        if (!have) {
          slot = std::move(m);
          have = true;
          first_via = z;
        } else if (!violation_ && !(slot == m)) {
          violation_ = "restriction " + X.label(x) + "->" + X.label(y) + " differs through " + X.label(first_via) +
                       " and through " + X.label(z);
        }
      }
    }
  }
}

static std::map<std::pair<int, int>, SparseIntMatrix> to_sparse(const std::map<std::pair<int, int>, IntMatrix>& m) {
  std::map<std::pair<int, int>, SparseIntMatrix> out;
  for (const auto& [k, v] : m) out.emplace(k, SparseIntMatrix::from_dense(v));
  return out;
}

FreeStalkSheaf::FreeStalkSheaf(PosetPtr base, std::vector<std::size_t> ranks,
                               const std::map<std::pair<int, int>, IntMatrix>& cover_maps)
    : FreeStalkSheaf(std::move(base), std::move(ranks), to_sparse(cover_maps)) {}

const SparseIntMatrix& FreeStalkSheaf::restriction(int x, int y) const {
  if (!base_->leq(x, y)) throw PreconditionError("restriction needs x <= y");
  return rho_[static_cast<std::size_t>(x) * base_->size() + y];
}

bool FreeStalkSheaf::is_zero() const {
  return std::all_of(ranks_.begin(), ranks_.end(), [](std::size_t r) { return r == 0; });
}

// *** SheafComplex

SheafComplex::SheafComplex(PosetPtr base, int lo, std::vector<FreeStalkSheaf> terms,
                           std::vector<std::vector<SparseIntMatrix>> diffs)
    : base_(std::move(base)), lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)) {
  const int n = base_->size();
  if (terms_.empty() ? !diffs_.empty() : diffs_.size() + 1 != terms_.size())
    throw PreconditionError("a complex needs one differential between consecutive terms");
  for (const auto& t : terms_)
    if (t.base().size() != n) throw PreconditionError("terms live on different posets");
  for (std::size_t k = 0; k < diffs_.size(); ++k) {
    if (static_cast<int>(diffs_[k].size()) != n) throw PreconditionError("one differential per element is required");
    for (int x = 0; x < n; ++x)
      if (diffs_[k][x].rows() != terms_[k + 1].rank(x) || diffs_[k][x].cols() != terms_[k].rank(x))
        throw PreconditionError("differential has wrong shape at " + base_->label(x));
  }
  zero_ = FreeStalkSheaf(base_, std::vector<std::size_t>(n, 0), std::map<std::pair<int, int>, SparseIntMatrix>{});
}

SheafComplex SheafComplex::single(const FreeStalkSheaf& F, int degree) {
  return SheafComplex(F.base_ptr(), degree, {F}, {});
}

SheafComplex SheafComplex::zero(PosetPtr base) { return SheafComplex(std::move(base), 0, {}, {}); }

std::size_t SheafComplex::rank(int q, int x) const {
  if (q < lo_ || q > hi()) return 0;
  return terms_[q - lo_].rank(x);
}

const FreeStalkSheaf& SheafComplex::term(int q) const {
  if (q < lo_ || q > hi()) return zero_;
  return terms_[q - lo_];
}

const SparseIntMatrix& SheafComplex::restriction(int q, int x, int y) const { return term(q).restriction(x, y); }

const SparseIntMatrix& SheafComplex::differential(int q, int x) const {
  if (q < lo_ || q >= hi()) return empty_;
  return diffs_[q - lo_][x];
}

FreeComplexZ SheafComplex::stalk(int x) const {
  std::vector<std::size_t> ranks;
  for (int q = lo_; q <= hi(); ++q) ranks.push_back(rank(q, x));
  FreeComplexZ c(lo_, ranks);
  for (int q = lo_; q < hi(); ++q) c.set_differential(q, differential(q, x));
  return c;
}

std::optional<std::string> SheafComplex::check() const {
  const FinPoset& X = *base_;
  for (int q = lo_; q <= hi(); ++q)
    if (terms_[q - lo_].violation()) return "degree " + std::to_string(q) + ": " + *terms_[q - lo_].violation();
  for (int q = lo_; q + 1 < hi(); ++q)
    for (int x = 0; x < X.size(); ++x)
      if (!(differential(q + 1, x) * differential(q, x)).is_zero())
        return "d o d != 0 at " + X.label(x) + " in degree " + std::to_string(q);
  for (int q = lo_; q < hi(); ++q)
    for (auto [x, y] : X.covers())
      if (!(differential(q, y) * restriction(q, x, y) == restriction(q + 1, x, y) * differential(q, x)))
        return "differential does not commute with " + X.label(x) + "->" + X.label(y) + " in degree " +
               std::to_string(q);
  return std::nullopt;
}

ValidationResult validate(const FreeStalkSheaf& F) {
  if (F.violation()) return {false, *F.violation()};
  return {};
}

ValidationResult validate(const SheafComplex& F) {
  if (auto v = F.check()) return {false, *v};
  return {};
}

void require_valid(const SheafComplex& F) {
  if (auto v = F.check()) throw PreconditionError("invalid sheaf complex: " + *v);
}

// *** constructors

FreeStalkSheaf constant_sheaf(PosetPtr X) {
  std::vector<int> all(X->size());
  for (int i = 0; i < X->size(); ++i) all[i] = i;
  return supported_constant(std::move(X), all);
}

FreeStalkSheaf supported_constant(PosetPtr X, const std::vector<int>& S) {
  if (!is_locally_closed(*X, S)) throw PreconditionError("support of Z_S must be locally closed");
  std::vector<std::size_t> ranks(X->size(), 0);
  for (int x : S) ranks[x] = 1;
  std::map<std::pair<int, int>, SparseIntMatrix> covers;
  for (auto [x, y] : X->covers())
    if (ranks[x] && ranks[y]) covers.emplace(std::make_pair(x, y), SparseIntMatrix::identity(1));
  return FreeStalkSheaf(std::move(X), ranks, covers);
}

FreeStalkSheaf skyscraper(PosetPtr X, int x) { return supported_constant(std::move(X), {x}); }

FreeStalkSheaf open_star_sheaf(PosetPtr X, int x) { return supported_constant(X, up_set(*X, x).elements); }

FreeStalkSheaf closure_sheaf(PosetPtr X, int x) { return supported_constant(X, down_set(*X, x).elements); }

FreeStalkSheaf restrict_sheaf(const FreeStalkSheaf& F, PosetPtr sub, const std::vector<int>& elements) {
  std::vector<std::size_t> ranks;
  for (int x : elements) ranks.push_back(F.rank(x));
  std::map<std::pair<int, int>, SparseIntMatrix> covers;
  for (auto [i, j] : sub->covers()) covers.emplace(std::make_pair(i, j), F.restriction(elements[i], elements[j]));
  return FreeStalkSheaf(std::move(sub), ranks, covers);
}

SheafComplex restrict_complex(const SheafComplex& F, PosetPtr sub, const std::vector<int>& elements) {
  if (F.empty()) return SheafComplex::zero(sub);
  std::vector<FreeStalkSheaf> terms;
  std::vector<std::vector<SparseIntMatrix>> diffs;
  for (int q = F.lo(); q <= F.hi(); ++q) terms.push_back(restrict_sheaf(F.term(q), sub, elements));
  for (int q = F.lo(); q < F.hi(); ++q) {
    std::vector<SparseIntMatrix> d;
    for (int x : elements) d.push_back(F.differential(q, x));
    diffs.push_back(std::move(d));
  }
  return SheafComplex(std::move(sub), F.lo(), std::move(terms), std::move(diffs));
}

SheafComplex extend_by_zero(const SheafComplex& F, PosetPtr X, const std::vector<int>& elements) {
  if (!is_locally_closed(*X, elements)) throw PreconditionError("extension by zero needs a locally closed subset");
  if (F.empty()) return SheafComplex::zero(X);
  std::vector<int> pos(X->size(), -1);
  for (int i = 0; i < static_cast<int>(elements.size()); ++i) pos[elements[i]] = i;
  std::vector<FreeStalkSheaf> terms;
  std::vector<std::vector<SparseIntMatrix>> diffs;
  for (int q = F.lo(); q <= F.hi(); ++q) {
    std::vector<std::size_t> ranks(X->size(), 0);
    for (int x = 0; x < X->size(); ++x)
      if (pos[x] >= 0) ranks[x] = F.rank(q, pos[x]);
    std::map<std::pair<int, int>, SparseIntMatrix> covers;
    for (auto [x, y] : X->covers())
      if (pos[x] >= 0 && pos[y] >= 0) covers.emplace(std::make_pair(x, y), F.restriction(q, pos[x], pos[y]));
    terms.emplace_back(X, ranks, covers);
  }
  for (int q = F.lo(); q < F.hi(); ++q) {
    std::vector<SparseIntMatrix> d;
    for (int x = 0; x < X->size(); ++x)
      d.push_back(pos[x] >= 0 ? F.differential(q, pos[x]) : SparseIntMatrix(0, 0));
    diffs.push_back(std::move(d));
  }
  return SheafComplex(X, F.lo(), std::move(terms), std::move(diffs));
}

// *** algebra of complexes

const SparseIntMatrix* SheafMorphism::at(int q, int x) const {
  if (q < lo || q >= lo + static_cast<int>(maps.size())) return nullptr;
  return &maps[q - lo][x];
}

SheafMorphism identity_morphism(const SheafComplex& F) {
  SheafMorphism m;
  m.lo = F.lo();
  for (int q = F.lo(); q <= F.hi(); ++q) {
    std::vector<SparseIntMatrix> v;
    for (int x = 0; x < F.base().size(); ++x) v.push_back(SparseIntMatrix::identity(F.rank(q, x)));
    m.maps.push_back(std::move(v));
  }
  return m;
}

namespace {

// Builds a complex from per-degree ranks, restriction and differential callbacks.
template <class RankFn, class RhoFn, class DiffFn>
SheafComplex assemble(PosetPtr X, int lo, int hi, RankFn rank, RhoFn rho, DiffFn diff) {
  if (hi < lo) return SheafComplex::zero(X);
  std::vector<FreeStalkSheaf> terms;
  std::vector<std::vector<SparseIntMatrix>> diffs;
  for (int q = lo; q <= hi; ++q) {
    std::vector<std::size_t> ranks(X->size());
    for (int x = 0; x < X->size(); ++x) ranks[x] = rank(q, x);
    std::map<std::pair<int, int>, SparseIntMatrix> covers;
    for (auto [x, y] : X->covers()) covers.emplace(std::make_pair(x, y), rho(q, x, y));
    terms.emplace_back(X, ranks, covers);
  }
  for (int q = lo; q < hi; ++q) {
    std::vector<SparseIntMatrix> d;
    for (int x = 0; x < X->size(); ++x) d.push_back(diff(q, x));
    diffs.push_back(std::move(d));
  }
  return SheafComplex(X, lo, std::move(terms), std::move(diffs));
}

int lo_of(const SheafComplex& a, const SheafComplex& b) {
  if (a.empty()) return b.lo();
  if (b.empty()) return a.lo();
  return std::min(a.lo(), b.lo());
}

int hi_of(const SheafComplex& a, const SheafComplex& b) {
  if (a.empty()) return b.hi();
  if (b.empty()) return a.hi();
  return std::max(a.hi(), b.hi());
}

}  // namespace

SheafComplex direct_sum(const SheafComplex& F, const SheafComplex& G) {
  if (F.base().size() != G.base().size()) throw PreconditionError("direct sum of complexes on different posets");
  if (F.empty() && G.empty()) return SheafComplex::zero(F.base_ptr());
  auto rank = [&](int q, int x) { return F.rank(q, x) + G.rank(q, x); };
  return assemble(
      F.base_ptr(), lo_of(F, G), hi_of(F, G), rank,
      [&](int q, int x, int y) {
        SparseBuilder b(rank(q, y), rank(q, x));
        if (F.rank(q, x) && F.rank(q, y)) b.add_block(0, 0, F.restriction(q, x, y));
        if (G.rank(q, x) && G.rank(q, y)) b.add_block(F.rank(q, y), F.rank(q, x), G.restriction(q, x, y));
        return b.build();
      },
      [&](int q, int x) {
        SparseBuilder b(rank(q + 1, x), rank(q, x));
        if (F.rank(q, x) && F.rank(q + 1, x)) b.add_block(0, 0, F.differential(q, x));
        if (G.rank(q, x) && G.rank(q + 1, x)) b.add_block(F.rank(q + 1, x), F.rank(q, x), G.differential(q, x));
        return b.build();
      });
}

SheafComplex shift(const SheafComplex& F, int k) {
  if (F.empty()) return F;
  const Integer sign = (k % 2 == 0) ? 1 : -1;
  return assemble(
      F.base_ptr(), F.lo() - k, F.hi() - k, [&](int q, int x) { return F.rank(q + k, x); },
      [&](int q, int x, int y) { return F.restriction(q + k, x, y); },
      [&](int q, int x) { return F.differential(q + k, x).scaled(sign); });
}

SheafComplex cone(const SheafComplex& F, const SheafComplex& G, const SheafMorphism& phi) {
  if (F.base().size() != G.base().size()) throw PreconditionError("cone of complexes on different posets");
  const int lo = std::min(F.empty() ? G.lo() : F.lo() - 1, G.empty() ? F.lo() - 1 : G.lo());
  const int hi = std::max(F.empty() ? G.hi() : F.hi() - 1, G.empty() ? F.hi() - 1 : G.hi());
  if (F.empty() && G.empty()) return SheafComplex::zero(F.base_ptr());
  auto rank = [&](int n, int x) { return F.rank(n + 1, x) + G.rank(n, x); };
  return assemble(
      F.base_ptr(), lo, hi, rank,
      [&](int n, int x, int y) {
        SparseBuilder b(rank(n, y), rank(n, x));
        if (F.rank(n + 1, x) && F.rank(n + 1, y)) b.add_block(0, 0, F.restriction(n + 1, x, y));
        if (G.rank(n, x) && G.rank(n, y)) b.add_block(F.rank(n + 1, y), F.rank(n + 1, x), G.restriction(n, x, y));
        return b.build();
      },
      [&](int n, int x) {
        SparseBuilder b(rank(n + 1, x), rank(n, x));
        if (F.rank(n + 1, x) && F.rank(n + 2, x)) b.add_block(0, 0, F.differential(n + 1, x), -1);
        const SparseIntMatrix* m = phi.at(n + 1, x);
        if (m && F.rank(n + 1, x) && G.rank(n + 1, x)) {
          if (m->rows() != G.rank(n + 1, x) || m->cols() != F.rank(n + 1, x))
            throw PreconditionError("morphism has wrong shape");
          b.add_block(F.rank(n + 2, x), 0, *m);
        }
        if (G.rank(n, x) && G.rank(n + 1, x)) b.add_block(F.rank(n + 2, x), F.rank(n + 1, x), G.differential(n, x));
        return b.build();
      });
}

SheafComplex tensor_group(const FreeComplexZ& E, const SheafComplex& F) {
  if (E.empty() || F.empty()) return SheafComplex::zero(F.base_ptr());
  // degree n = a + q; blocks ordered by a ascending, index i_E * rank_F + j_F
  auto offset = [&](int n, int a, int x) {
    std::size_t off = 0;
    for (int b = E.lo(); b < a; ++b) off += E.rank(b) * F.rank(n - b, x);
    return off;
  };
  auto rank = [&](int n, int x) { return offset(n, E.hi() + 1, x); };
  return assemble(
      F.base_ptr(), E.lo() + F.lo(), E.hi() + F.hi(), rank,
      [&](int n, int x, int y) {
        SparseBuilder b(rank(n, y), rank(n, x));
        for (int a = E.lo(); a <= E.hi(); ++a) {
          const int q = n - a;
          if (!E.rank(a) || !F.rank(q, x) || !F.rank(q, y)) continue;
          b.add_block(offset(n, a, y), offset(n, a, x), SparseIntMatrix::identity(E.rank(a)).kron(F.restriction(q, x, y)));
        }
        return b.build();
      },
      [&](int n, int x) {
        SparseBuilder b(rank(n + 1, x), rank(n, x));
        for (int a = E.lo(); a <= E.hi(); ++a) {
          const int q = n - a;
          if (!E.rank(a) || !F.rank(q, x)) continue;
          if (E.rank(a + 1))
            b.add_block(offset(n + 1, a + 1, x), offset(n, a, x),
                        E.differential(a).kron(SparseIntMatrix::identity(F.rank(q, x))));
          if (F.rank(q + 1, x))
            b.add_block(offset(n + 1, a, x), offset(n, a, x),
                        SparseIntMatrix::identity(E.rank(a)).kron(F.differential(q, x)), a % 2 == 0 ? 1 : -1);
        }
        return b.build();
      });
}

SheafComplex external_product(const SheafComplex& F, const SheafComplex& G) {
  PosetPtr XY = share(product(F.base(), G.base()));
  if (F.empty() || G.empty()) return SheafComplex::zero(XY);
  const int m = G.base().size();
  auto offset = [&](int n, int a, int xy) {
    const int x = xy / m, y = xy % m;
    std::size_t off = 0;
    for (int b = F.lo(); b < a; ++b) off += F.rank(b, x) * G.rank(n - b, y);
    return off;
  };
  auto rank = [&](int n, int xy) { return offset(n, F.hi() + 1, xy); };
  return assemble(
      XY, F.lo() + G.lo(), F.hi() + G.hi(), rank,
      [&](int n, int s, int t) {
        const int x = s / m, y = s % m, x2 = t / m, y2 = t % m;
        SparseBuilder b(rank(n, t), rank(n, s));
        for (int a = F.lo(); a <= F.hi(); ++a) {
          const int q = n - a;
          if (!F.rank(a, x) || !G.rank(q, y) || !F.rank(a, x2) || !G.rank(q, y2)) continue;
          b.add_block(offset(n, a, t), offset(n, a, s), F.restriction(a, x, x2).kron(G.restriction(q, y, y2)));
        }
        return b.build();
      },
      [&](int n, int s) {
        const int x = s / m, y = s % m;
        SparseBuilder b(rank(n + 1, s), rank(n, s));
        for (int a = F.lo(); a <= F.hi(); ++a) {
          const int q = n - a;
          if (!F.rank(a, x) || !G.rank(q, y)) continue;
          if (F.rank(a + 1, x))
            b.add_block(offset(n + 1, a + 1, s), offset(n, a, s),
                        F.differential(a, x).kron(SparseIntMatrix::identity(G.rank(q, y))));
          if (G.rank(q + 1, y))
            b.add_block(offset(n + 1, a, s), offset(n, a, s),
                        SparseIntMatrix::identity(F.rank(a, x)).kron(G.differential(q, y)), a % 2 == 0 ? 1 : -1);
        }
        return b.build();
      });
}

// *** costalk complexes

const std::vector<int>& CostalkComplex::summands(int q) const {
  static const std::vector<int> none;
  if (q < lo || q > hi()) return none;
  return points[q - lo];
}

const SparseIntMatrix& CostalkComplex::differential(int q) const {
  static const SparseIntMatrix none;
  if (q < lo || q >= hi()) return none;
  return diffs[q - lo];
}

FreeComplexZ CostalkComplex::global_sections() const {
  std::vector<std::size_t> ranks;
  for (const auto& p : points) ranks.push_back(p.size());
  FreeComplexZ c(lo, ranks);
  for (int q = lo; q < hi(); ++q) c.set_differential(q, differential(q));
  return c;
}

namespace {

// Positions of summands at points >= z, per degree.
std::vector<std::vector<long>> stalk_positions(const CostalkComplex& C, int z, std::vector<std::size_t>& ranks) {
  std::vector<std::vector<long>> pos;
  ranks.clear();
  for (const auto& pts : C.points) {
    std::vector<long> p(pts.size(), -1);
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (C.base->leq(z, pts[i])) p[i] = static_cast<long>(k++);
    pos.push_back(std::move(p));
    ranks.push_back(k);
  }
  return pos;
}

SparseIntMatrix select(const SparseIntMatrix& d, const std::vector<long>& row_pos, const std::vector<long>& col_pos,
                       std::size_t rows, std::size_t cols) {
  std::vector<std::vector<SparseIntMatrix::Entry>> e(rows);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (row_pos[i] < 0) continue;
    for (const auto& v : d.row(i))
      if (col_pos[v.col] >= 0) e[row_pos[i]].push_back({static_cast<std::size_t>(col_pos[v.col]), v.value});
  }
  return SparseIntMatrix::from_rows(rows, cols, std::move(e));
}

}  // namespace

FreeComplexZ CostalkComplex::stalk(int z) const {
  std::vector<std::size_t> ranks;
  auto pos = stalk_positions(*this, z, ranks);
  FreeComplexZ c(lo, ranks);
  for (int q = lo; q < hi(); ++q)
    c.set_differential(q, select(diffs[q - lo], pos[q + 1 - lo], pos[q - lo], ranks[q + 1 - lo], ranks[q - lo]));
  return c;
}

SheafComplex to_sheaf(const CostalkComplex& C) {
  const FinPoset& X = *C.base;
  if (C.points.empty()) return SheafComplex::zero(C.base);
  std::vector<std::vector<std::vector<long>>> pos(X.size());
  std::vector<std::vector<std::size_t>> ranks(X.size());
  for (int z = 0; z < X.size(); ++z) pos[z] = stalk_positions(C, z, ranks[z]);
  return assemble(
      C.base, C.lo, C.hi(), [&](int q, int x) { return ranks[x][q - C.lo]; },
      [&](int q, int x, int y) {
        // projection onto the summands that survive at y
        const auto& px = pos[x][q - C.lo];
        const auto& py = pos[y][q - C.lo];
        SparseBuilder b(ranks[y][q - C.lo], ranks[x][q - C.lo]);
        for (std::size_t i = 0; i < px.size(); ++i)
          if (py[i] >= 0) b.add(py[i], px[i], 1);
        return b.build();
      },
      [&](int q, int x) {
        return select(C.diffs[q - C.lo], pos[x][q + 1 - C.lo], pos[x][q - C.lo], ranks[x][q + 1 - C.lo],
                      ranks[x][q - C.lo]);
      });
}

// *** presented sheaves

FgGroup PresentedSheaf::stalk(int x) const {
  std::vector<Integer> orders;
  std::size_t free = generators[x];
  for (const Integer& d : invariant_factors(relations[x])) {
    --free;
    orders.push_back(d);
  }
  FgGroup t = FgGroup::from_cyclic(orders);
  return FgGroup(free, t.torsion());
}

bool PresentedSheaf::is_zero() const {
  for (int x = 0; x < base->size(); ++x)
    if (!stalk(x).is_zero()) return false;
  return true;
}

IntMatrix PresentedSheaf::restriction(int x, int y) const {
  if (!base->leq(x, y)) throw PreconditionError("restriction needs x <= y");
  if (x == y) return IntMatrix::identity(generators[x]);
  // along the first saturated chain found
  for (int z : base->lower_covers(y))
    if (base->leq(x, z)) {
      auto it = cover_maps.find({z, y});
      IntMatrix c = (it != cover_maps.end()) ? it->second : IntMatrix(generators[y], generators[z]);
      return c * restriction(x, z);
    }
  throw PreconditionError("no saturated chain between comparable points");
}

namespace {

bool columns_in_span(const IntMatrix& m, const IntMatrix& rel) {
  SmithForm s = smith_normal_form(rel);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::vector<Integer> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, j);
    if (!solve_with(s, v)) return false;
  }
  return true;
}

}  // namespace

ValidationResult validate(const PresentedSheaf& F) {
  const FinPoset& X = *F.base;
  const int n = X.size();
  if (static_cast<int>(F.generators.size()) != n || static_cast<int>(F.relations.size()) != n)
    return {false, "one presentation per element is required"};
  for (int x = 0; x < n; ++x)
    if (F.relations[x].rows() != F.generators[x])
      return {false, "relation matrix at " + X.label(x) + " has wrong row count"};
  for (const auto& [key, m] : F.cover_maps) {
    auto [x, y] = key;
    if (!X.is_cover(x, y)) return {false, "cover map given for a non-cover pair"};
    if (m.rows() != F.generators[y] || m.cols() != F.generators[x])
      return {false, "cover map " + X.label(x) + "->" + X.label(y) + " has wrong shape"};
    if (!columns_in_span(m * F.relations[x], F.relations[y]))
      return {false, "cover map " + X.label(x) + "->" + X.label(y) + " does not preserve relations"};
  }
  for (int x = 0; x < n; ++x)
    for (int y : X.strictly_above(x)) {
      std::optional<IntMatrix> first;
      for (int z : X.lower_covers(y)) {
        if (!X.leq(x, z)) continue;
        auto it = F.cover_maps.find({z, y});
        IntMatrix c = (it != F.cover_maps.end()) ? it->second : IntMatrix(F.generators[y], F.generators[z]);
        IntMatrix m = c * F.restriction(x, z);
        if (!first) {
          first = m;
        } else if (!columns_in_span(m + (-*first), F.relations[y])) {
          return {false, "restriction " + X.label(x) + "->" + X.label(y) + " is not path independent"};
        }
      }
    }
  return {};
}

// F = coker(K -> P) with P = sum_x Z^{g_x} (x) Z_{U_x}.  P and its subsheaf K
// have free stalks and exactly functorial restrictions.
SheafComplex to_complex(const PresentedSheaf& F) {
  if (auto v = validate(F); !v.ok) throw PreconditionError("invalid presented sheaf: " + v.message);
  const FinPoset& X = *F.base;
  const int n = X.size();
  // P_y = sum over x <= y (ascending x) of Z^{g_x}
  std::vector<std::vector<std::pair<int, std::size_t>>> blocks(n);  // (x, offset)
  std::vector<std::size_t> prank(n, 0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (X.leq(x, y)) {
        blocks[y].emplace_back(x, prank[y]);
        prank[y] += F.generators[x];
      }
  auto block_offset = [&](int y, int x) -> std::size_t {
    for (auto [b, off] : blocks[y])
      if (b == x) return off;
    throw PreconditionError("internal: missing block");
  };
  // K_y: vectors v of P_y with sum_x A_{x<=y} v_x in im R_y
  std::vector<IntMatrix> kbasis(n);
  for (int y = 0; y < n; ++y) {
    const std::size_t g = F.generators[y], r = F.relations[y].cols();
    IntMatrix M(g, prank[y] + r);
    for (auto [x, off] : blocks[y]) {
      IntMatrix A = F.restriction(x, y);
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) M(i, off + j) = A(i, j);
    }
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < r; ++j) M(i, prank[y] + j) = -F.relations[y](i, j);
    IntMatrix ker = kernel_basis(M);
    IntMatrix proj(prank[y], ker.cols());
    for (std::size_t i = 0; i < prank[y]; ++i)
      for (std::size_t j = 0; j < ker.cols(); ++j) proj(i, j) = ker(i, j);
    kbasis[y] = column_span_basis(proj);
  }
  std::vector<std::size_t> krank(n);
  for (int y = 0; y < n; ++y) krank[y] = kbasis[y].cols();
  std::map<std::pair<int, int>, SparseIntMatrix> pcov, kcov;
  for (auto [y, w] : X.covers()) {
    // P_y -> P_w: block x goes to block x identically
    SparseBuilder b(prank[w], prank[y]);
    for (auto [x, off] : blocks[y])
      for (std::size_t j = 0; j < F.generators[x]; ++j) b.add(block_offset(w, x) + j, off + j, 1);
    SparseIntMatrix inc = b.build();
    pcov.emplace(std::make_pair(y, w), inc);
    SmithForm sw = smith_normal_form(kbasis[w]);
    IntMatrix kc(krank[w], krank[y]);
    for (std::size_t j = 0; j < krank[y]; ++j) {
      std::vector<Integer> v(prank[y]);
      for (std::size_t i = 0; i < prank[y]; ++i) v[i] = kbasis[y](i, j);
      auto c = solve_with(sw, inc.apply(v));
      if (!c) throw PreconditionError("internal: relation module not preserved");
      for (std::size_t i = 0; i < krank[w]; ++i) kc(i, j) = (*c)[i];
    }
    kcov.emplace(std::make_pair(y, w), SparseIntMatrix::from_dense(kc));
  }
  PosetPtr base = F.base;
  FreeStalkSheaf K(base, krank, kcov), P(base, prank, pcov);
  std::vector<SparseIntMatrix> d;
  for (int y = 0; y < n; ++y) d.push_back(SparseIntMatrix::from_dense(kbasis[y]));
  return SheafComplex(base, -1, {K, P}, {d});
}

PresentedSheaf presented_from_free(const FreeStalkSheaf& F) {
  PresentedSheaf P;
  P.base = F.base_ptr();
  P.generators = F.ranks();
  for (int x = 0; x < F.base().size(); ++x) P.relations.emplace_back(F.rank(x), 0);
  for (auto [x, y] : F.base().covers()) P.cover_maps.emplace(std::make_pair(x, y), F.restriction(x, y).to_dense());
  return P;
}

// *** cohomology of complexes

std::vector<GradedGroups> stalk_cohomology(const SheafComplex& F) {
  std::vector<GradedGroups> out;
  for (int x = 0; x < F.base().size(); ++x) out.push_back(homology_of(F.stalk(x)));
  return out;
}

std::vector<int> cohomology_degrees(const SheafComplex& F) {
  std::vector<int> degs;
  for (const auto& g : stalk_cohomology(F))
    for (const auto& [d, grp] : g.items()) degs.push_back(d);
  std::sort(degs.begin(), degs.end());
  degs.erase(std::unique(degs.begin(), degs.end()), degs.end());
  return degs;
}

PresentedSheaf cohomology_sheaf(const SheafComplex& F, int q) {
  const FinPoset& X = F.base();
  PresentedSheaf H;
  H.base = F.base_ptr();
  std::vector<PresentedCohomology> pcs;
  for (int x = 0; x < X.size(); ++x) {
    IntMatrix din = F.differential(q - 1, x).to_dense();
    if (din.rows() == 0 && din.cols() == 0) din = IntMatrix(F.rank(q, x), 0);
    IntMatrix dout = F.differential(q, x).to_dense();
    if (dout.rows() == 0 && dout.cols() == 0) dout = IntMatrix(0, F.rank(q, x));
    pcs.push_back(present_cohomology(din, dout, F.rank(q, x)));
    const auto& pc = pcs.back();
    H.generators.push_back(pc.kept.size());
    const auto& tors = pc.group.torsion();
    IntMatrix rel(pc.kept.size(), tors.size());
    for (std::size_t i = 0; i < tors.size(); ++i) rel(i, i) = tors[i];
    H.relations.push_back(rel);
  }
  for (auto [x, y] : X.covers()) {
    IntMatrix m(H.generators[y], H.generators[x]);
    const SparseIntMatrix& rho = F.restriction(q, x, y);
    for (std::size_t g = 0; g < H.generators[x]; ++g) {
      auto c = pcs[y].coordinates(rho.apply(pcs[x].generators[g]));
      for (std::size_t i = 0; i < c.size(); ++i) m(i, g) = c[i];
    }
    H.cover_maps.emplace(std::make_pair(x, y), m);
  }
  return H;
}

StandardResolutionData standard_resolutions(const FreeStalkSheaf& F) {
  StandardResolutionData out;
  for_each_chain(F.base(), {}, [&](const Chain& c) {
    const std::size_t p = c.size() - 1;
    if (out.chains.size() <= p) {
      out.chains.resize(p + 1);
      out.cochain_ranks.resize(p + 1);
      out.chain_ranks.resize(p + 1);
    }
    out.chains[p].push_back(c);
    out.cochain_ranks[p].push_back(F.rank(c.back()));
    out.chain_ranks[p].push_back(F.rank(c.front()));
  });
  return out;
}

SheafComplex SheafInput::as_complex() const {
  if (free) return SheafComplex::single(*free);
  if (presented) return to_complex(*presented);
  return SheafComplex::zero(base);
}

}  // namespace finsheaf
