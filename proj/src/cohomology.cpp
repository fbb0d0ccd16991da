#include "finsheaf/cohomology.hpp"

#include <functional>
#include <map>
#include <tuple>

#include "chain_index.hpp"

namespace finsheaf {

using detail::ChainIndex;
using detail::drop;
using detail::sign;

namespace {

// Offsets of the (p, q) blocks of a double complex whose (p, q) term is a sum
// over p-chains of a free group of rank carried(q, chain).
struct Layout {
  int lo = 0, hi = -1;
  std::vector<std::size_t> ranks;                        // per total degree
  std::map<std::pair<int, int>, std::vector<std::size_t>> offsets;  // (p, q) -> per chain, plus end

  const std::vector<std::size_t>* block(int p, int q) const {
    auto it = offsets.find({p, q});
    return it == offsets.end() ? nullptr : &it->second;
  }
  std::size_t rank(int n) const { return n < lo || n > hi ? 0 : ranks[n - lo]; }
};

using CarriedFn = std::function<std::size_t(int q, const Chain&)>;

// degree(p, q) must be injective in p for fixed total degree.
Layout make_layout(const ChainIndex& idx, int qlo, int qhi, const std::function<int(int, int)>& degree,
                   const CarriedFn& carried) {
  Layout L;
  int P = idx.max_len();
  if (P < 0 || qhi < qlo) return L;
  L.lo = degree(0, qlo);
  L.hi = L.lo;
  for (int p = 0; p <= P; ++p)
    for (int q = qlo; q <= qhi; ++q) {
      L.lo = std::min(L.lo, degree(p, q));
      L.hi = std::max(L.hi, degree(p, q));
    }
  L.ranks.assign(L.hi - L.lo + 1, 0);
  // blocks within a degree ordered by p
  for (int p = 0; p <= P; ++p)
    for (int q = qlo; q <= qhi; ++q) {
      std::size_t& r = L.ranks[degree(p, q) - L.lo];
      std::vector<std::size_t> off;
      off.reserve(idx.by_len[p].size() + 1);
      for (const Chain& c : idx.by_len[p]) {
        off.push_back(r);
        r += carried(q, c);
      }
      off.push_back(r);
      L.offsets.emplace(std::make_pair(p, q), std::move(off));
    }
  return L;
}

void add_identity(SparseBuilder& b, std::size_t r0, std::size_t c0, std::size_t n, int s) {
  for (std::size_t t = 0; t < n; ++t) b.add(r0 + t, c0 + t, s);
}

GradedGroups negate_degrees(const GradedGroups& h) {
  GradedGroups out;
  for (const auto& [n, g] : h.items()) out.set(-n, g);
  return out;
}

std::vector<char> mask_of(const FinPoset& X, const std::vector<int>& s) {
  std::vector<char> m(X.size(), 0);
  for (int x : s) {
    if (x < 0 || x >= X.size()) throw PreconditionError("element index out of range");
    m[x] = 1;
  }
  return m;
}

}  // namespace

FreeComplexZ cochain_model(const SheafComplex& F, const std::vector<char>* first_in) {
  const FinPoset& X = F.base();
  ChainIndex idx = detail::index_chains(X, first_in);
  if (F.empty() || idx.max_len() < 0) return FreeComplexZ();
  Layout L = make_layout(
      idx, F.lo(), F.hi(), [](int p, int q) { return p + q; },
      [&](int q, const Chain& c) { return F.rank(q, c.back()); });
  FreeComplexZ out(L.lo, L.ranks);
  for (int n = L.lo; n < L.hi; ++n) {
    SparseBuilder b(L.rank(n + 1), L.rank(n));
    for (int p = 0; p <= idx.max_len(); ++p) {
      int q = n - p;
      const auto* src = L.block(p, q);
      if (!src) continue;
      // coboundary along chains: (p, q) -> (p + 1, q)
      if (const auto* dst = L.block(p + 1, q)) {
        const auto& up = idx.by_len[p + 1];
        for (std::size_t k = 0; k < up.size(); ++k) {
          const Chain& s = up[k];
          for (std::size_t i = 0; i < s.size(); ++i) {
            Chain t = drop(s, i);
            long j = idx.find(t);
            if (j < 0) continue;
            int sg = sign(static_cast<long>(i));
            if (i + 1 == s.size()) {
              b.add_block((*dst)[k], (*src)[j], F.restriction(q, t.back(), s.back()), sg);
            } else {
              add_identity(b, (*dst)[k], (*src)[j], F.rank(q, s.back()), sg);
            }
          }
        }
      }
      // internal differential with sign (-1)^p
      if (const auto* dst = L.block(p, q + 1)) {
        const auto& cs = idx.by_len[p];
        for (std::size_t k = 0; k < cs.size(); ++k)
          b.add_block((*dst)[k], (*src)[k], F.differential(q, cs[k].back()), sign(p));
      }
    }
    out.set_differential(n, b.build());
  }
  return out;
}

FreeComplexZ chain_model(const SheafComplex& F) {
  const FinPoset& X = F.base();
  ChainIndex idx = detail::index_chains(X);
  if (F.empty() || idx.max_len() < 0) return FreeComplexZ();
  Layout L = make_layout(
      idx, F.lo(), F.hi(), [](int p, int q) { return q - p; },
      [&](int q, const Chain& c) { return F.rank(q, c.front()); });
  FreeComplexZ out(L.lo, L.ranks);
  for (int n = L.lo; n < L.hi; ++n) {
    SparseBuilder b(L.rank(n + 1), L.rank(n));
    for (int p = 0; p <= idx.max_len(); ++p) {
      int q = n + p;
      const auto* src = L.block(p, q);
      if (!src) continue;
      const auto& cs = idx.by_len[p];
      // boundary: (p, q) -> (p - 1, q); dropping x_0 applies the restriction
      if (const auto* dst = L.block(p - 1, q)) {
        for (std::size_t k = 0; k < cs.size(); ++k) {
          const Chain& s = cs[k];
          for (std::size_t i = 0; i < s.size(); ++i) {
            Chain t = drop(s, i);
            std::size_t j = static_cast<std::size_t>(idx.find(t));
            int sg = sign(static_cast<long>(i));
            if (i == 0) {
              b.add_block((*dst)[j], (*src)[k], F.restriction(q, s[0], s[1]), sg);
            } else {
              add_identity(b, (*dst)[j], (*src)[k], F.rank(q, s.front()), sg);
            }
          }
        }
      }
      if (const auto* dst = L.block(p, q + 1))
        for (std::size_t k = 0; k < cs.size(); ++k)
          b.add_block((*dst)[k], (*src)[k], F.differential(q, cs[k].front()), sign(p));
    }
    out.set_differential(n, b.build());
  }
  return out;
}

GradedGroups global_cohomology(const SheafComplex& F) { return homology_of(cochain_model(F)); }
GradedGroups global_cohomology(const FreeStalkSheaf& F) { return global_cohomology(SheafComplex::single(F)); }

GradedGroups homology(const SheafComplex& F) { return negate_degrees(homology_of(chain_model(F))); }
GradedGroups homology(const FreeStalkSheaf& F) { return homology(SheafComplex::single(F)); }

FreeComplexZ reduced_chain_complex(const FinPoset& X) {
  ChainIndex idx = detail::index_chains(X);
  int P = idx.max_len();
  // degree -p holds the p-chains; degree 1 the augmentation Z
  std::vector<std::size_t> ranks;
  for (int p = P; p >= 0; --p) ranks.push_back(idx.by_len[p].size());
  ranks.push_back(1);
  FreeComplexZ c(P >= 0 ? -P : 1, ranks);
  for (int p = P; p >= 1; --p) {
    const auto& cs = idx.by_len[p];
    SparseBuilder b(idx.by_len[p - 1].size(), cs.size());
    for (std::size_t k = 0; k < cs.size(); ++k)
      for (std::size_t i = 0; i < cs[k].size(); ++i)
        b.add(static_cast<std::size_t>(idx.find(drop(cs[k], i))), k, sign(static_cast<long>(i)));
    c.set_differential(-p, b.build());
  }
  if (P >= 0) {
    SparseBuilder b(1, idx.by_len[0].size());
    for (std::size_t k = 0; k < idx.by_len[0].size(); ++k) b.add(0, k, 1);
    c.set_differential(0, b.build());
  }
  return c;
}

GradedGroups reduced_homology(const FinPoset& X) { return negate_degrees(homology_of(reduced_chain_complex(X))); }

GradedGroups reduced_cohomology(const FinPoset& X) { return homology_of(derived_dual(reduced_chain_complex(X))); }

GradedGroups local_cohomology(const SheafComplex& F, const std::vector<int>& Y) {
  const FinPoset& X = F.base();
  if (!is_closed(X, Y)) throw PreconditionError("local cohomology needs a closed subset");
  auto m = mask_of(X, Y);
  return homology_of(cochain_model(F, &m));
}

GradedGroups point_local_cohomology(const SheafComplex& F, int x) {
  // chains starting at x live in U_x, where {x} is closed
  auto m = mask_of(F.base(), {x});
  return homology_of(cochain_model(F, &m));
}

namespace {

// Summand bookkeeping of the Hom complex: block (p, q, r) holds, for each
// p-chain, Hom(F^q_{x_0}, G^r_{x_p}) with coordinates j * rank F^q_{x_0} + i.
struct HomBlock {
  int degree;
  std::vector<std::size_t> offsets;  // absolute offset within the degree, per chain
};

}  // namespace

CostalkComplex rhom_model(const SheafComplex& F, const SheafComplex& G) {
  const PosetPtr& Xp = F.base_ptr();
  const FinPoset& X = *Xp;
  if (&X != &G.base() && !(X == G.base())) throw PreconditionError("RHom of complexes on different posets");
  CostalkComplex out;
  out.base = Xp;
  ChainIndex idx = detail::index_chains(X);
  int P = idx.max_len();
  if (F.empty() || G.empty() || P < 0) return out;
  int lo = G.lo() - F.hi(), hi = P + G.hi() - F.lo();
  out.lo = lo;
  out.points.assign(hi - lo + 1, {});
  std::map<std::tuple<int, int, int>, HomBlock> blocks;
  auto nF = [&](int q, const Chain& c) { return F.rank(q, c.front()); };
  auto nG = [&](int r, const Chain& c) { return G.rank(r, c.back()); };
  for (int p = 0; p <= P; ++p)
    for (int q = F.lo(); q <= F.hi(); ++q)
      for (int r = G.lo(); r <= G.hi(); ++r) {
        int n = p + r - q;
        auto& pts = out.points[n - lo];
        HomBlock hb{n, {}};
        for (const Chain& c : idx.by_len[p]) {
          hb.offsets.push_back(pts.size());
          pts.insert(pts.end(), nF(q, c) * nG(r, c), c.front());
        }
        blocks.emplace(std::make_tuple(p, q, r), std::move(hb));
      }
  auto find = [&](int p, int q, int r) -> const HomBlock* {
    auto it = blocks.find({p, q, r});
    return it == blocks.end() ? nullptr : &it->second;
  };
  std::vector<SparseBuilder> d;
  for (int n = lo; n < hi; ++n) d.emplace_back(out.points[n + 1 - lo].size(), out.points[n - lo].size());
  for (const auto& [key, src] : blocks) {
    auto [p, q, r] = key;
    int n = src.degree;
    if (n >= hi) continue;
    SparseBuilder& b = d[n - lo];
    int eps = sign(p);
    // along chains: (p, q, r) -> (p + 1, q, r)
    if (const HomBlock* dst = find(p + 1, q, r)) {
      const auto& up = idx.by_len[p + 1];
      for (std::size_t k = 0; k < up.size(); ++k) {
        const Chain& s = up[k];
        std::size_t nfs = nF(q, s), ngs = nG(r, s);
        for (std::size_t i = 0; i < s.size(); ++i) {
          Chain t = drop(s, i);
          std::size_t jt = static_cast<std::size_t>(idx.find(t));
          std::size_t row0 = dst->offsets[k], col0 = src.offsets[jt];
          std::size_t nft = nF(q, t);
          int sg = sign(static_cast<long>(i));
          if (i == 0) {
            // f o rho^F_{x_0 <= x_1}
            const SparseIntMatrix& rho = F.restriction(q, s[0], s[1]);
            for (std::size_t a = 0; a < rho.rows(); ++a)
              for (const auto& e : rho.row(a))
                for (std::size_t j = 0; j < ngs; ++j) b.add(row0 + j * nfs + e.col, col0 + j * nft + a, sg * e.value);
          } else if (i + 1 == s.size()) {
            // rho^G_{x_p <= x_{p+1}} o f
            const SparseIntMatrix& rho = G.restriction(r, t.back(), s.back());
            for (std::size_t jj = 0; jj < rho.rows(); ++jj)
              for (const auto& e : rho.row(jj))
                for (std::size_t a = 0; a < nfs; ++a) b.add(row0 + jj * nfs + a, col0 + e.col * nft + a, sg * e.value);
          } else {
            add_identity(b, row0, col0, nfs * ngs, sg);
          }
        }
      }
    }
    const auto& cs = idx.by_len[p];
    // eps * d_G o f: (p, q, r) -> (p, q, r + 1)
    if (const HomBlock* dst = find(p, q, r + 1))
      for (std::size_t k = 0; k < cs.size(); ++k) {
        const SparseIntMatrix& dg = G.differential(r, cs[k].back());
        std::size_t nf = nF(q, cs[k]);
        for (std::size_t jj = 0; jj < dg.rows(); ++jj)
          for (const auto& e : dg.row(jj))
            for (std::size_t a = 0; a < nf; ++a)
              b.add(dst->offsets[k] + jj * nf + a, src.offsets[k] + e.col * nf + a, eps * e.value);
      }
    // -eps (-1)^{r-q} f o d_F: (p, q, r) -> (p, q - 1, r)
    if (const HomBlock* dst = find(p, q - 1, r))
      for (std::size_t k = 0; k < cs.size(); ++k) {
        const SparseIntMatrix& df = F.differential(q - 1, cs[k].front());
        std::size_t nf = nF(q, cs[k]), nf1 = nF(q - 1, cs[k]), ng = nG(r, cs[k]);
        int s = -eps * sign(r - q);
        for (std::size_t a = 0; a < df.rows(); ++a)
          for (const auto& e : df.row(a))
            for (std::size_t j = 0; j < ng; ++j)
              b.add(dst->offsets[k] + j * nf1 + e.col, src.offsets[k] + j * nf + a, s * e.value);
      }
  }
  for (auto& b : d) out.diffs.push_back(b.build());
  return out;
}

GradedGroups rhom_global(const SheafComplex& F, const SheafComplex& G) {
  return homology_of(rhom_model(F, G).global_sections());
}

SheafComplex rhom_sheaf(const SheafComplex& F, const SheafComplex& G) { return to_sheaf(rhom_model(F, G)); }

GradedGroups ext_skyscrapers(const FinPoset& X, int x, int y) {
  if (!X.lt(x, y)) throw PreconditionError("Ext between skyscrapers needs x < y");
  return reduced_cohomology(open_interval(X, x, y)).shifted(-2);
}

}  // namespace finsheaf
