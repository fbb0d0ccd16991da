#include "finsheaf/duality.hpp"

#include <algorithm>
#include <map>

#include "chain_index.hpp"

namespace finsheaf {

using detail::drop;
using detail::sign;

DualizingModel dualizing_model(PosetPtr Xp, DualizingKind kind, const std::vector<int>& Y) {
  const FinPoset& X = *Xp;
  DualizingModel M;
  M.kind = kind;
  M.base = Xp;
  switch (kind) {
    case DualizingKind::Global:
      for (int x = 0; x < X.size(); ++x) M.support.push_back(x);
      break;
    case DualizingKind::AlongClosed:
      if (!is_closed(X, Y)) throw PreconditionError("the support of a local dualizing complex must be closed");
      M.support = Y;
      break;
    case DualizingKind::Local: {
      auto o = closed_point(X);
      if (!o) throw PreconditionError("the local dualizing complex needs a local space");
      M.support = {*o};
      break;
    }
  }
  std::vector<char> mask(X.size(), 0);
  for (int y : M.support) mask.at(y) = 1;
  auto idx = detail::index_chains(X, &mask);
  int P = idx.max_len();
  M.costalk.base = Xp;
  if (P < 0) return M;
  M.costalk.lo = -P;
  for (int p = P; p >= 0; --p) {
    std::vector<int> pts;
    for (const Chain& c : idx.by_len[p]) pts.push_back(c.back());
    M.costalk.points.push_back(std::move(pts));
  }
  for (int p = P; p >= 1; --p) {
    const auto& cs = idx.by_len[p];
    SparseBuilder b(idx.by_len[p - 1].size(), cs.size());
    for (std::size_t k = 0; k < cs.size(); ++k)
      for (std::size_t i = 0; i < cs[k].size(); ++i) {
        long j = idx.find(drop(cs[k], i));
        if (j >= 0) b.add(static_cast<std::size_t>(j), k, sign(static_cast<long>(i)));
      }
    M.costalk.diffs.push_back(b.build());
  }
  return M;
}

CostalkComplex hom_into(const SheafComplex& F, const CostalkComplex& I) {
  CostalkComplex out;
  out.base = I.base;
  if (F.empty() || I.points.empty()) return out;
  int lo = I.lo - F.hi(), hi = I.hi() - F.lo();
  out.lo = lo;
  out.points.assign(hi - lo + 1, {});
  // offset of the block (m, summand s) with q = m - n, inside degree n
  std::map<std::pair<int, int>, std::vector<std::size_t>> off;  // (m, q) -> per summand
  for (int n = lo; n <= hi; ++n)
    for (int m = I.lo; m <= I.hi(); ++m) {
      int q = m - n;
      if (q < F.lo() || q > F.hi()) continue;
      auto& pts = out.points[n - lo];
      std::vector<std::size_t> o;
      for (int x : I.summands(m)) {
        o.push_back(pts.size());
        pts.insert(pts.end(), F.rank(q, x), x);
      }
      off.emplace(std::make_pair(m, q), std::move(o));
    }
  auto block = [&](int m, int q) -> const std::vector<std::size_t>* {
    auto it = off.find({m, q});
    return it == off.end() ? nullptr : &it->second;
  };
  std::vector<SparseBuilder> d;
  for (int n = lo; n < hi; ++n) d.emplace_back(out.points[n + 1 - lo].size(), out.points[n - lo].size());
  for (const auto& [key, src] : off) {
    auto [m, q] = key;
    int n = m - q;
    if (n >= hi) continue;
    SparseBuilder& b = d[n - lo];
    const auto& summ = I.summands(m);
    // d_I o f: the summand map Z_{C_x} -> Z_{C_x'} pulls f back along rho_{x' <= x}
    if (const auto* dst = block(m + 1, q)) {
      const SparseIntMatrix& dI = I.differential(m);
      const auto& tgt = I.summands(m + 1);
      for (std::size_t s2 = 0; s2 < dI.rows(); ++s2)
        for (const auto& e : dI.row(s2)) {
          int x = summ[e.col], x2 = tgt[s2];
          const SparseIntMatrix& rho = F.restriction(q, x2, x);
          for (std::size_t bb = 0; bb < rho.rows(); ++bb)
            for (const auto& r : rho.row(bb)) b.add((*dst)[s2] + r.col, src[e.col] + bb, e.value * r.value);
        }
    }
    // -(-1)^n f o d_F
    if (const auto* dst = block(m, q - 1)) {
      int sg = -sign(n);
      for (std::size_t s = 0; s < summ.size(); ++s) {
        const SparseIntMatrix& dF = F.differential(q - 1, summ[s]);
        for (std::size_t bb = 0; bb < dF.rows(); ++bb)
          for (const auto& e : dF.row(bb)) b.add((*dst)[s] + e.col, src[s] + bb, sg * e.value);
      }
    }
  }
  for (auto& b : d) out.diffs.push_back(b.build());
  return out;
}

bool verify_local_duality(const SheafComplex& F, const std::vector<int>& Y, DualityEngine engine) {
  DualizingModel K = dualizing_model(F.base_ptr(), DualizingKind::AlongClosed, Y);
  GradedGroups lhs = engine == DualityEngine::Generic ? rhom_global(F, K.complex())
                                                      : homology_of(hom_into(F, K.costalk).global_sections());
  return lhs == dual_graded(local_cohomology(F, Y));
}

std::string DualizabilityReport::reason() const {
  if (!is_catenary) return "not catenary";
  if (witness) return "an open interval is not a homological sphere";
  return "";
}

DualizabilityReport sphere_report(const FinPoset& X) {
  DualizabilityReport r;
  r.is_catenary = is_catenary(X);
  r.all_spheres = true;
  for (int x = 0; x < X.size(); ++x)
    for (int y : X.strictly_above(x)) {
      IntervalVerdict v;
      v.x = x;
      v.y = y;
      FinPoset I = open_interval(X, x, y);
      v.dim = I.dim();
      v.homology = reduced_homology(I);
      v.sphere = v.homology == GradedGroups{{v.dim, FgGroup(1)}};
      if (!v.sphere && r.all_spheres) {
        r.all_spheres = false;
        r.witness = v;
      }
      r.intervals.push_back(std::move(v));
    }
  r.is_locally_dualizable = r.is_catenary && r.all_spheres;
  return r;
}

CanonicalDescriptor canonical_complex(PosetPtr Xp) {
  const FinPoset& X = *Xp;
  CanonicalDescriptor c;
  c.report = sphere_report(X);
  if (!c.report.is_locally_dualizable) return c;
  auto check_phi = [&](const CodimFunction& phi) {
    if (!is_codimension_function(X, phi)) throw std::logic_error("canonical complex with a non-codimension function");
    return phi;
  };
  auto g = generic_point(X);
  auto o = closed_point(X);
  if (g) {
    c.kind = CanonicalDescriptor::Kind::GenericSkyscraper;
    c.phi = check_phi(codim_irreducible_preset(X));
    if (o) c.local_phi = check_phi(codim_local_preset(X));
    c.omega = SheafComplex::single(skyscraper(Xp, *g));
  } else if (o) {
    c.kind = CanonicalDescriptor::Kind::LocalModel;
    c.phi = check_phi(codim_local_preset(X));
    c.omega = dualizing_model(Xp, DualizingKind::Local).complex();
  } else {
    c.kind = CanonicalDescriptor::Kind::LocallyDualizableOnly;
  }
  return c;
}

std::vector<GradedGroups> canonical_stalks(const FinPoset& X, const CodimFunction& phi) {
  std::vector<GradedGroups> out;
  for (int x = 0; x < X.size(); ++x) {
    GradedGroups g;
    GradedGroups h = reduced_homology(punctured_up(X, x));
    for (const auto& [i, grp] : h.items())
      g.set(static_cast<int>(phi[x]) - 1 - i, grp);
    out.push_back(std::move(g));
  }
  return out;
}

void require_dualizable_local(const FinPoset& X) {
  if (!closed_point(X)) throw PreconditionError("duality needs a local space");
  auto r = sphere_report(X);
  if (!r.is_locally_dualizable) {
    std::string msg = "space is not locally dualizable: " + r.reason();
    if (r.witness) msg += " (" + X.label(r.witness->x) + ", " + X.label(r.witness->y) + ")";
    throw PreconditionError(msg);
  }
}

SheafComplex dualize(const SheafComplex& F) {
  require_dualizable_local(F.base());
  return to_sheaf(hom_into(F, dualizing_model(F.base_ptr(), DualizingKind::Local).costalk));
}

SheafComplex dualize_generic(const SheafComplex& F) {
  require_dualizable_local(F.base());
  return rhom_sheaf(F, dualizing_model(F.base_ptr(), DualizingKind::Local).complex());
}

bool reflexivity_check(const SheafComplex& F) {
  return stalk_cohomology(dualize(dualize(F))) == stalk_cohomology(F);
}

bool verify_closed_restriction(PosetPtr Xp, const std::vector<int>& Y, const std::vector<int>& K) {
  const FinPoset& X = *Xp;
  if (!is_closed(X, K)) throw PreconditionError("K must be closed");
  auto lhs = stalk_cohomology(
      rhom_sheaf(SheafComplex::single(supported_constant(Xp, K)),
                 dualizing_model(Xp, DualizingKind::AlongClosed, Y).complex()));
  auto sub = share(induced(X, K));
  std::vector<int> YK;
  for (int y : Y)
    for (std::size_t i = 0; i < K.size(); ++i)
      if (K[i] == y) YK.push_back(static_cast<int>(i));
  std::sort(YK.begin(), YK.end());
  auto rhs_sub = stalk_cohomology(dualizing_model(sub, DualizingKind::AlongClosed, YK).complex());
  std::vector<GradedGroups> rhs(X.size());
  for (std::size_t i = 0; i < K.size(); ++i) rhs[K[i]] = rhs_sub[i];
  return lhs == rhs;
}

}  // namespace finsheaf
