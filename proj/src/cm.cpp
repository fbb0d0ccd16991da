#include "finsheaf/cm.hpp"

#include <algorithm>
#include <stdexcept>

namespace finsheaf {

namespace {

std::vector<int> maximal_of(const FinPoset& X, const std::vector<int>& s) {
  std::vector<int> out;
  for (int x : s) {
    bool top = true;
    for (int y : s)
      if (X.lt(x, y)) top = false;
    if (top) out.push_back(x);
  }
  return out;
}

std::vector<int> presented_support(const PresentedSheaf& F) {
  std::vector<int> s;
  for (int x = 0; x < F.base->size(); ++x)
    if (!F.stalk(x).is_zero()) s.push_back(x);
  return s;
}

int dim_of(const FinPoset& X, const std::vector<int>& s) {
  int d = -1;
  for (int x : s) d = std::max(d, X.dim_down(x));
  return d;
}

std::optional<CmWitness> first_nonzero_except(const std::vector<GradedGroups>& stalks, int keep, const char* what) {
  for (std::size_t x = 0; x < stalks.size(); ++x)
    for (const auto& [n, g] : stalks[x].items())
      if (n != keep) return CmWitness{static_cast<int>(x), n, g, what};
  return std::nullopt;
}

}  // namespace

SupportReport support_report(const SheafComplex& F) {
  const FinPoset& X = F.base();
  SupportReport r;
  auto h = stalk_cohomology(F);
  for (int x = 0; x < X.size(); ++x) {
    if (!h[x].is_zero()) r.support.push_back(x);
    r.local_cohomology.push_back(point_local_cohomology(F, x));
    const auto& lc = r.local_cohomology.back();
    if (lc.is_zero()) {
      r.depth_at.push_back(std::nullopt);
    } else {
      r.dual_support.push_back(x);
      r.depth_at.push_back(lc.items().begin()->first);
    }
  }
  r.closure = closure(X, r.support);
  r.dim = dim_of(X, r.closure);
  for (int g : maximal_of(X, r.support))
    if (X.dim_down(g) != r.dim) r.is_pure = false;
  for (int x : r.dual_support) {
    int v = *r.depth_at[x] + X.dim_down(x);
    if (!r.depth || v < *r.depth) r.depth = v;
  }
  return r;
}

std::string to_string(CmPath p) {
  switch (p) {
    case CmPath::Duality: return "duality";
    case CmPath::FreeCriterion: return "free-criterion";
    case CmPath::TorsionCriterion: return "torsion-criterion";
  }
  return "";
}

GenericType generic_type(const PresentedSheaf& F) {
  auto s = presented_support(F);
  if (s.empty()) return GenericType::Zero;
  bool free = true, torsion = true;
  for (int g : maximal_of(*F.base, s)) {
    FgGroup G = F.stalk(g);
    if (!G.torsion().empty()) free = false;
    if (G.rank() != 0) torsion = false;
  }
  if (free) return GenericType::TorsionFree;
  if (torsion) return GenericType::Torsion;
  return GenericType::Mixed;
}

bool is_torsion_sheaf(const PresentedSheaf& F) {
  for (int x = 0; x < F.base->size(); ++x)
    if (F.stalk(x).rank() != 0) return false;
  return true;
}

CmVerdict cm_sheaf_by_duality(const PresentedSheaf& F) {
  const FinPoset& X = *F.base;
  require_dualizable_local(X);
  CmVerdict v;
  v.path = CmPath::Duality;
  GenericType gt = generic_type(F);
  if (gt == GenericType::Zero) {
    v.is_cm = true;
    v.dual = F;
    v.reason = "zero sheaf";
    return v;
  }
  int n = dim_of(X, presented_support(F));
  SheafComplex D = dualize(to_complex(F));
  auto degs = cohomology_degrees(D);
  if (degs.size() == 1) {
    v.is_cm = true;
    v.shift = -degs[0];
    v.dual = cohomology_sheaf(D, degs[0]);
    return v;
  }
  if (gt == GenericType::Mixed) {
    for (int g : maximal_of(X, presented_support(F))) {
      FgGroup G = F.stalk(g);
      if (G.rank() != 0 && !G.torsion().empty()) {
        v.witness = CmWitness{g, 0, G, "generic stalk is neither free nor torsion"};
        break;
      }
    }
    v.reason = "mixed generic stalks";
  } else {
    v.reason = "the dual has cohomology in several degrees";
  }
  if (!v.witness) {
    int expected = gt == GenericType::Torsion ? -(n - 1) : -n;
    v.witness = first_nonzero_except(stalk_cohomology(D), expected, "cohomology of the dual off the expected degree");
  }
  return v;
}

std::optional<CmVerdict> cm_sheaf_by_criterion(const PresentedSheaf& F) {
  GenericType gt = generic_type(F);
  bool torsion = gt == GenericType::Torsion && is_torsion_sheaf(F);
  if (gt != GenericType::TorsionFree && !torsion) return std::nullopt;
  const FinPoset& X = *F.base;
  CmVerdict v;
  v.path = torsion ? CmPath::TorsionCriterion : CmPath::FreeCriterion;
  SupportReport s = support_report(to_complex(F));
  int n = s.dim;
  if (!s.is_pure) {
    for (int g : maximal_of(X, s.support))
      if (X.dim_down(g) != n) {
        v.witness = CmWitness{g, 0, F.stalk(g), "support is not pure"};
        break;
      }
    v.reason = "support is not pure";
    return v;
  }
  for (int x = 0; x < X.size(); ++x) {
    int d = n - X.dim_down(x);
    for (const auto& [i, g] : s.local_cohomology[x].items()) {
      if (i != d) {
        v.witness = CmWitness{x, i, g, "local cohomology off d_x"};
        v.reason = "local cohomology off d_x";
        return v;
      }
      if (!torsion && !g.torsion().empty()) {
        v.witness = CmWitness{x, i, g, "torsion in the top local cohomology"};
        v.reason = "torsion in the top local cohomology";
        return v;
      }
    }
  }
  v.is_cm = true;
  v.shift = torsion ? n - 1 : n;
  return v;
}

CmVerdict is_cm_sheaf(const PresentedSheaf& F) {
  CmVerdict d = cm_sheaf_by_duality(F);
  auto c = cm_sheaf_by_criterion(F);
  if (c && (c->is_cm != d.is_cm || (c->is_cm && c->shift != d.shift)))
    throw std::logic_error("CM verdicts disagree between the duality and the " + to_string(c->path) + " paths");
  return d;
}

std::string CmSpaceVerdict::reason() const {
  if (!gate.is_locally_dualizable) return "not locally dualizable: " + gate.reason();
  if (!homologically_cm) return "reduced homology of U_x^* below its dimension";
  return "";
}

CmSpaceVerdict is_cm_space(const FinPoset& X) {
  CmSpaceVerdict v;
  v.gate = sphere_report(X);
  v.is_local = closed_point(X).has_value();
  for (int x = 0; x < X.size(); ++x) {
    PointCheck p;
    p.x = x;
    p.dim = X.dim_up(x) - 1;
    p.homology = reduced_homology(punctured_up(X, x));
    for (const auto& [i, g] : p.homology.items())
      if (i != p.dim) {
        p.ok = false;
        if (!v.witness) v.witness = CmWitness{x, i, g, "reduced homology of U_x^* below its dimension"};
      }
    v.homologically_cm = v.homologically_cm && p.ok;
    v.points.push_back(std::move(p));
  }
  v.is_cm = v.gate.is_locally_dualizable && v.homologically_cm;
  if (!v.gate.is_locally_dualizable && v.gate.witness) {
    const auto& w = *v.gate.witness;
    v.witness = CmWitness{w.x, w.dim, w.homology.at(w.dim), "open interval to " + X.label(w.y) + " is not a sphere"};
    for (const auto& [i, g] : w.homology.items())
      if (i != w.dim) v.witness = CmWitness{w.x, i, g, "open interval to " + X.label(w.y) + " is not a sphere"};
  }
  return v;
}

PresentedSheaf canonical_sheaf(PosetPtr X) {
  if (!closed_point(*X)) throw PreconditionError("the canonical sheaf is extracted on local spaces");
  auto v = is_cm_space(*X);
  if (!v.is_cm) throw PreconditionError("space is not Cohen-Macaulay: " + v.reason());
  return cohomology_sheaf(dualizing_model(X, DualizingKind::Local).complex(), -X->dim());
}

CmClosedVerdict is_cm_closed(PosetPtr Xp, const std::vector<int>& K) {
  const FinPoset& X = *Xp;
  if (K.empty() || !is_closed(X, K)) throw PreconditionError("K must be a nonempty closed subset");
  require_dualizable_local(X);
  CmClosedVerdict v;
  auto ZK = supported_constant(Xp, K);
  v.sheaf_verdict = is_cm_sheaf(presented_from_free(ZK)).is_cm;
  auto sub = share(induced(X, K));
  v.space_verdict = is_cm_space(*sub).is_cm;
  v.is_cm = v.sheaf_verdict;
  v.codim = X.dim() - sub->dim();
  if (!is_cm_space(X).is_cm) return v;
  SheafComplex E = rhom_sheaf(SheafComplex::single(ZK), to_complex(canonical_sheaf(Xp)));
  v.ext_stalks = stalk_cohomology(E);
  v.ext_concentrated = cohomology_degrees(E) == std::vector<int>{v.codim};
  if (v.space_verdict) {
    PresentedSheaf wK = canonical_sheaf(sub);
    bool same = true;
    std::vector<char> in(X.size(), 0);
    for (std::size_t i = 0; i < K.size(); ++i) {
      in[K[i]] = 1;
      FgGroup g = wK.stalk(static_cast<int>(i));
      GradedGroups expect;
      if (!g.is_zero()) expect.set(v.codim, g);
      same = same && v.ext_stalks[K[i]] == expect;
    }
    for (int x = 0; x < X.size(); ++x)
      if (!in[x]) same = same && v.ext_stalks[x].is_zero();
    v.omega_matches = same;
  }
  return v;
}

OmegaReport omega_duality_sequences(PosetPtr Xp, const SheafComplex& F, const std::vector<int>& K) {
  const FinPoset& X = *Xp;
  auto o = closed_point(X);
  if (!o) throw PreconditionError("the omega sequences need a local space");
  SheafComplex w = to_complex(canonical_sheaf(Xp));
  OmegaReport r;
  int n = r.dim = X.dim();

  GradedGroups H0 = local_cohomology(F, {*o});
  GradedGroups ext = rhom_global(F, w);
  std::vector<int> degrees;
  for (const auto& [j, g] : H0.items()) {
    degrees.push_back(n - j);
    degrees.push_back(n + 1 - j);
  }
  for (const auto& [i, g] : ext.items()) degrees.push_back(i);
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  r.sequences_ok = true;
  for (int i : degrees) {
    SequenceCheck s;
    s.degree = i;
    s.left = FgGroup(0, H0.at(n + 1 - i).torsion());
    s.right = FgGroup(H0.at(n - i).rank());
    s.middle = ext.at(i);
    // the sequence splits: the right-hand group is free
    s.ok = s.middle == direct_sum(s.left, s.right);
    r.sequences_ok = r.sequences_ok && s.ok;
    r.sequences.push_back(std::move(s));
  }

  std::vector<int> rest;
  for (int x = 0; x < X.size(); ++x)
    if (x != *o) rest.push_back(x);
  if (rest.empty()) {
    r.punctured_stalks_ok = r.punctured_duality_ok = true;
  } else {
    auto star = share(induced(X, rest));
    SheafComplex ws = shift(restrict_complex(w, star, rest), n - 1);
    r.punctured_stalks_ok =
        stalk_cohomology(ws) == stalk_cohomology(dualizing_model(star, DualizingKind::Global).complex());
    SheafComplex Fs = restrict_complex(F, star, rest);
    r.punctured_duality_ok = rhom_global(Fs, ws) == dual_graded(global_cohomology(Fs));
  }

  if (!K.empty()) {
    if (!is_closed(X, K)) throw PreconditionError("K must be closed");
    auto sub = share(induced(X, K));
    GysinCheck g;
    g.codim = n - sub->dim();
    g.lhs = local_cohomology(w, K);
    g.rhs = global_cohomology(to_complex(canonical_sheaf(sub))).shifted(-g.codim);
    g.ok = g.lhs == g.rhs;
    g.concentrated = g.lhs.concentrated_in(g.codim);
    r.gysin = g;
  }
  return r;
}

bool is_bouquet(const FinPoset& P) {
  int d = P.dim();
  GradedGroups h = reduced_homology(P);
  for (const auto& [i, g] : h.items())
    if (i < d) return false;
  return true;
}

BaclawskiReport baclawski_report(const FinPoset& X) {
  BaclawskiReport r;
  FinPoset H = with_bounds(X);
  int bot = *closed_point(H), top = *generic_point(H);
  auto fail = [&](char which, int point, const FinPoset& I) {
    bool& flag = which == 'a' ? r.a : which == 'b' ? r.b : which == 'c' ? r.c : r.d;
    flag = false;
    if (r.failed && r.failed <= which) return;
    r.failed = which;
    int d = I.dim();
    GradedGroups h = reduced_homology(I);
    for (const auto& [i, g] : h.items())
      if (i < d) {
        r.witness = CmWitness{point, i, g, std::string("condition (") + which + "')"};
        break;
      }
  };
  for (int x = 0; x < H.size(); ++x)
    for (int y : H.strictly_above(x)) {
      FinPoset I = open_interval(H, x, y);
      if (is_bouquet(I)) continue;
      if (x == bot && y == top) {
        fail('d', -1, I);
      } else if (x == bot) {
        fail('c', X.index(H.label(y)), I);
      } else if (y == top) {
        fail('b', X.index(H.label(x)), I);
      } else {
        fail('a', X.index(H.label(x)), I);
      }
    }
  r.is_acm = r.a && r.b && r.c;
  r.is_cm_baclawski = r.is_acm && r.d;
  r.is_cm_ours = is_cm_space(X).is_cm;
  return r;
}

ProductCheck cm_product_check(const FinPoset& X, const FinPoset& Y) {
  ProductCheck c;
  c.x = is_cm_space(X).is_cm;
  c.y = is_cm_space(Y).is_cm;
  c.product = is_cm_space(product(X, Y)).is_cm;
  c.holds = c.product == (c.x && c.y);
  return c;
}

BarycentricCheck cm_barycentric_check(const FinPoset& X) {
  if (!sphere_report(X).is_locally_dualizable) throw PreconditionError("space is not locally dualizable");
  BarycentricCheck c;
  c.x = is_cm_space(X).is_cm;
  c.x_op = is_cm_space(opposite(X)).is_cm;
  c.beta = is_cm_space(barycentric(X)).is_cm;
  c.holds = c.beta == (c.x && c.x_op);
  return c;
}

}  // namespace finsheaf
