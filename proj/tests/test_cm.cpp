#include <random>

#include "complexes.hpp"
#include "doctest.h"
#include "finsheaf/cm.hpp"
#include "finsheaf/simplicial.hpp"
#include "fixtures.hpp"
#include "random_sheaves.hpp"

using namespace finsheaf;

namespace {

FgGroup Z(std::size_t r = 1) { return FgGroup(r); }
SheafComplex Zc(const PosetPtr& X) { return SheafComplex::single(constant_sheaf(X)); }

PresentedSheaf torsion_skyscraper(const PosetPtr& X, int x, long order) {
  PresentedSheaf P = presented_from_free(skyscraper(X, x));
  P.relations[x] = IntMatrix{{order}};
  return P;
}

std::vector<PosetPtr> cm_local_family(int max_n) {
  std::vector<PosetPtr> out;
  for (int n = 1; n <= max_n; ++n)
    for (auto& X : enumerate_posets(n))
      if (closed_point(X) && is_cm_space(X).is_cm) out.push_back(share(X));
  return out;
}

}  // namespace

TEST_CASE("support reports") {
  auto v = share(fx::vee());
  int o = v->index("o");
  auto s = support_report(SheafComplex::single(skyscraper(v, o)));
  CHECK(s.support == std::vector<int>{o});
  CHECK(s.dual_support == std::vector<int>{o});
  CHECK(s.dim == 0);
  CHECK(s.depth == 0);

  auto z = support_report(Zc(v));
  CHECK(z.support.size() == 3);
  CHECK(z.dim == 1);
  CHECK(z.depth_at[o] == 1);
  CHECK(z.depth == 1);

  auto a2 = share(fx::affine(2));
  auto t = support_report(SheafComplex::single(supported_constant(a2, {a2->index("12")})));
  CHECK(t.support == std::vector<int>{a2->index("12")});
  CHECK(std::count(t.dual_support.begin(), t.dual_support.end(), a2->index("∅")) == 1);
  CHECK(t.depth_at[a2->index("∅")] == 2);
}

TEST_CASE("support and dual support have the same closure, depth is bounded by dimension") {
  std::mt19937_64 rng(83);
  std::vector<PosetPtr> fam;
  for (int n = 1; n <= 4; ++n)
    for (auto& X : enumerate_posets(n)) fam.push_back(share(X));
  for (int t = 0; t < 10; ++t) fam.push_back(share(random_poset(5 + t % 2, 0.4, rng)));
  for (const auto& X : fam)
    for (int t = 0; t < 3; ++t) {
      auto F = to_complex(fx::random_presented(X, rng));
      auto s = support_report(F);
      CHECK(s.closure == closure(*X, s.dual_support));
      if (s.depth) CHECK(*s.depth <= s.dim);
      CHECK(s.depth.has_value() == !s.support.empty());
    }
}

TEST_CASE("CM sheaf examples on the V poset") {
  auto v = share(fx::vee());
  int o = v->index("o");
  auto sky = is_cm_sheaf(presented_from_free(skyscraper(v, o)));
  CHECK(sky.is_cm);
  CHECK(sky.shift == 0);
  REQUIRE(sky.dual);
  for (int x = 0; x < 3; ++x) CHECK(sky.dual->stalk(x) == (x == o ? Z() : FgGroup()));

  auto zv = is_cm_sheaf(presented_from_free(constant_sheaf(v)));
  CHECK(zv.is_cm);
  CHECK(zv.shift == 1);
  for (int x = 0; x < 3; ++x) CHECK(zv.dual->stalk(x) == Z());

  auto tor = is_cm_sheaf(torsion_skyscraper(v, o, 2));
  CHECK(tor.is_cm);
  CHECK(tor.shift == -1);
  for (int x = 0; x < 3; ++x) CHECK(tor.dual->stalk(x) == (x == o ? FgGroup(0, {2}) : FgGroup()));
  CHECK(cm_sheaf_by_criterion(torsion_skyscraper(v, o, 2))->path == CmPath::TorsionCriterion);
}

TEST_CASE("a mixed generic stalk is never CM") {
  auto pt = share(fx::point());
  PresentedSheaf P;
  P.base = pt;
  P.generators = {2};
  P.relations = {IntMatrix{{2}, {0}}};
  CHECK(generic_type(P) == GenericType::Mixed);
  auto v = is_cm_sheaf(P);
  CHECK_FALSE(v.is_cm);
  REQUIRE(v.witness);
  CHECK(v.witness->point == 0);
  CHECK_FALSE(cm_sheaf_by_criterion(P));
}

TEST_CASE("non-dualizable bases are rejected") {
  auto e = share(fx::e11());
  CHECK_THROWS_AS(is_cm_sheaf(presented_from_free(constant_sheaf(e))), PreconditionError);
  auto c = share(fx::circle());
  CHECK_THROWS_AS(is_cm_sheaf(presented_from_free(constant_sheaf(c))), PreconditionError);
}

TEST_CASE("CM sheaves satisfy the structural conditions") {
  std::mt19937_64 rng(89);
  int free_cm = 0, torsion_cm = 0;
  for (const auto& X : cm_local_family(5))
    for (int t = 0; t < 4; ++t) {
      PresentedSheaf F = t % 2 ? fx::random_presented(X, rng) : presented_from_free(fx::random_sheaf(X, rng));
      if (t == 3) F = torsion_skyscraper(X, static_cast<int>(rng() % X->size()), 3);
      CmVerdict v = is_cm_sheaf(F);  // throws if the two paths disagree
      auto c = cm_sheaf_by_criterion(F);
      if (!v.is_cm || !c || generic_type(F) == GenericType::Zero) continue;
      SupportReport s = support_report(to_complex(F));
      if (c->path == CmPath::FreeCriterion) {
        ++free_cm;
        CHECK(s.is_pure);
        CHECK(v.shift == s.dim);
        for (int x : s.dual_support) CHECK(s.depth_at[x] == s.dim - X->dim_down(x));
        CHECK(s.depth == s.dim);
        for (int x = 0; x < X->size(); ++x) {
          CHECK(v.dual->stalk(x).torsion().empty());
          CHECK(F.stalk(x).torsion().empty());
        }
      } else {
        ++torsion_cm;
        CHECK(v.shift == s.dim - 1);
        for (int x = 0; x < X->size(); ++x)
          CHECK(v.dual->stalk(x) == s.local_cohomology[x].at(s.dim - X->dim_down(x)));
        // D(F^#) = F[-r]
        auto back = stalk_cohomology(dualize(to_complex(*v.dual)));
        for (int x = 0; x < X->size(); ++x)
          CHECK(back[x] == (F.stalk(x).is_zero() ? GradedGroups() : GradedGroups{{-v.shift, F.stalk(x)}}));
      }
    }
  CHECK(free_cm > 10);
  CHECK(torsion_cm > 5);
}

TEST_CASE("CM pure torsion free sheaves have depth equal to dimension") {
  std::mt19937_64 rng(97);
  int cm = 0;
  for (const auto& X : cm_local_family(5))
    for (int t = 0; t < 8; ++t) {
      PresentedSheaf F = presented_from_free(fx::random_sheaf(X, rng));
      if (generic_type(F) != GenericType::TorsionFree || !is_cm_sheaf(F).is_cm) continue;
      ++cm;
      SupportReport s = support_report(to_complex(F));
      CHECK(s.depth == s.dim);
    }
  CHECK(cm > 10);
}

TEST_CASE("depth equal to dimension does not force CM") {
  // Z --2--> Z on A1: depth 1 = dim, but H^1_0 = Z/2 has torsion
  auto a1 = share(affine_space(1));
  std::map<std::pair<int, int>, IntMatrix> covers{{{0, 1}, IntMatrix{{2}}}};
  PresentedSheaf F = presented_from_free(FreeStalkSheaf(a1, {1, 1}, covers));
  SupportReport s = support_report(to_complex(F));
  CHECK(s.is_pure);
  CHECK(s.depth == 1);
  CHECK(s.dim == 1);
  CHECK(s.local_cohomology[0] == GradedGroups{{1, FgGroup(0, {2})}});
  CHECK_FALSE(is_cm_sheaf(F).is_cm);
}

TEST_CASE("CM spaces") {
  for (int n = 0; n <= 4; ++n) CHECK(is_cm_space(affine_space(n)).is_cm);

  auto rp = from_facets(fx::rp2(), false);
  auto v = is_cm_space(rp.poset);
  CHECK(v.gate.is_locally_dualizable);
  CHECK_FALSE(v.is_cm);
  REQUIRE(v.witness);
  CHECK(rp.poset.label(v.witness->point) == "∅");
  CHECK(v.witness->degree == 1);
  CHECK(v.witness->group == FgGroup(0, {2}));

  auto e = is_cm_space(fx::e11());
  CHECK(e.homologically_cm);
  CHECK_FALSE(e.gate.is_locally_dualizable);
  CHECK_FALSE(e.is_cm);
  CHECK_FALSE(e.reason().empty());

  CHECK(is_cm_space(from_facets(fx::rp2(), true).poset).is_cm);
  CHECK(is_cm_space(fx::circle()).is_cm);
  CHECK(is_cm_space(fx::vee()).is_cm);
}

TEST_CASE("open subsets of CM spaces are CM") {
  for (const auto& X : cm_local_family(6))
    for (int x = 0; x < X->size(); ++x) CHECK(is_cm_space(induced(*X, up_set(*X, x).elements)).is_cm);
}

TEST_CASE("Reisner agreement") {
  std::vector<fx::Facets> fam{fx::simplex3(), fx::boundary_simplex3(), fx::hollow_triangle(),
                              fx::four_cycle(),  fx::two_edges(),          fx::rp2()};
  std::mt19937_64 rng(101);
  for (int t = 0; t < 40; ++t) {
    fx::Facets f;
    int k = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) {
      std::vector<std::string> s;
      for (int v = 1; v <= 5; ++v)
        if (rng() % 2) s.push_back(std::to_string(v));
      if (s.empty()) s.push_back("1");
      f.push_back(s);
    }
    fam.push_back(f);
  }
  for (const auto& f : fam) {
    auto K = from_facets(f, false);
    CHECK(is_cm_space(K.poset).is_cm == reisner_check(K.complex).holds);
  }
}

TEST_CASE("canonical sheaves") {
  auto a2 = share(affine_space(2));
  auto w = canonical_sheaf(a2);
  for (int x = 0; x < 4; ++x) CHECK(w.stalk(x) == (x == a2->index("12") ? Z() : FgGroup()));
  auto v = share(fx::vee());
  auto wv = canonical_sheaf(v);
  for (int x = 0; x < 3; ++x) CHECK(wv.stalk(x) == Z());
  CHECK(canonical_sheaf(share(fx::point())).stalk(0) == Z());
  CHECK_THROWS_AS(canonical_sheaf(share(fx::e11())), PreconditionError);
  CHECK_THROWS_AS(canonical_sheaf(share(fx::circle())), PreconditionError);
}

TEST_CASE("canonical sheaves have top local cohomology Z at every point") {
  auto fam = cm_local_family(6);
  fam.push_back(share(affine_space(3)));
  for (const auto& X : fam) {
    int n = X->dim();
    auto w = to_complex(canonical_sheaf(X));
    // D^0 = omega[n]
    CHECK(cohomology_degrees(dualizing_model(X, DualizingKind::Local).complex()) == std::vector<int>{-n});
    for (int x = 0; x < X->size(); ++x) {
      int d = X->dim_up(x);
      CHECK(point_local_cohomology(w, x) == GradedGroups{{d, Z()}});
      // omega_x = H^{d_x}_x(U_x, Z)^*
      auto top = point_local_cohomology(Zc(X), x).at(d);
      CHECK(canonical_sheaf(X).stalk(x) == FgGroup(top.rank()));
    }
  }
}

TEST_CASE("CM closed subsets") {
  auto a2 = share(affine_space(2));
  auto k = is_cm_closed(a2, {a2->index("∅")});
  CHECK(k.is_cm);
  CHECK(k.codim == 2);
  CHECK(k.ext_stalks[a2->index("∅")] == GradedGroups{{2, Z()}});
  CHECK(k.ext_concentrated == true);
  CHECK(k.omega_matches == true);

  auto v = share(fx::vee());
  auto kv = is_cm_closed(v, {v->index("o"), v->index("a")});
  CHECK(kv.is_cm);
  CHECK(kv.codim == 0);
  CHECK(kv.omega_matches == true);

  auto all = is_cm_closed(v, {0, 1, 2});
  CHECK(all.is_cm == is_cm_space(*v).is_cm);
  CHECK_THROWS_AS(is_cm_closed(v, {v->index("a")}), PreconditionError);

  for (const auto& X : cm_local_family(5))
    for (int x = 0; x < X->size(); ++x) {
      auto K = closure(*X, {x});
      auto r = is_cm_closed(X, K);
      CHECK(r.sheaf_verdict == r.space_verdict);
      if (r.space_verdict) {
        CHECK(r.ext_concentrated == true);
        CHECK(r.omega_matches == true);
      }
    }
}

TEST_CASE("omega duality sequences") {
  auto a3 = share(affine_space(3));
  auto r = omega_duality_sequences(a3, Zc(a3));
  CHECK(r.sequences_ok);
  for (const auto& s : r.sequences) CHECK(s.middle.is_zero());
  CHECK(r.punctured_stalks_ok);
  CHECK(r.punctured_duality_ok);

  // hollow triangle with its empty face, inside A^3
  std::vector<int> K;
  for (int x = 0; x < a3->size(); ++x)
    if (a3->label(x) != "123") K.push_back(x);
  auto g = omega_duality_sequences(a3, Zc(a3), K);
  REQUIRE(g.gysin);
  CHECK(g.gysin->codim == 1);
  CHECK(g.gysin->lhs == GradedGroups{{1, Z()}});
  CHECK(g.gysin->ok);
  CHECK(g.gysin->concentrated);

  auto v = share(fx::vee());
  auto gv = omega_duality_sequences(v, Zc(v), {v->index("o")});
  CHECK(gv.gysin->ok);
  CHECK(gv.gysin->lhs == GradedGroups{{1, Z()}});

  std::mt19937_64 rng(103);
  for (const auto& X : cm_local_family(5)) {
    auto F = to_complex(fx::random_presented(X, rng));
    auto rr = omega_duality_sequences(X, F);
    CHECK(rr.sequences_ok);
    CHECK(rr.punctured_stalks_ok);
    CHECK(rr.punctured_duality_ok);
  }
}

TEST_CASE("Baclawski comparison") {
  auto tri = baclawski_report(from_facets(fx::hollow_triangle(), true).poset);
  CHECK(tri.is_cm_baclawski);
  CHECK(tri.is_cm_ours);

  auto rp = baclawski_report(from_facets(fx::rp2(), true).poset);
  CHECK(rp.is_acm);
  CHECK_FALSE(rp.is_cm_baclawski);
  CHECK_FALSE(rp.d);
  CHECK(rp.failed == 'd');
  REQUIRE(rp.witness);
  CHECK(rp.witness->degree == 1);
  CHECK(rp.witness->group == FgGroup(0, {2}));
  CHECK(rp.is_cm_ours);

  auto ch = baclawski_report(fx::chain(2));
  CHECK(ch.is_cm_baclawski);
  CHECK(ch.is_cm_ours);
  // longer chains are bouquets everywhere, but (0,2) = {1} is not a sphere
  auto ch3 = baclawski_report(fx::chain(3));
  CHECK(ch3.is_cm_baclawski);
  CHECK_FALSE(ch3.is_cm_ours);

  for (int n = 1; n <= 5; ++n)
    for (auto& X : enumerate_posets(n)) {
      auto b = baclawski_report(X);
      if (b.is_cm_baclawski) CHECK(b.is_acm);
      if (b.is_acm) CHECK(b.a);
      // ours is exactly spheres plus condition (b)
      auto gate = sphere_report(X);
      CHECK(b.is_cm_ours == (gate.is_locally_dualizable && b.b));
    }
}

TEST_CASE("products and barycentric subdivisions") {
  auto v = fx::vee();
  auto p = cm_product_check(v, v);
  CHECK(p.x);
  CHECK(p.product);
  CHECK(p.holds);

  auto rp = from_facets(fx::rp2(), false).poset;
  auto q = cm_product_check(rp, fx::point());
  CHECK_FALSE(q.product);
  CHECK(q.holds);

  auto b = cm_barycentric_check(affine_space(1));
  CHECK(b.x);
  CHECK(b.x_op);
  CHECK(b.beta);
  CHECK(b.holds);
  CHECK_THROWS_AS(cm_barycentric_check(fx::e11()), PreconditionError);

  for (int n = 1; n <= 4; ++n)
    for (auto& X : enumerate_posets(n))
      if (sphere_report(X).is_locally_dualizable) CHECK(cm_barycentric_check(X).holds);
}
