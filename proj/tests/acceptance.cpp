// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "complexes.hpp"
#include "finsheaf/cm.hpp"
#include "finsheaf/duality.hpp"
#include "finsheaf/simplicial.hpp"
#include "fixtures.hpp"
#include "random_sheaves.hpp"

using namespace finsheaf;

namespace {

// ---- independent group oracles ------------------------------------------

// cyclic orders of a group, 0 standing for Z
std::vector<Integer> cyclic(const FgGroup& g) {
  std::vector<Integer> c(g.rank(), Integer(0));
  c.insert(c.end(), g.torsion().begin(), g.torsion().end());
  return c;
}

Integer gcd0(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// H^n(RHom(E, Z)) = Hom(H^{-n}, Z) + Ext(H^{1-n}, Z)
GradedGroups uc_dual(const GradedGroups& h) {
  GradedGroups out;
  for (const auto& [n, g] : h.items()) {
    if (g.rank()) out.add(-n, FgGroup(g.rank()));
    if (!g.torsion().empty()) out.add(1 - n, FgGroup(0, g.torsion()));
  }
  return out;
}

// H^n(A (x)^L B) = sum_{p+q=n} H^p (x) H^q + sum_{p+q=n+1} Tor(H^p, H^q)
GradedGroups kunneth(const GradedGroups& a, const GradedGroups& b) {
  GradedGroups out;
  for (const auto& [p, g] : a.items())
    for (const auto& [q, h] : b.items()) {
      std::vector<Integer> tens, tor;
      for (const auto& c : cyclic(g))
        for (const auto& d : cyclic(h)) {
          tens.push_back(gcd0(c, d));
          if (c != 0 && d != 0) tor.push_back(gcd0(c, d));
        }
      out.add(p + q, FgGroup::from_cyclic(tens));
      if (!tor.empty()) out.add(p + q - 1, FgGroup::from_cyclic(tor));
    }
  GradedGroups clean;
  for (const auto& [n, g] : out.items())
    if (!g.is_zero()) clean.set(n, g);
  return clean;
}

FgGroup Z(std::size_t r = 1) { return FgGroup(r); }
SheafComplex Zc(const PosetPtr& X) { return SheafComplex::single(constant_sheaf(X)); }
SheafComplex sky(const PosetPtr& X, int x) { return SheafComplex::single(skyscraper(X, x)); }

// ---- families -------------------------------------------------------------

std::vector<PosetPtr> exhaustive(int max_n) {
  std::vector<PosetPtr> out;
  for (int n = 1; n <= max_n; ++n)
    for (auto& X : enumerate_posets(n)) out.push_back(share(X));
  return out;
}

std::vector<PosetPtr> random_family(int count, int lo, int hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PosetPtr> out;
  for (int t = 0; t < count; ++t) {
    int n = lo + t % (hi - lo + 1);
    double p = 0.2 + 0.1 * (t % 5);
    out.push_back(share(random_poset(n, p, rng)));
  }
  return out;
}

// Posets on <= 5 points up to isomorphism plus 200 random ones on 6 or 7.
const std::vector<PosetPtr>& small_family() {
  static std::vector<PosetPtr> fam = [] {
    auto f = exhaustive(5);
    auto r = random_family(200, 6, 7, 2024);
    f.insert(f.end(), r.begin(), r.end());
    return f;
  }();
  return fam;
}

// ---- reporting ------------------------------------------------------------

struct Outcome {
  bool pass = true;
  std::string detail;
  std::ostringstream failures;
  int failures_seen = 0;
  void fail(const std::string& what) {
    if (failures_seen++ < 5) failures << "\n    " << what;
    pass = false;
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

std::string describe(const FinPoset& X) { return poset_to_json(X); }

// ---- criteria -------------------------------------------------------------

void skyscraper_ext(Outcome& o) {
  long pairs = 0;
  for (const auto& X : small_family())
    for (int x = 0; x < X->size(); ++x)
      for (int y : X->strictly_above(x)) {
        ++pairs;
        auto lhs = ext_skyscrapers(*X, x, y);
        auto rhs = rhom_global(sky(X, x), sky(X, y));
        o.expect(lhs == rhs, "Ext(Z_x, Z_y) mismatch on " + describe(*X) + " at " + X->label(x) + "<" + X->label(y));
      }
  o.detail = std::to_string(small_family().size()) + " posets, " + std::to_string(pairs) + " pairs";
}

void local_duality(Outcome& o) {
  std::mt19937_64 rng(77);
  long checks = 0, generic = 0, randoms = 0;
  const auto& fam = small_family();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& X = fam[i];
    auto Y = closure(*X, {static_cast<int>(rng() % X->size())});
    auto K = closure(*X, {static_cast<int>(rng() % X->size())});
    auto model = dualizing_model(X, DualizingKind::AlongClosed, Y);
    std::vector<SheafComplex> Fs{Zc(X), SheafComplex::single(supported_constant(X, K))};
    for (int x = 0; x < X->size(); ++x) Fs.push_back(sky(X, x));
    // the random sheaves are spread over the family, at least 50 in all
    int extra = i % 4 == 0 ? 1 : 0;
    for (int t = 0; t < extra; ++t, ++randoms) Fs.push_back(SheafComplex::single(fx::random_sheaf(X, rng, 2)));
    for (const auto& F : Fs) {
      auto expected = uc_dual(local_cohomology(F, Y));
      auto costalk = homology_of(hom_into(F, model.costalk).global_sections());
      o.expect(costalk == expected, "costalk engine: duality fails on " + describe(*X));
      ++checks;
      if (X->size() <= 4) {
        o.expect(rhom_global(F, model.complex()) == expected, "generic engine: duality fails on " + describe(*X));
        ++generic;
      }
    }
  }
  o.expect(randoms >= 50, "fewer than 50 random sheaves");
  o.detail = std::to_string(checks) + " sheaves (" + std::to_string(randoms) + " random), " +
             std::to_string(generic) + " also through the generic engine";
}

void affine_dualizing(Outcome& o) {
  for (int n = 1; n <= 4; ++n) {
    auto X = share(affine_space(n));
    auto h = stalk_cohomology(dualizing_model(X, DualizingKind::Local).complex());
    int top = *generic_point(*X);
    for (int x = 0; x < X->size(); ++x) {
      GradedGroups want = x == top ? GradedGroups{{-n, Z()}} : GradedGroups{};
      o.expect(h[x] == want, "A^" + std::to_string(n) + " at " + X->label(x) + ": " + h[x].to_string());
    }
  }
  o.detail = "n = 1..4";
}

void reisner(Outcome& o) {
  std::vector<std::pair<std::string, fx::Facets>> fam{
      {"simplex", fx::simplex3()},  {"boundary of simplex", fx::boundary_simplex3()},
      {"hollow triangle", fx::hollow_triangle()}, {"4-cycle", fx::four_cycle()},
      {"RP2", fx::rp2()},           {"two edges", fx::two_edges()}};
  for (const auto& [name, f] : fam) {
    FacePoset fp = from_facets(f, false);
    auto ours = is_cm_space(fp.poset);
    auto theirs = reisner_check(fp.complex);
    o.expect(ours.is_cm == theirs.holds, name + ": verdicts differ");
    if (name == "RP2") {
      o.expect(!ours.is_cm, "RP2 reported CM");
      o.expect(ours.witness && ours.witness->point >= 0 && fp.poset.label(ours.witness->point) == "∅",
               "RP2 witness not at the empty face");
      o.expect(ours.witness && ours.witness->group == FgGroup(0, {Integer(2)}), "RP2 witness group is not Z/2");
      o.expect(theirs.face && theirs.face->empty() && theirs.group == FgGroup(0, {Integer(2)}),
               "Reisner witness for RP2 is not Z/2 at the empty face");
    }
  }
  o.detail = std::to_string(fam.size()) + " complexes";
}

void baclawski(Outcome& o) {
  FacePoset fp = from_facets(fx::rp2(), true);
  auto r = baclawski_report(fp.poset);
  o.expect(r.is_cm_ours, "projective RP2 is not CM in our sense");
  o.expect(!r.is_cm_baclawski, "projective RP2 is Baclawski CM");
  o.expect(r.a && r.b && r.c && !r.d, "failure is not exactly at the whole-space condition");
  o.expect(r.is_acm, "ACM fails");
  // the failing group, recomputed from the order complex of the whole poset
  o.expect(reduced_homology(fp.poset) == GradedGroups{{1, FgGroup(0, {Integer(2)})}}, "H~(X) is not Z/2 in degree 1");
  o.expect(r.witness && r.witness->degree == 1 && r.witness->group == FgGroup(0, {Integer(2)}),
           "witness is not Z/2 in degree 1");
  o.detail = "projective RP2: ours CM, ACM, Baclawski fails at (d) with Z/2";
}

void barycentric_theorems(Outcome& o) {
  auto fam = exhaustive(5);
  auto r = random_family(100, 3, 7, 606);
  fam.insert(fam.end(), r.begin(), r.end());
  long dualizable = 0;
  for (const auto& X : fam) {
    FinPoset B = barycentric(*X);
    o.expect(reduced_homology(B) == reduced_homology(*X), "H~(beta X) differs on " + describe(*X));
    bool bx = is_cm_space(B).is_cm;
    bool x = is_cm_space(*X).is_cm, xop = is_cm_space(opposite(*X)).is_cm;
    if (sphere_report(*X).is_locally_dualizable) {
      ++dualizable;
      o.expect(bx == (x && xop), "beta CM iff X and X^op CM fails on " + describe(*X));
    } else {
      // outside the theorem's hypothesis; beta X may still be CM (chain of 3)
      o.expect(!x, "a non-dualizable space reported CM: " + describe(*X));
    }
  }
  o.detail = std::to_string(fam.size()) + " posets, " + std::to_string(dualizable) + " locally dualizable";
}

void product_theorems(Outcome& o) {
  std::vector<std::pair<std::string, PosetPtr>> fam{
      {"point", share(fx::point())}, {"chain", share(fx::chain(2))}, {"V", share(fx::vee())},
      {"circle", share(fx::circle())}, {"A1", share(fx::affine(1))}, {"A2", share(fx::affine(2))}};
  std::mt19937_64 rng(707);
  int pairs = 0;
  for (const auto& [nx, X] : fam)
    for (const auto& [ny, Y] : fam) {
      ++pairs;
      std::string tag = nx + " x " + ny;
      auto XY = share(product(*X, *Y));
      for (int t = 0; t < 2; ++t) {
        SheafComplex F = t ? to_complex(fx::random_presented(X, rng)) : SheafComplex::single(fx::random_sheaf(X, rng));
        SheafComplex G = SheafComplex::single(fx::random_sheaf(Y, rng));
        o.expect(global_cohomology(external_product(F, G)) == kunneth(global_cohomology(F), global_cohomology(G)),
                 tag + ": Kunneth fails");
      }
      std::vector<DualizingKind> kinds{DualizingKind::Global};
      if (closed_point(*X) && closed_point(*Y)) kinds.push_back(DualizingKind::Local);
      for (auto kind : kinds) {
        auto dx = stalk_cohomology(dualizing_model(X, kind).complex());
        auto dy = stalk_cohomology(dualizing_model(Y, kind).complex());
        auto dxy = stalk_cohomology(dualizing_model(XY, kind).complex());
        for (int x = 0; x < X->size(); ++x)
          for (int y = 0; y < Y->size(); ++y)
            o.expect(dxy[x * Y->size() + y] == kunneth(dx[x], dy[y]),
                     tag + ": dualizing stalk at (" + X->label(x) + "," + Y->label(y) + ")");
      }
      bool cx = is_cm_space(*X).is_cm, cy = is_cm_space(*Y).is_cm, cxy = is_cm_space(*XY).is_cm;
      o.expect(cxy == (cx && cy), tag + ": CM(X x Y) iff CM(X) and CM(Y) fails");
    }
  o.detail = std::to_string(pairs) + " pairs";
}

void reflexivity(Outcome& o) {
  long spaces = 0;
  for (const auto& X : exhaustive(6)) {
    if (!closed_point(*X) || !sphere_report(*X).is_locally_dualizable) continue;
    ++spaces;
    for (int x = 0; x < X->size(); ++x) {
      auto dd = stalk_cohomology(dualize(dualize(sky(X, x))));
      for (int z = 0; z < X->size(); ++z) {
        GradedGroups want = z == x ? GradedGroups{{0, Z()}} : GradedGroups{};
        o.expect(dd[z] == want, "DD(Z_x) differs on " + describe(*X) + " at " + X->label(x));
      }
    }
  }
  auto e11 = share(fx::e11());
  o.expect(!sphere_report(*e11).is_locally_dualizable, "E11 passes the sphere gate");
  bool rejected = false;
  try {
    dualize(sky(e11, 0));
  } catch (const PreconditionError&) {
    rejected = true;
  }
  o.expect(rejected, "E11 was dualized");
  o.detail = std::to_string(spaces) + " local dualizable posets; E11 rejected";
}

void canonical_contracts(Outcome& o) {
  std::vector<std::pair<std::string, PosetPtr>> fam{
      {"point", share(fx::point())}, {"V", share(fx::vee())}, {"A1", share(affine_space(1))},
      {"A2", share(affine_space(2))}, {"A3", share(affine_space(3))}};
  for (const auto& f : {fx::simplex3(), fx::boundary_simplex3(), fx::hollow_triangle(), fx::four_cycle()})
    fam.push_back({"face poset", share(from_facets(f, false).poset)});
  for (const auto& [name, X] : fam) {
    if (!is_cm_space(*X).is_cm) {
      o.fail(name + " is not CM");
      continue;
    }
    auto w = to_complex(canonical_sheaf(X));
    for (int x = 0; x < X->size(); ++x) {
      int d = X->dim() - induced(*X, down_set(*X, x).elements).dim();
      o.expect(point_local_cohomology(w, x) == GradedGroups{{d, Z()}},
               name + ": top local cohomology at " + X->label(x));
    }
  }
  // Gysin: the hollow triangle with its empty face sits in A^3 in codimension 1
  auto a3 = share(affine_space(3));
  std::vector<int> K;
  for (int x = 0; x < a3->size(); ++x)
    if (a3->label(x) != "123") K.push_back(x);
  auto k = share(induced(*a3, K));
  auto lhs = local_cohomology(to_complex(canonical_sheaf(a3)), K);
  auto rhs = global_cohomology(to_complex(canonical_sheaf(k))).shifted(-1);
  o.expect(lhs.concentrated_in(1), "Gysin: local cohomology not concentrated in degree 1: " + lhs.to_string());
  o.expect(lhs == rhs, "Gysin: local cohomology differs from the shifted cohomology of omega_K");
  auto rep = omega_duality_sequences(a3, Zc(a3), K);
  o.expect(rep.gysin && rep.gysin->ok && rep.gysin->codim == 1 && rep.gysin->concentrated, "Gysin report");
  o.detail = std::to_string(fam.size()) + " CM fixtures; Gysin for the hollow triangle in A3 at d = 1";
}

void two_paths(Outcome& o) {
  std::vector<PosetPtr> fam;
  for (const auto& X : exhaustive(6))
    if (closed_point(*X) && is_cm_space(*X).is_cm) fam.push_back(X);
  std::mt19937_64 rng(1010);
  int applied = 0, cm = 0;
  for (int t = 0; t < 100; ++t) {
    const auto& X = fam[rng() % fam.size()];
    PresentedSheaf F = t % 2 ? fx::random_presented(X, rng) : presented_from_free(fx::random_sheaf(X, rng));
    auto dual = cm_sheaf_by_duality(F);
    auto crit = cm_sheaf_by_criterion(F);
    if (dual.is_cm) ++cm;
    if (!crit) continue;
    ++applied;
    o.expect(crit->is_cm == dual.is_cm, "verdicts differ on a sheaf over " + describe(*X));
    if (crit->is_cm && dual.is_cm) o.expect(crit->shift == dual.shift, "shifts differ over " + describe(*X));
  }
  o.expect(applied > 0, "the criterion never applied");
  o.detail = "100 sheaves over " + std::to_string(fam.size()) + " CM local posets; criterion applied to " +
             std::to_string(applied) + ", " + std::to_string(cm) + " CM";
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  std::vector<Criterion> all{
      {1, "skyscraper Ext by the interval formula", 120, skyscraper_ext},
      {2, "local duality", 300, local_duality},
      {3, "dualizing complex of A^n", 30, affine_dualizing},
      {4, "Reisner equivalence", 60, reisner},
      {5, "Baclawski divergence", 60, baclawski},
      {6, "barycentric subdivision", 300, barycentric_theorems},
      {7, "products", 180, product_theorems},
      {8, "reflexivity on skyscrapers", 120, reflexivity},
      {9, "canonical sheaf contracts", 60, canonical_contracts},
      {10, "CM sheaf verdicts by two paths", 300, two_paths},
  };
  bool all_pass = true;
  for (const auto& c : all) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.fail("over the time budget of " + std::to_string(static_cast<int>(c.budget_s)) + " s");
    all_pass = all_pass && o.pass;
    char t[32];
    std::snprintf(t, sizeof t, "%.2fs", secs);
    std::cout << "criterion " << c.id << " [" << (o.pass ? "PASS" : "FAIL") << "] " << c.name << " (" << t
              << "): " << o.detail << o.failures.str() << std::endl;
  }
  std::cout << (all_pass ? "all criteria pass" : "some criteria fail") << std::endl;
  return all_pass ? 0 : 1;
}
