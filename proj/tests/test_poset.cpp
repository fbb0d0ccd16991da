#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "finsheaf/poset.hpp"
#include "fixtures.hpp"

using namespace finsheaf;

namespace {

// Lengths of all saturated chains from x to y, by walking covers.
std::set<int> saturated_lengths(const FinPoset& X, int x, int y) {
  std::set<int> out;
  std::function<void(int, int)> walk = [&](int z, int len) {
    if (z == y) {
      out.insert(len);
      return;
    }
    for (int w : X.upper_covers(z))
      if (X.leq(w, y)) walk(w, len + 1);
  };
  walk(x, 0);
  return out;
}

bool brute_catenary(const FinPoset& X) {
  for (int x = 0; x < X.size(); ++x)
    for (int y = 0; y < X.size(); ++y)
      if (X.leq(x, y) && saturated_lengths(X, x, y).size() > 1) return false;
  return true;
}

int brute_dim(const FinPoset& X) {
  int best = -1;
  for_each_chain(X, {}, [&](const Chain& c) { best = std::max(best, static_cast<int>(c.size()) - 1); });
  return best;
}

}  // namespace

TEST_CASE("intervals and stars") {
  FinPoset a3 = fx::affine(3);
  auto I = open_interval(a3, a3.index("∅"), a3.index("123"));
  CHECK(I.size() == 6);
  CHECK(I.find("∅") == std::nullopt);
  CHECK(I.find("123") == std::nullopt);

  FinPoset v = fx::vee();
  CHECK(up_set(v, v.index("o")).elements.size() == 3);
  CHECK(down_set(v, v.index("a")).elements == std::vector<int>{v.index("o"), v.index("a")});
  CHECK_THROWS_AS(open_interval(v, v.index("a"), v.index("b")), PreconditionError);
}

TEST_CASE("empty open interval exactly at covers") {
  for (int n = 1; n <= 5; ++n)
    for (const FinPoset& X : enumerate_posets(n))
      for (int x = 0; x < X.size(); ++x)
        for (int y = 0; y < X.size(); ++y)
          if (X.lt(x, y)) CHECK((open_interval_elements(X, x, y).empty() == X.is_cover(x, y)));
}

TEST_CASE("structure reports") {
  auto r = structure_report(fx::vee());
  CHECK(r.dim == 1);
  CHECK(r.is_local);
  CHECK_FALSE(r.is_irreducible);
  CHECK(r.is_pure);
  CHECK(r.is_catenary);

  auto p = structure_report(fx::point());
  CHECK(p.dim == 0);
  CHECK(p.is_local);
  CHECK(p.is_irreducible);
  CHECK(p.is_pure);
  CHECK(p.is_catenary);
  CHECK(p.is_connected);

  FinPoset p5 = fx::p5();
  CHECK_FALSE(is_catenary(p5));
  CHECK(saturated_lengths(p5, p5.index("o"), p5.index("c")) == std::set<int>{2, 3});

  CHECK(structure_report(fx::empty()).dim == -1);
}

TEST_CASE("catenarity and dimension agree with brute force on all small posets") {
  for (int n = 1; n <= 5; ++n)
    for (const FinPoset& X : enumerate_posets(n)) {
      CHECK(is_catenary(X) == brute_catenary(X));
      CHECK(X.dim() == brute_dim(X));
    }
}

TEST_CASE("codimension functions") {
  FinPoset c = fx::chain(3);
  auto d = codimension_function(c, {{c.index("2"), 0}});
  REQUIRE(d);
  CHECK(*d == CodimFunction{2, 1, 0});
  CHECK_FALSE(codimension_function(fx::p5()));

  FinPoset a2 = fx::affine(2);
  auto loc = codim_local_preset(a2);
  CHECK(loc[a2.index("∅")] == 0);
  CHECK(loc[a2.index("1")] == -1);
  CHECK(loc[a2.index("2")] == -1);
  CHECK(loc[a2.index("12")] == -2);
  CHECK(is_codimension_function(a2, loc));
  auto irr = codim_irreducible_preset(a2);
  CHECK(irr[a2.index("∅")] == 2);
  CHECK(irr[a2.index("12")] == 0);

  FinPoset two = fx::make({"a", "b", "c"}, {{"a", "b"}});
  CHECK_THROWS_AS(codimension_function(two, {{0, 0}, {1, 3}}), PreconditionError);
}

TEST_CASE("a codimension function forces catenarity") {
  for (int n = 1; n <= 5; ++n)
    for (const FinPoset& X : enumerate_posets(n)) {
      auto d = codimension_function(X);
      if (d) {
        CHECK(brute_catenary(X));
        CHECK(is_codimension_function(X, *d));
      }
    }
}

TEST_CASE("opposite, product and barycentric subdivision") {
  CHECK(are_isomorphic(barycentric(fx::point()), fx::point()));
  CHECK(are_isomorphic(product(fx::affine(1), fx::affine(1)), fx::affine(2)));
  FinPoset b = barycentric(fx::circle());
  CHECK(b.size() == 8);
  CHECK(b.dim() == 1);

  for (int n = 1; n <= 4; ++n)
    for (const FinPoset& X : enumerate_posets(n)) {
      FinPoset op = opposite(X);
      CHECK(opposite(op) == X);
      CHECK(op.dim() == X.dim());
      CHECK(barycentric(X).dim() == X.dim());
      CHECK(product(X, fx::chain(2)).dim() == X.dim() + 1);
      CHECK(static_cast<std::size_t>(barycentric(X).size()) == count_chains(X));
    }
}

TEST_CASE("chain enumeration") {
  FinPoset v = fx::vee();
  ChainConstraints c;
  c.max_length = 1;
  auto cs = chains(v, c);
  CHECK(cs.size() == 5);
  CHECK(std::is_sorted(cs.begin(), cs.end()));
  std::set<std::string> labels;
  for (const auto& ch : cs) labels.insert(chain_label(v, ch));
  CHECK(labels == std::set<std::string>{"[o]", "[a]", "[b]", "[o<a]", "[o<b]"});

  FinPoset a2 = fx::affine(2);
  ChainConstraints from_empty;
  from_empty.first = a2.index("∅");
  std::vector<Chain> long_ones;
  for (const auto& ch : chains(a2, from_empty))
    if (ch.size() == 3) long_ones.push_back(ch);
  CHECK(long_ones.size() == 2);

  CHECK(chains(fx::point()).size() == 1);

  // chain counts of A^2 by length
  std::vector<int> by_len(3, 0);
  for (const auto& ch : chains(a2)) ++by_len[ch.size() - 1];
  CHECK(by_len == std::vector<int>{4, 5, 2});
}

TEST_CASE("enumeration counts posets up to isomorphism") {
  std::vector<std::size_t> expected{1, 1, 2, 5, 16, 63};
  for (int n = 0; n <= 5; ++n) {
    auto all = enumerate_posets(n);
    CHECK(all.size() == expected[n]);
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j) CHECK_FALSE(are_isomorphic(all[i], all[j]));
  }
}

TEST_CASE("random posets are valid orders") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    FinPoset X = random_poset(6 + t % 2, 0.35, rng);
    CHECK(X.size() == 6 + t % 2);
    for (int x = 0; x < X.size(); ++x)
      for (int y = 0; y < X.size(); ++y)
        for (int z = 0; z < X.size(); ++z)
          if (X.leq(x, y) && X.leq(y, z)) CHECK(X.leq(x, z));
  }
}

TEST_CASE("text and JSON formats round-trip") {
  for (const FinPoset& X : {fx::vee(), fx::affine(3), fx::p5(), fx::point(), fx::empty()}) {
    CHECK(parse_poset_text(poset_to_text(X)) == X);
    CHECK(parse_poset_json(poset_to_json(X)) == X);
  }
  FinPoset t = parse_poset_text("# comment\na < b < c\na < d\ne\n");
  CHECK(t.size() == 5);
  CHECK(t.leq(t.index("a"), t.index("c")));
  CHECK_THROWS_AS(parse_poset_text("a < b\nb < a\n"), PreconditionError);
  CHECK_THROWS_AS(parse_poset_json("{\"elements\": [\"a\"], \"covers\": [[\"a\", \"z\"]]}"), PreconditionError);
}

TEST_CASE("subspace kinds") {
  FinPoset a2 = fx::affine(2);
  CHECK(is_closed(a2, {a2.index("∅"), a2.index("1")}));
  CHECK(is_open(a2, {a2.index("12"), a2.index("2")}));
  CHECK(is_locally_closed(a2, {a2.index("1")}));
  CHECK_FALSE(is_locally_closed(a2, {a2.index("∅"), a2.index("12")}));
  CHECK(closure(a2, {a2.index("1")}) == std::vector<int>{a2.index("∅"), a2.index("1")});
}
