#include "finsheaf/poset.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace finsheaf {

// *** FinPoset

FinPoset::FinPoset(std::vector<std::string> labels, const std::vector<std::pair<int, int>>& relations)
    : labels_(std::move(labels)) {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (labels_[i].empty()) throw PreconditionError("empty element label");
    if (!index_.emplace(labels_[i], i).second) throw PreconditionError("duplicate element label: " + labels_[i]);
  }
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (auto [x, y] : relations) {
    if (x < 0 || y < 0 || x >= n || y >= n) throw PreconditionError("relation refers to an unknown element");
    if (x == y) throw PreconditionError("relation " + labels_[x] + " < " + labels_[x] + " is not strict");
    succ[x].push_back(y);
  }
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int y : s) ++indeg[y];
  }
  // Kahn's algorithm, smallest index first
  std::set<int> ready;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.insert(i);
  while (!ready.empty()) {
    int x = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(x);
    for (int y : succ[x])
      if (--indeg[y] == 0) ready.insert(y);
  }
  if (static_cast<int>(topo_.size()) != n) throw PreconditionError("order relation has a cycle");

  leq_.assign(static_cast<std::size_t>(n) * n, 0);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    const int x = *it;
    std::uint8_t* row = &leq_[static_cast<std::size_t>(x) * n];
    row[x] = 1;
    for (int y : succ[x]) {
      const std::uint8_t* other = &leq_[static_cast<std::size_t>(y) * n];
      for (int z = 0; z < n; ++z) row[z] |= other[z];
    }
  }
  upper_.assign(n, {});
  lower_.assign(n, {});
  above_.assign(n, {});
  below_.assign(n, {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (lt(x, y)) {
        above_[x].push_back(y);
        below_[y].push_back(x);
      }
  for (int x = 0; x < n; ++x)
    for (int y : above_[x]) {
      bool cover = true;
      for (int z : above_[x])
        if (lt(z, y)) {
          cover = false;
          break;
        }
      if (cover) {
        covers_.emplace_back(x, y);
        upper_[x].push_back(y);
        lower_[y].push_back(x);
      }
    }
  std::sort(covers_.begin(), covers_.end());
  height_down_.assign(n, 0);
  height_up_.assign(n, 0);
  for (int x : topo_)
    for (int z : lower_[x]) height_down_[x] = std::max(height_down_[x], height_down_[z] + 1);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it)
    for (int z : upper_[*it]) height_up_[*it] = std::max(height_up_[*it], height_up_[z] + 1);
}

FinPoset FinPoset::from_labeled_relations(std::vector<std::string> labels,
                                          const std::vector<std::pair<std::string, std::string>>& relations) {
  std::map<std::string, int> idx;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) idx.emplace(labels[i], i);
  std::vector<std::pair<int, int>> rel;
  for (const auto& [a, b] : relations) {
    auto ia = idx.find(a), ib = idx.find(b);
    if (ia == idx.end()) throw PreconditionError("unknown element: " + a);
    if (ib == idx.end()) throw PreconditionError("unknown element: " + b);
    rel.emplace_back(ia->second, ib->second);
  }
  return FinPoset(std::move(labels), rel);
}

int FinPoset::index(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw PreconditionError("unknown element: " + label);
  return it->second;
}

std::optional<int> FinPoset::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FinPoset::is_cover(int x, int y) const {
  return std::binary_search(upper_[x].begin(), upper_[x].end(), y);
}

int FinPoset::dim() const {
  int d = -1;
  for (int h : height_down_) d = std::max(d, h);
  return d;
}

std::vector<int> FinPoset::minimal_elements() const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x)
    if (lower_[x].empty()) out.push_back(x);
  return out;
}

std::vector<int> FinPoset::maximal_elements() const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x)
    if (upper_[x].empty()) out.push_back(x);
  return out;
}

// *** subsets

bool SubSpace::contains(int x) const { return std::binary_search(elements.begin(), elements.end(), x); }

static std::vector<char> mask_of(const FinPoset& X, const std::vector<int>& s) {
  std::vector<char> m(X.size(), 0);
  for (int x : s) {
    if (x < 0 || x >= X.size()) throw PreconditionError("subset refers to an unknown element");
    m[x] = 1;
  }
  return m;
}

bool is_open(const FinPoset& X, const std::vector<int>& s) {
  auto m = mask_of(X, s);
  for (int x : s)
    for (int y : X.strictly_above(x))
      if (!m[y]) return false;
  return true;
}

bool is_closed(const FinPoset& X, const std::vector<int>& s) {
  auto m = mask_of(X, s);
  for (int x : s)
    for (int y : X.strictly_below(x))
      if (!m[y]) return false;
  return true;
}

// Locally closed iff convex: x <= z <= y with x, y in S forces z in S.
bool is_locally_closed(const FinPoset& X, const std::vector<int>& s) {
  auto m = mask_of(X, s);
  for (int x : s)
    for (int y : s)
      if (X.lt(x, y))
        for (int z : X.strictly_above(x))
          if (X.lt(z, y) && !m[z]) return false;
  return true;
}

SubSpace make_subspace(const FinPoset& X, std::vector<int> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  SubSpace out;
  if (is_open(X, s)) {
    out.kind = SubsetKind::Open;
  } else if (is_closed(X, s)) {
    out.kind = SubsetKind::Closed;
  } else if (is_locally_closed(X, s)) {
    out.kind = SubsetKind::LocallyClosed;
  }
  out.elements = std::move(s);
  return out;
}

std::vector<int> closure(const FinPoset& X, const std::vector<int>& s) {
  std::vector<char> m = mask_of(X, s);
  for (int x : s)
    for (int y : X.strictly_below(x)) m[y] = 1;
  std::vector<int> out;
  for (int x = 0; x < X.size(); ++x)
    if (m[x]) out.push_back(x);
  return out;
}

SubSpace up_set(const FinPoset& X, int x) {
  std::vector<int> s = X.strictly_above(x);
  s.push_back(x);
  return make_subspace(X, std::move(s));
}

SubSpace down_set(const FinPoset& X, int x) {
  std::vector<int> s = X.strictly_below(x);
  s.push_back(x);
  return make_subspace(X, std::move(s));
}

FinPoset induced(const FinPoset& X, const std::vector<int>& elements) {
  std::vector<std::string> labels;
  for (int x : elements) labels.push_back(X.label(x));
  std::vector<std::pair<int, int>> rel;
  const int m = static_cast<int>(elements.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (X.lt(elements[i], elements[j])) rel.emplace_back(i, j);
  return FinPoset(std::move(labels), rel);
}

std::vector<int> open_interval_elements(const FinPoset& X, int x, int y) {
  if (!X.leq(x, y)) throw PreconditionError("interval endpoints are not ordered: " + X.label(x) + ", " + X.label(y));
  std::vector<int> out;
  for (int z : X.strictly_above(x))
    if (X.lt(z, y)) out.push_back(z);
  return out;
}

FinPoset open_interval(const FinPoset& X, int x, int y) { return induced(X, open_interval_elements(X, x, y)); }

FinPoset closed_interval(const FinPoset& X, int x, int y) {
  std::vector<int> e = open_interval_elements(X, x, y);
  e.push_back(x);
  if (y != x) e.push_back(y);
  std::sort(e.begin(), e.end());
  return induced(X, e);
}

FinPoset punctured_up(const FinPoset& X, int x) { return induced(X, X.strictly_above(x)); }
FinPoset punctured_down(const FinPoset& X, int x) { return induced(X, X.strictly_below(x)); }

// *** structure

namespace {

// Shortest and longest saturated chain lengths from x to every y >= x.
void saturated_lengths(const FinPoset& X, int x, std::vector<int>& lo, std::vector<int>& hi) {
  const int n = X.size();
  lo.assign(n, -1);
  hi.assign(n, -1);
  lo[x] = hi[x] = 0;
  for (int y : X.linear_extension()) {
    if (y == x || !X.lt(x, y)) continue;
    for (int z : X.lower_covers(y)) {
      if (!X.leq(x, z)) continue;
      lo[y] = (lo[y] < 0) ? lo[z] + 1 : std::min(lo[y], lo[z] + 1);
      hi[y] = std::max(hi[y], hi[z] + 1);
    }
  }
}

}  // namespace

bool is_catenary(const FinPoset& X) {
  std::vector<int> lo, hi;
  for (int x = 0; x < X.size(); ++x) {
    saturated_lengths(X, x, lo, hi);
    for (int y = 0; y < X.size(); ++y)
      if (lo[y] != hi[y]) return false;
  }
  return true;
}

bool is_pure(const FinPoset& X) {
  const int d = X.dim();
  std::vector<int> lo, hi;
  const auto tops = X.maximal_elements();
  for (int m : X.minimal_elements()) {
    saturated_lengths(X, m, lo, hi);
    for (int t : tops)
      if (X.leq(m, t) && (lo[t] != d || hi[t] != d)) return false;
  }
  return true;
}

std::vector<std::vector<int>> connected_components(const FinPoset& X) {
  std::vector<int> comp(X.size(), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < X.size(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::deque<int> queue{s};
    comp[s] = id;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      out[id].push_back(x);
      for (const auto* nb : {&X.upper_covers(x), &X.lower_covers(x)})
        for (int y : *nb)
          if (comp[y] < 0) {
            comp[y] = id;
            queue.push_back(y);
          }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

bool is_connected(const FinPoset& X) { return !X.empty() && connected_components(X).size() == 1; }

std::optional<int> closed_point(const FinPoset& X) {
  auto m = X.minimal_elements();
  if (m.size() != 1) return std::nullopt;
  return m[0];
}

std::optional<int> generic_point(const FinPoset& X) {
  auto m = X.maximal_elements();
  if (m.size() != 1) return std::nullopt;
  return m[0];
}

StructureReport structure_report(const FinPoset& X) {
  StructureReport r;
  r.dim = X.dim();
  r.is_pure = is_pure(X);
  r.is_catenary = is_catenary(X);
  r.closed_points = X.minimal_elements();
  r.generic_points = X.maximal_elements();
  r.is_local = r.closed_points.size() == 1;
  r.is_irreducible = r.generic_points.size() == 1;
  r.is_connected = is_connected(X);
  return r;
}

// *** codimension functions

std::optional<CodimFunction> codimension_function(const FinPoset& X, const std::map<int, long>& anchors) {
  CodimFunction d(X.size(), 0);
  for (const auto& comp : connected_components(X)) {
    std::optional<std::pair<int, long>> anchor;
    for (int x : comp) {
      auto it = anchors.find(x);
      if (it == anchors.end()) continue;
      if (anchor) throw PreconditionError("two anchors in one connected component");
      anchor = *it;
    }
    if (!anchor) {
      int best = -1;
      for (int x : comp)
        if (X.upper_covers(x).empty() && (best < 0 || X.label(x) < X.label(best))) best = x;
      anchor = std::make_pair(best, 0L);
    }
    std::vector<char> seen(X.size(), 0);
    std::deque<int> queue{anchor->first};
    d[anchor->first] = anchor->second;
    seen[anchor->first] = 1;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int y : X.upper_covers(x))
        if (!seen[y]) {
          seen[y] = 1;
          d[y] = d[x] - 1;
          queue.push_back(y);
        }
      for (int y : X.lower_covers(x))
        if (!seen[y]) {
          seen[y] = 1;
          d[y] = d[x] + 1;
          queue.push_back(y);
        }
    }
  }
  for (auto it = anchors.begin(); it != anchors.end(); ++it)
    if (it->first < 0 || it->first >= X.size()) throw PreconditionError("anchor refers to an unknown element");
  if (!is_codimension_function(X, d)) return std::nullopt;
  return d;
}

bool is_codimension_function(const FinPoset& X, const CodimFunction& phi) {
  if (static_cast<int>(phi.size()) != X.size()) return false;
  for (auto [x, y] : X.covers())
    if (phi[x] != phi[y] + 1) return false;
  return true;
}

CodimFunction codim_local_preset(const FinPoset& X) {
  CodimFunction d(X.size());
  for (int x = 0; x < X.size(); ++x) d[x] = -X.dim_down(x);
  return d;
}

CodimFunction codim_irreducible_preset(const FinPoset& X) {
  CodimFunction d(X.size());
  for (int x = 0; x < X.size(); ++x) d[x] = X.dim_up(x);
  return d;
}

// *** constructions

FinPoset opposite(const FinPoset& X) {
  std::vector<std::pair<int, int>> rel;
  for (auto [x, y] : X.covers()) rel.emplace_back(y, x);
  return FinPoset(X.labels(), rel);
}

FinPoset product(const FinPoset& X, const FinPoset& Y) {
  const int m = Y.size();
  std::vector<std::string> labels;
  for (int x = 0; x < X.size(); ++x)
    for (int y = 0; y < m; ++y) labels.push_back("(" + X.label(x) + "," + Y.label(y) + ")");
  std::vector<std::pair<int, int>> rel;
  for (auto [a, b] : X.covers())
    for (int y = 0; y < m; ++y) rel.emplace_back(a * m + y, b * m + y);
  for (int x = 0; x < X.size(); ++x)
    for (auto [a, b] : Y.covers()) rel.emplace_back(x * m + a, x * m + b);
  return FinPoset(std::move(labels), rel);
}

std::string chain_label(const FinPoset& X, const Chain& c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "<" : "") + X.label(c[i]);
  return s + "]";
}

FinPoset barycentric(const FinPoset& X) {
  std::vector<Chain> all = chains(X);
  std::map<Chain, int> idx;
  std::vector<std::string> labels;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    idx.emplace(all[i], i);
    labels.push_back(chain_label(X, all[i]));
  }
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    const Chain& c = all[i];
    if (c.size() < 2) continue;
    for (std::size_t k = 0; k < c.size(); ++k) {
      Chain f = c;
      f.erase(f.begin() + k);
      rel.emplace_back(idx.at(f), i);
    }
  }
  return FinPoset(std::move(labels), rel);
}

FinPoset with_bounds(const FinPoset& X) {
  std::string bot = "bottom", top = "top";
  while (X.find(bot)) bot += "'";
  while (X.find(top)) top += "'";
  std::vector<std::string> labels = X.labels();
  const int b = X.size(), t = X.size() + 1;
  labels.push_back(bot);
  labels.push_back(top);
  std::vector<std::pair<int, int>> rel(X.covers().begin(), X.covers().end());
  for (int x = 0; x < X.size(); ++x) {
    rel.emplace_back(b, x);
    rel.emplace_back(x, t);
  }
  rel.emplace_back(b, t);
  return FinPoset(std::move(labels), rel);
}

// *** chains

namespace {

void extend_chain(const FinPoset& X, const ChainConstraints& c, Chain& chain,
                  const std::function<void(const Chain&)>& f) {
  f(chain);
  if (c.max_length >= 0 && static_cast<int>(chain.size()) - 1 >= c.max_length) return;
  for (int y : X.strictly_above(chain.back())) {
    if (c.within && !(*c.within)[y]) continue;
    chain.push_back(y);
    extend_chain(X, c, chain, f);
    chain.pop_back();
  }
}

}  // namespace

void for_each_chain(const FinPoset& X, const ChainConstraints& c, const std::function<void(const Chain&)>& f) {
  Chain chain;
  for (int x = 0; x < X.size(); ++x) {
    if (c.first && *c.first != x) continue;
    if (c.within && !(*c.within)[x]) continue;
    chain.assign(1, x);
    extend_chain(X, c, chain, f);
  }
}

std::vector<Chain> chains(const FinPoset& X, const ChainConstraints& c) {
  std::vector<Chain> out;
  for_each_chain(X, c, [&](const Chain& ch) { out.push_back(ch); });
  return out;
}

std::size_t count_chains(const FinPoset& X) {
  // number of chains starting at x, by reverse linear extension
  std::vector<std::size_t> from(X.size(), 1);
  std::size_t total = 0;
  const auto& topo = X.linear_extension();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    for (int y : X.strictly_above(*it)) from[*it] += from[y];
    total += from[*it];
  }
  return total;
}

// *** isomorphism

namespace {

struct Signature {
  int down, up, below, above;
  auto operator<=>(const Signature&) const = default;
};

std::vector<Signature> signatures(const FinPoset& X) {
  std::vector<Signature> s(X.size());
  for (int x = 0; x < X.size(); ++x)
    s[x] = {X.dim_down(x), X.dim_up(x), static_cast<int>(X.strictly_below(x).size()),
            static_cast<int>(X.strictly_above(x).size())};
  return s;
}

bool extend_iso(const FinPoset& X, const FinPoset& Y, const std::vector<Signature>& sx,
                const std::vector<Signature>& sy, std::vector<int>& map, std::vector<char>& used, int k) {
  if (k == X.size()) return true;
  for (int y = 0; y < Y.size(); ++y) {
    if (used[y] || !(sx[k] == sy[y])) continue;
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      ok = X.leq(i, k) == Y.leq(map[i], y) && X.leq(k, i) == Y.leq(y, map[i]);
    if (!ok) continue;
    map[k] = y;
    used[y] = 1;
    if (extend_iso(X, Y, sx, sy, map, used, k + 1)) return true;
    used[y] = 0;
  }
  return false;
}

}  // namespace

bool are_isomorphic(const FinPoset& X, const FinPoset& Y) {
  if (X.size() != Y.size() || X.covers().size() != Y.covers().size()) return false;
  auto sx = signatures(X), sy = signatures(Y);
  auto a = sx, b = sy;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) return false;
  std::vector<int> map(X.size(), -1);
  std::vector<char> used(Y.size(), 0);
  return extend_iso(X, Y, sx, sy, map, used, 0);
}

}  // namespace finsheaf
