#include "finsheaf/simplicial.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace finsheaf {

namespace {

bool face_less(const Face& a, const Face& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool subset_of(const Face& a, const Face& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

Face without(const Face& f, std::size_t i) {
  Face g = f;
  g.erase(g.begin() + static_cast<long>(i));
  return g;
}

}  // namespace

SimplicialComplex::SimplicialComplex(std::vector<std::string> vertices, std::vector<Face> facets, bool projective)
    : vertices_(std::move(vertices)), projective_(projective) {
  for (auto& f : facets) {
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw PreconditionError("facet with a repeated vertex");
    for (int v : f)
      if (v < 0 || v >= static_cast<int>(vertices_.size())) throw PreconditionError("facet vertex out of range");
  }
  std::sort(facets.begin(), facets.end(), face_less);
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
  for (std::size_t i = 0; i < facets.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = i + 1; j < facets.size() && maximal; ++j)
      if (facets[j].size() > facets[i].size() && subset_of(facets[i], facets[j])) maximal = false;
    if (maximal) facets_.push_back(facets[i]);
  }
  std::set<Face, decltype(&face_less)> all(&face_less);
  for (const Face& f : facets_) {
    unsigned n = static_cast<unsigned>(f.size());
    for (unsigned s = 0; s < (1u << n); ++s) {
      Face g;
      for (unsigned i = 0; i < n; ++i)
        if (s >> i & 1u) g.push_back(f[i]);
      if (!g.empty() || !projective_) all.insert(std::move(g));
    }
  }
  faces_.assign(all.begin(), all.end());
}

bool SimplicialComplex::contains(const Face& f) const {
  if (f.empty()) return !projective_ && !facets_.empty();
  for (const Face& F : facets_)
    if (subset_of(f, F)) return true;
  return false;
}

int SimplicialComplex::dim() const {
  if (facets_.empty()) return -2;
  return static_cast<int>(facets_.back().size()) - 1;
}

std::string SimplicialComplex::face_label(const Face& f) const {
  if (f.empty()) return "∅";
  bool short_labels = std::all_of(vertices_.begin(), vertices_.end(), [](const std::string& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i && !short_labels) out += ',';
    out += vertices_[f[i]];
  }
  return out;
}

FacePoset from_facets(const std::vector<std::vector<std::string>>& facets, bool projective) {
  if (facets.empty()) throw PreconditionError("empty facet list");
  std::vector<std::string> vertices;
  std::map<std::string, int> index;
  std::vector<Face> fs;
  for (const auto& facet : facets) {
    Face f;
    for (const auto& v : facet) {
      if (v.empty() || v == "∅") throw PreconditionError("invalid vertex label '" + v + "'");
      auto [it, fresh] = index.emplace(v, static_cast<int>(vertices.size()));
      if (fresh) vertices.push_back(v);
      f.push_back(it->second);
    }
    fs.push_back(std::move(f));
  }
  FacePoset out;
  out.complex = SimplicialComplex(std::move(vertices), std::move(fs), projective);
  out.poset = face_poset(out.complex);
  out.embedding = out.complex.faces();
  return out;
}

FinPoset face_poset(const SimplicialComplex& K) {
  const auto& faces = K.faces();
  std::map<Face, int> index;
  std::vector<std::string> labels;
  for (const Face& f : faces) {
    index.emplace(f, static_cast<int>(labels.size()));
    labels.push_back(K.face_label(f));
  }
  std::vector<std::pair<int, int>> rel;
  for (const Face& f : faces)
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto it = index.find(without(f, i));
      if (it != index.end()) rel.push_back({it->second, index.at(f)});
    }
  return FinPoset(std::move(labels), rel);
}

FinPoset affine_space(int n) {
  if (n < 0) throw PreconditionError("negative dimension");
  std::vector<std::string> simplex;
  for (int i = 1; i <= n; ++i) simplex.push_back(std::to_string(i));
  return from_facets({simplex}, false).poset;
}

FinPoset projective_space(int n) {
  if (n < 0) throw PreconditionError("negative dimension");
  std::vector<std::string> simplex;
  for (int i = 1; i <= n; ++i) simplex.push_back(std::to_string(i));
  return from_facets({simplex}, true).poset;
}

SimplicialComplex link(const SimplicialComplex& K, const Face& sigma) {
  Face s = sigma;
  std::sort(s.begin(), s.end());
  if (!s.empty() && !K.contains(s)) throw PreconditionError("link of a face not in the complex");
  std::vector<Face> fs;
  for (const Face& F : K.facets())
    if (subset_of(s, F)) {
      Face rest;
      std::set_difference(F.begin(), F.end(), s.begin(), s.end(), std::back_inserter(rest));
      fs.push_back(std::move(rest));
    }
  return SimplicialComplex(K.vertices(), std::move(fs), false);
}

GradedGroups simplicial_reduced_homology(const SimplicialComplex& K) {
  int D = K.dim();
  if (D < -1) return {};
  // faces of dimension k in slot k + 1; the empty face always counts
  std::vector<std::vector<Face>> by(D + 2);
  by[0].push_back({});
  for (const Face& f : K.faces())
    if (!f.empty()) by[f.size()].push_back(f);
  std::vector<std::map<Face, std::size_t>> pos(D + 2);
  for (int k = 0; k <= D + 1; ++k)
    for (std::size_t i = 0; i < by[k].size(); ++i) pos[k][by[k][i]] = i;
  // dimension k sits in cohomological degree -k
  std::vector<std::size_t> ranks;
  for (int k = D; k >= -1; --k) ranks.push_back(by[k + 1].size());
  FreeComplexZ C(-D, ranks);
  for (int k = D; k >= 0; --k) {
    SparseBuilder b(by[k].size(), by[k + 1].size());
    for (std::size_t j = 0; j < by[k + 1].size(); ++j) {
      const Face& f = by[k + 1][j];
      for (std::size_t i = 0; i < f.size(); ++i) b.add(pos[k].at(without(f, i)), j, i % 2 ? -1 : 1);
    }
    C.set_differential(-k, b.build());
  }
  GradedGroups h = homology_of(C), out;
  for (const auto& [n, g] : h.items()) out.set(-n, g);
  return out;
}

ReisnerVerdict reisner_check(const SimplicialComplex& K) {
  ReisnerVerdict v;
  std::vector<Face> faces = K.faces();
  if (K.projective()) faces.insert(faces.begin(), Face{});
  for (const Face& s : faces) {
    SimplicialComplex L = link(K, s);
    int d = L.dim();
    GradedGroups h = simplicial_reduced_homology(L);
    for (const auto& [i, g] : h.items())
      if (i < d && !g.is_zero()) {
        v.holds = false;
        v.face = s;
        v.degree = i;
        v.group = g;
        return v;
      }
  }
  return v;
}

std::vector<std::string> sr_ideal(const SimplicialComplex& K) {
  auto is_face = [&](const Face& f) { return f.empty() || K.contains(f); };
  std::set<Face, decltype(&face_less)> minimal(&face_less);
  int n = static_cast<int>(K.vertices().size());
  std::vector<Face> faces = K.faces();
  if (K.projective() || faces.empty()) faces.insert(faces.begin(), Face{});
  for (const Face& f : faces)
    for (int v = 0; v < n; ++v) {
      if (std::binary_search(f.begin(), f.end(), v)) continue;
      Face s = f;
      s.insert(std::upper_bound(s.begin(), s.end(), v), v);
      if (is_face(s)) continue;
      bool min = true;
      for (std::size_t i = 0; i < s.size() && min; ++i) min = is_face(without(s, i));
      if (min) minimal.insert(s);
    }
  std::vector<std::string> out;
  for (const Face& s : minimal) {
    std::string m;
    for (int v : s) m += (m.empty() ? "x" : "*x") + std::to_string(v + 1);
    out.push_back(m);
  }
  return out;
}

SimplicialComplex order_complex(const FinPoset& X) {
  std::vector<Face> facets;
  for_each_chain(X, {}, [&](const Chain& c) {
    if (!X.lower_covers(c.front()).empty() || !X.upper_covers(c.back()).empty()) return;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (!X.is_cover(c[i], c[i + 1])) return;
    facets.push_back(c);
  });
  return SimplicialComplex(X.labels(), std::move(facets), true);
}

std::vector<std::vector<std::string>> parse_facets(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> facet;
    for (std::string v; ls >> v;) facet.push_back(v);
    if (!facet.empty()) out.push_back(std::move(facet));
  }
  if (out.empty()) throw PreconditionError("facet file lists no facets");
  return out;
}

std::vector<std::vector<std::string>> read_facet_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_facets(ss.str());
}

}  // namespace finsheaf
