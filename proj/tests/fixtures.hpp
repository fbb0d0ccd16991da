// Small posets shared by the test suites, built directly from relations.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finsheaf/poset.hpp"
#include "finsheaf/sheaf.hpp"

namespace fx {

using finsheaf::FinPoset;
using Rel = std::vector<std::pair<std::string, std::string>>;

inline FinPoset make(std::vector<std::string> labels, const Rel& rel) {
  return FinPoset::from_labeled_relations(std::move(labels), rel);
}

inline FinPoset point() { return make({"pt"}, {}); }
inline FinPoset empty() { return make({}, {}); }
inline FinPoset chain(int n) {
  std::vector<std::string> l;
  Rel r;
  for (int i = 0; i < n; ++i) {
    l.push_back(std::to_string(i));
    if (i) r.push_back({std::to_string(i - 1), std::to_string(i)});
  }
  return make(l, r);
}
inline FinPoset vee() { return make({"o", "a", "b"}, {{"o", "a"}, {"o", "b"}}); }
inline FinPoset circle() {
  return make({"x1", "x2", "y1", "y2"}, {{"x1", "y1"}, {"x1", "y2"}, {"x2", "y1"}, {"x2", "y2"}});
}
inline FinPoset p5() {
  return make({"o", "a", "b", "c", "m"}, {{"o", "a"}, {"a", "b"}, {"b", "c"}, {"o", "m"}, {"m", "c"}});
}
inline FinPoset e11() {
  return make({"o", "a", "b", "c", "t"},
              {{"o", "a"}, {"o", "b"}, {"o", "c"}, {"a", "t"}, {"b", "t"}, {"c", "t"}});
}

// All subsets of {1..n} ordered by inclusion; labels "∅", "1", "12", ...
inline std::string subset_label(unsigned s, int n) {
  std::string l;
  for (int i = 0; i < n; ++i)
    if (s >> i & 1u) l += std::to_string(i + 1);
  return l.empty() ? "∅" : l;
}
inline FinPoset affine(int n, bool with_empty = true) {
  std::vector<std::string> l;
  Rel r;
  unsigned start = with_empty ? 0 : 1;
  for (unsigned s = start; s < (1u << n); ++s) {
    l.push_back(subset_label(s, n));
    for (int i = 0; i < n; ++i)
      if (!(s >> i & 1u) && (s != 0 || with_empty)) r.push_back({subset_label(s, n), subset_label(s | 1u << i, n)});
  }
  return make(l, r);
}

inline int at(const FinPoset& X, const std::string& l) { return X.index(l); }

}  // namespace fx
