#pragma once

#include <unordered_map>
#include <vector>

#include "finsheaf/poset.hpp"

namespace finsheaf::detail {

struct ChainHash {
  std::size_t operator()(const Chain& c) const {
    std::size_t h = c.size();
    for (int v : c) h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

/// Chains grouped by length, with position lookup.
struct ChainIndex {
  std::vector<std::vector<Chain>> by_len;
  std::vector<std::unordered_map<Chain, std::size_t, ChainHash>> pos;

  int max_len() const { return static_cast<int>(by_len.size()) - 1; }
  const std::vector<Chain>& of_len(int p) const {
    static const std::vector<Chain> none;
    return p >= 0 && p <= max_len() ? by_len[p] : none;
  }
  long find(const Chain& c) const {
    int p = static_cast<int>(c.size()) - 1;
    if (p < 0 || p > max_len()) return -1;
    auto it = pos[p].find(c);
    return it == pos[p].end() ? -1 : static_cast<long>(it->second);
  }
};

inline ChainIndex index_chains(const FinPoset& X, const std::vector<char>* first_in = nullptr,
                               const std::vector<char>* within = nullptr) {
  ChainIndex idx;
  for (int x = 0; x < X.size(); ++x) {
    if (first_in && !(*first_in)[x]) continue;
    ChainConstraints c;
    c.within = within;
    c.first = x;
    for_each_chain(X, c, [&](const Chain& ch) {
      std::size_t p = ch.size() - 1;
      if (idx.by_len.size() <= p) {
        idx.by_len.resize(p + 1);
        idx.pos.resize(p + 1);
      }
      idx.pos[p].emplace(ch, idx.by_len[p].size());
      idx.by_len[p].push_back(ch);
    });
  }
  return idx;
}

inline Chain drop(const Chain& c, std::size_t i) {
  Chain out;
  out.reserve(c.size() - 1);
  for (std::size_t k = 0; k < c.size(); ++k)
    if (k != i) out.push_back(c[k]);
  return out;
}

inline int sign(long k) { return k % 2 == 0 ? 1 : -1; }

}  // namespace finsheaf::detail
