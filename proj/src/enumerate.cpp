// Posets up to isomorphism, grown one maximal element at a time, and random posets.

#include <algorithm>
#include <map>
#include <numeric>

#include "finsheaf/poset.hpp"

namespace finsheaf {

namespace {

std::vector<std::string> index_labels(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

// Cheap isomorphism invariant used to bucket candidates.
std::vector<int> invariant(const FinPoset& X) {
  std::vector<int> key;
  for (int x = 0; x < X.size(); ++x) {
    key.push_back(((X.dim_down(x) * 16 + X.dim_up(x)) * 16 + static_cast<int>(X.strictly_below(x).size())) * 16 +
                  static_cast<int>(X.strictly_above(x).size()));
  }
  std::sort(key.begin(), key.end());
  key.push_back(static_cast<int>(X.covers().size()));
  return key;
}

}  // namespace

std::vector<FinPoset> enumerate_posets(int n) {
  if (n < 0) throw PreconditionError("negative poset size");
  std::vector<FinPoset> level{FinPoset()};
  for (int m = 1; m <= n; ++m) {
    std::map<std::vector<int>, std::vector<FinPoset>> buckets;
    std::vector<FinPoset> next;
    for (const FinPoset& P : level) {
      const int k = P.size();
      // the new element m-1 is maximal; its strict down-set is any down-closed subset
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        bool down_closed = true;
        for (int x = 0; x < k && down_closed; ++x)
          if (mask >> x & 1)
            for (int y : P.strictly_below(x))
              if (!(mask >> y & 1)) {
                down_closed = false;
                break;
              }
        if (!down_closed) continue;
        std::vector<std::pair<int, int>> rel(P.covers().begin(), P.covers().end());
        for (int x = 0; x < k; ++x)
          if (mask >> x & 1) rel.emplace_back(x, k);
        FinPoset Q(index_labels(k + 1), rel);
        auto& bucket = buckets[invariant(Q)];
        bool seen = std::any_of(bucket.begin(), bucket.end(), [&](const FinPoset& R) { return are_isomorphic(Q, R); });
        if (!seen) {
          bucket.push_back(Q);
          next.push_back(std::move(Q));
        }
      }
    }
    level = std::move(next);
  }
  return level;
}

FinPoset random_poset(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) rel.emplace_back(perm[i], perm[j]);
  return FinPoset(index_labels(n), rel);
}

}  // namespace finsheaf
