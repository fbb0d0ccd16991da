// Internal helpers shared between translation units.
#pragma once

#include "finsheaf/zlinalg.hpp"

namespace finsheaf {

inline int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

/// Nonzero diagonal of the Smith form, dense path, no transforms.
std::vector<Integer> dense_invariant_factors(IntMatrix m);

}  // namespace finsheaf
