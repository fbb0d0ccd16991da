// Derived functors through the standard resolutions.  Every engine builds a
// finite free complex indexed by chains and hands it to homology_of.
#pragma once

#include <vector>

#include "finsheaf/poset.hpp"
#include "finsheaf/sheaf.hpp"
#include "finsheaf/zlinalg.hpp"

namespace finsheaf {

/// Total complex of Gamma(X, C^.F) restricted to chains whose first element
/// satisfies `first_in` (all chains when null).  Degree = chain length + q.
FreeComplexZ cochain_model(const SheafComplex& F, const std::vector<char>* first_in = nullptr);
/// Total complex of Gamma(X, C_.F) in cohomological degree q - p.
FreeComplexZ chain_model(const SheafComplex& F);

GradedGroups global_cohomology(const SheafComplex& F);
GradedGroups global_cohomology(const FreeStalkSheaf& F);
/// Homology H_n(X, F) in homological degrees.
GradedGroups homology(const SheafComplex& F);
GradedGroups homology(const FreeStalkSheaf& F);

/// Augmented order complex of X in cohomological degree -p (p = -1 .. dim).
FreeComplexZ reduced_chain_complex(const FinPoset& X);
/// Reduced homology (homological degrees) and reduced cohomology of Z on X.
GradedGroups reduced_homology(const FinPoset& X);
GradedGroups reduced_cohomology(const FinPoset& X);

/// R Gamma_Y(X, F) for Y closed.
GradedGroups local_cohomology(const SheafComplex& F, const std::vector<int>& Y);
/// H^._x(U_x, F).
GradedGroups point_local_cohomology(const SheafComplex& F, int x);

/// Hom complex Hom(C_.F, G) as a sum of Z_{C_{x_0}} indexed by chains
/// x_0 < ... < x_p; its stalk at z is the same complex over chains in U_z.
CostalkComplex rhom_model(const SheafComplex& F, const SheafComplex& G);
GradedGroups rhom_global(const SheafComplex& F, const SheafComplex& G);
SheafComplex rhom_sheaf(const SheafComplex& F, const SheafComplex& G);

/// Ext^i(Z_{x}, Z_{y}) = reduced cohomology of (x, y) in degree i - 2; requires x < y.
GradedGroups ext_skyscrapers(const FinPoset& X, int x, int y);

}  // namespace finsheaf
