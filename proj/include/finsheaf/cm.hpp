// Cohen-Macaulay sheaves and spaces: support, depth, CM tests for sheaves
// and spaces, canonical sheaves, closed subsets, the omega duality
// sequences and Baclawski's notions.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finsheaf/duality.hpp"
#include "finsheaf/poset.hpp"
#include "finsheaf/sheaf.hpp"

namespace finsheaf {

struct SupportReport {
  std::vector<int> support;       // H(F_x) != 0
  std::vector<int> dual_support;  // RHom(Z_{x}, F) != 0
  std::vector<int> closure;       // closure of the support
  int dim = -1;                   // dimension of the closure; -1 when F = 0
  bool is_pure = true;            // maximal support points all have dim C_x = dim
  /// H_x(U_x, F) for every x.
  std::vector<GradedGroups> local_cohomology;
  /// First degree with H^k_x(U_x, F) != 0.
  std::vector<std::optional<int>> depth_at;
  /// min over the dual support of depth_x + dim C_x.
  std::optional<int> depth;
};
SupportReport support_report(const SheafComplex& F);

/// Point, degree and group where a CM test fails.
struct CmWitness {
  int point = -1;
  int degree = 0;
  FgGroup group;
  std::string what;
};

enum class CmPath { Duality, FreeCriterion, TorsionCriterion };
std::string to_string(CmPath p);

struct CmVerdict {
  bool is_cm = false;
  int shift = 0;  // r with D(F) = F^#[r]
  std::optional<PresentedSheaf> dual;  // F^#
  std::optional<CmWitness> witness;
  CmPath path = CmPath::Duality;
  std::string reason;
};

/// Generic points of F are the maximal points of its support.
enum class GenericType { Zero, TorsionFree, Torsion, Mixed };
GenericType generic_type(const PresentedSheaf& F);
/// Every stalk is a torsion group.
bool is_torsion_sheaf(const PresentedSheaf& F);

/// D(F) = F^#[r] tested on the cohomology of the dual.
CmVerdict cm_sheaf_by_duality(const PresentedSheaf& F);
/// Purity and vanishing of H^i_x(U_x, F) off d_x = dim F - dim C_x, plus a
/// torsion free top group in the generically torsion free case.  Empty when
/// F is neither generically torsion free nor torsion.
std::optional<CmVerdict> cm_sheaf_by_criterion(const PresentedSheaf& F);
/// Runs both paths and throws std::logic_error when they disagree.  Requires
/// a local, locally dualizable base.
CmVerdict is_cm_sheaf(const PresentedSheaf& F);

struct PointCheck {
  int x = -1;
  int dim = -1;  // dim U_x^*
  GradedGroups homology;  // reduced homology of U_x^*
  bool ok = true;
};

struct CmSpaceVerdict {
  bool is_cm = false;
  bool is_local = false;
  DualizabilityReport gate;
  bool homologically_cm = true;  // H_i(U_x^*) = 0 for i != dim U_x^*, all x
  std::vector<PointCheck> points;
  std::optional<CmWitness> witness;
  std::string reason() const;
};
/// For non-local X this tests every U_x, which amounts to the same two
/// conditions since intervals and U_y^* are computed inside U_x.
CmSpaceVerdict is_cm_space(const FinPoset& X);

/// H^{-dim X} of the local dualizing model.  Requires X local and CM.
PresentedSheaf canonical_sheaf(PosetPtr X);

struct CmClosedVerdict {
  bool is_cm = false;
  bool sheaf_verdict = false;  // Z_K is a CM sheaf
  bool space_verdict = false;  // K is a CM space
  int codim = 0;               // dim X - dim K
  /// Filled when X is CM: stalks of Ext^i(Z_K, omega_X).
  std::vector<GradedGroups> ext_stalks;
  std::optional<bool> ext_concentrated;
  std::optional<bool> omega_matches;  // Ext^c against omega_K extended by zero
};
CmClosedVerdict is_cm_closed(PosetPtr X, const std::vector<int>& K);

struct SequenceCheck {
  int degree = 0;
  FgGroup left, middle, right;
  bool ok = false;
};
struct GysinCheck {
  int codim = 0;
  GradedGroups lhs;  // H_K(X, omega_X)
  GradedGroups rhs;  // H(K, omega_K)[-codim]
  bool ok = false;
  bool concentrated = false;  // lhs lives in the single degree codim
};
struct OmegaReport {
  int dim = 0;
  std::vector<SequenceCheck> sequences;
  bool sequences_ok = false;
  /// omega_X restricted to X^*, shifted by dim X - 1, against the global
  /// dualizing model of X^*, stalkwise and on global duality for F.
  bool punctured_stalks_ok = false;
  bool punctured_duality_ok = false;
  std::optional<GysinCheck> gysin;
};
/// X local CM of dimension n; K, when given, a CM closed subset.
OmegaReport omega_duality_sequences(PosetPtr X, const SheafComplex& F, const std::vector<int>& K = {});

struct BaclawskiReport {
  bool a = true;  // open intervals (x, y) of X are bouquets
  bool b = true;  // H_i(U_x^*) = 0 for i < dim U_x^*
  bool c = true;  // H_i(C_x^*) = 0 for i < dim C_x^*
  bool d = true;  // H_i(X) = 0 for i < dim X
  bool is_cm_baclawski = false;
  bool is_acm = false;
  bool is_cm_ours = false;
  std::optional<CmWitness> witness;  // first failing condition; point -1 for (d)
  char failed = 0;                   // 'a'..'d' of the first failure
};
/// A bouquet has reduced homology only in its top degree.
bool is_bouquet(const FinPoset& P);
BaclawskiReport baclawski_report(const FinPoset& X);

struct ProductCheck {
  bool x = false, y = false, product = false;
  bool holds = false;
};
ProductCheck cm_product_check(const FinPoset& X, const FinPoset& Y);

struct BarycentricCheck {
  bool x = false, x_op = false, beta = false;
  bool holds = false;
};
/// Requires X locally dualizable.
BarycentricCheck cm_barycentric_check(const FinPoset& X);

}  // namespace finsheaf
