// Sheaves on finite posets as functors: a stalk per point and a restriction
// map rho_{x<=y}: F_x -> F_y (an n_y x n_x matrix) per comparable pair.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsheaf/poset.hpp"
#include "finsheaf/zlinalg.hpp"

namespace finsheaf {

using PosetPtr = std::shared_ptr<const FinPoset>;
PosetPtr share(FinPoset X);

/// Sheaf with free stalks Z^{n_x}.  Restrictions for every comparable pair are
/// composed from the cover maps at construction; functoriality violations are
/// recorded and reported by validate().
class FreeStalkSheaf {
 public:
  FreeStalkSheaf() = default;
  FreeStalkSheaf(PosetPtr base, std::vector<std::size_t> ranks,
                 const std::map<std::pair<int, int>, SparseIntMatrix>& cover_maps);
  FreeStalkSheaf(PosetPtr base, std::vector<std::size_t> ranks,
                 const std::map<std::pair<int, int>, IntMatrix>& cover_maps);

  const FinPoset& base() const { return *base_; }
  const PosetPtr& base_ptr() const { return base_; }
  std::size_t rank(int x) const { return ranks_[x]; }
  const std::vector<std::size_t>& ranks() const { return ranks_; }
  /// rho_{x<=y}; requires x <= y.
  const SparseIntMatrix& restriction(int x, int y) const;
  const SparseIntMatrix& cover_map(int x, int y) const { return restriction(x, y); }

  /// First functoriality violation, if any.
  const std::optional<std::string>& violation() const { return violation_; }
  bool is_zero() const;

 private:
  PosetPtr base_;
  std::vector<std::size_t> ranks_;
  std::vector<SparseIntMatrix> rho_;  // rho_[x * n + y] for x <= y
  std::optional<std::string> violation_;
};

/// Bounded complex of free-stalk sheaves; differential d^q_x: F^q_x -> F^{q+1}_x.
class SheafComplex {
 public:
  SheafComplex() = default;
  SheafComplex(PosetPtr base, int lo, std::vector<FreeStalkSheaf> terms,
               std::vector<std::vector<SparseIntMatrix>> diffs);
  static SheafComplex single(const FreeStalkSheaf& F, int degree = 0);
  static SheafComplex zero(PosetPtr base);

  const FinPoset& base() const { return *base_; }
  const PosetPtr& base_ptr() const { return base_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(terms_.size()) - 1; }
  bool empty() const { return terms_.empty(); }
  std::size_t rank(int q, int x) const;
  const FreeStalkSheaf& term(int q) const;
  /// Restriction of the degree-q term; requires x <= y.
  const SparseIntMatrix& restriction(int q, int x, int y) const;
  /// d^q at the stalk of x (rank(q+1,x) x rank(q,x)).
  const SparseIntMatrix& differential(int q, int x) const;

  /// Stalk complex at x as a free complex over Z.
  FreeComplexZ stalk(int x) const;

  /// First violation of functoriality, d o d = 0 or compatibility of d with rho.
  std::optional<std::string> check() const;

 private:
  PosetPtr base_;
  int lo_ = 0;
  std::vector<FreeStalkSheaf> terms_;
  std::vector<std::vector<SparseIntMatrix>> diffs_;  // diffs_[k][x]: lo+k -> lo+k+1
  SparseIntMatrix empty_;
  FreeStalkSheaf zero_;
};

struct ValidationResult {
  bool ok = true;
  std::string message;
};
ValidationResult validate(const FreeStalkSheaf& F);
ValidationResult validate(const SheafComplex& F);
/// Throws PreconditionError unless valid.
void require_valid(const SheafComplex& F);

FreeStalkSheaf constant_sheaf(PosetPtr X);
/// Z_S for S locally closed.
FreeStalkSheaf supported_constant(PosetPtr X, const std::vector<int>& S);
FreeStalkSheaf skyscraper(PosetPtr X, int x);
/// Z^k (x) Z_{U_x} and Z^k (x) Z_{C_x}.
FreeStalkSheaf open_star_sheaf(PosetPtr X, int x);
FreeStalkSheaf closure_sheaf(PosetPtr X, int x);
FreeStalkSheaf restrict_sheaf(const FreeStalkSheaf& F, PosetPtr sub, const std::vector<int>& elements);
SheafComplex restrict_complex(const SheafComplex& F, PosetPtr sub, const std::vector<int>& elements);
/// Extension by zero of a sheaf on the subposet `elements` (which must be locally closed).
SheafComplex extend_by_zero(const SheafComplex& F, PosetPtr X, const std::vector<int>& elements);

/// Stalkwise chain map between complexes on the same base: maps[k][x] acts in degree lo + k.
struct SheafMorphism {
  int lo = 0;
  std::vector<std::vector<SparseIntMatrix>> maps;
  const SparseIntMatrix* at(int q, int x) const;
};
SheafMorphism identity_morphism(const SheafComplex& F);

SheafComplex direct_sum(const SheafComplex& F, const SheafComplex& G);
/// F[k]: degree n holds F^{n+k}, differential (-1)^k d.
SheafComplex shift(const SheafComplex& F, int k);
/// Cone(phi)^n = F^{n+1} + G^n with d = [[-d_F, 0], [phi, d_G]].
SheafComplex cone(const SheafComplex& F, const SheafComplex& G, const SheafMorphism& phi);
/// E (x)_Z F for a free complex E; Koszul sign (-1)^a on d_F.
SheafComplex tensor_group(const FreeComplexZ& E, const SheafComplex& F);
/// F boxtimes G on X x Y (product index x * |Y| + y).
SheafComplex external_product(const SheafComplex& F, const SheafComplex& G);

/// Complex of sums of Z_{C_x}: summand points per degree, differentials with
/// entries only from a summand at x to a summand at y <= x.  Its stalk at z is
/// spanned by the summands at points >= z and restrictions are projections.
struct CostalkComplex {
  PosetPtr base;
  int lo = 0;
  std::vector<std::vector<int>> points;   // points[k]: summand points in degree lo + k
  std::vector<SparseIntMatrix> diffs;     // diffs[k]: degree lo + k -> lo + k + 1
  int hi() const { return lo + static_cast<int>(points.size()) - 1; }
  const std::vector<int>& summands(int q) const;
  const SparseIntMatrix& differential(int q) const;
  /// Global sections (every summand contributes Z).
  FreeComplexZ global_sections() const;
  FreeComplexZ stalk(int z) const;
};
SheafComplex to_sheaf(const CostalkComplex& C);

/// Sheaf with presented stalks coker(R_x: Z^{r_x} -> Z^{g_x}); used for
/// torsion input and for cohomology sheaves.
struct PresentedSheaf {
  PosetPtr base;
  std::vector<std::size_t> generators;
  std::vector<IntMatrix> relations;                    // g_x x r_x
  std::map<std::pair<int, int>, IntMatrix> cover_maps; // generator level, g_y x g_x
  FgGroup stalk(int x) const;
  bool is_zero() const;
  /// Generator map along x <= y composed from covers.
  IntMatrix restriction(int x, int y) const;
};
/// Checks that cover maps send relations into relations and compose
/// consistently modulo relations.
ValidationResult validate(const PresentedSheaf& F);
/// Two-term free resolution in degrees -1, 0.
SheafComplex to_complex(const PresentedSheaf& F);
PresentedSheaf presented_from_free(const FreeStalkSheaf& F);

/// Stalkwise cohomology of a complex: point -> graded groups.
std::vector<GradedGroups> stalk_cohomology(const SheafComplex& F);
/// H^q(F) as a presented sheaf with the induced restriction maps.
PresentedSheaf cohomology_sheaf(const SheafComplex& F, int q);
/// Degrees where some stalk cohomology is nonzero.
std::vector<int> cohomology_degrees(const SheafComplex& F);

/// Chain-indexed bookkeeping of the standard resolutions: for each length p,
/// the p-chains and the rank each carries (F_{x_p} for C^p, F_{x_0} for C_p).
struct StandardResolutionData {
  std::vector<std::vector<Chain>> chains;
  std::vector<std::vector<std::size_t>> cochain_ranks;
  std::vector<std::vector<std::size_t>> chain_ranks;
};
StandardResolutionData standard_resolutions(const FreeStalkSheaf& F);

// Sheaf JSON: {"poset": <object or path>, "stalk_ranks": {label: n},
// "cover_maps": {"x->y": rows}, optional "relations": {label: rows}}.
struct SheafInput {
  PosetPtr base;
  std::optional<FreeStalkSheaf> free;
  std::optional<PresentedSheaf> presented;
  SheafComplex as_complex() const;
};
SheafInput parse_sheaf_json(const std::string& text, const std::string& base_dir = ".");
SheafInput read_sheaf_file(const std::string& path);
std::string sheaf_to_json(const FreeStalkSheaf& F);
std::string sheaf_to_json(const PresentedSheaf& F);

}  // namespace finsheaf
