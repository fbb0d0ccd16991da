// Finite models of dualizing complexes, canonical complexes and the duality
// functor D = RHom(-, Omega).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finsheaf/cohomology.hpp"
#include "finsheaf/poset.hpp"
#include "finsheaf/sheaf.hpp"

namespace finsheaf {

enum class DualizingKind { Global, AlongClosed, Local };

/// K^{-p} = sum over p-chains x_0 < ... < x_p with x_0 in the support of Z_{C_{x_p}}.
struct DualizingModel {
  DualizingKind kind = DualizingKind::Global;
  PosetPtr base;
  std::vector<int> support;
  CostalkComplex costalk;
  SheafComplex complex() const { return to_sheaf(costalk); }
};

/// Y is ignored for the global kind and must be closed for AlongClosed; the
/// local kind requires a local X and uses its closed point.
DualizingModel dualizing_model(PosetPtr X, DualizingKind kind, const std::vector<int>& Y = {});

/// Hom(F, I) for a complex I of sums of Z_{C_x}.  Since Hom(F, Z_{C_x}) is
/// Hom_Z(F_x, Z) and the Z_{C_x} are acyclic for Hom out of free stalks, this
/// computes RHom(F, I) as a sheaf.
CostalkComplex hom_into(const SheafComplex& F, const CostalkComplex& I);

/// RHom(F, K_Y) against the dual of R Gamma_Y(X, F).
enum class DualityEngine { Generic, Costalk };
bool verify_local_duality(const SheafComplex& F, const std::vector<int>& Y,
                          DualityEngine engine = DualityEngine::Generic);

struct IntervalVerdict {
  int x = -1, y = -1;
  int dim = -1;  // dimension of the open interval
  GradedGroups homology;
  bool sphere = false;
};

struct DualizabilityReport {
  bool is_catenary = false;
  std::vector<IntervalVerdict> intervals;
  bool all_spheres = false;
  bool is_locally_dualizable = false;
  std::optional<IntervalVerdict> witness;  // first non-sphere interval
  std::string reason() const;
};
DualizabilityReport sphere_report(const FinPoset& X);

struct CanonicalDescriptor {
  enum class Kind { LocalModel, GenericSkyscraper, LocallyDualizableOnly, None };
  Kind kind = Kind::None;
  DualizabilityReport report;
  std::optional<CodimFunction> phi;
  /// phi_x = -dim C_x when X is also local and the primary answer is the skyscraper.
  std::optional<CodimFunction> local_phi;
  std::optional<SheafComplex> omega;
};
/// Irreducible spaces get the generic skyscraper, local ones the local
/// dualizing model; other spaces only get the local verdict.
CanonicalDescriptor canonical_complex(PosetPtr X);

/// Omega_x = L_red(U_x^*)[1 - phi_x]: homological degree i in degree phi_x - 1 - i.
std::vector<GradedGroups> canonical_stalks(const FinPoset& X, const CodimFunction& phi);

/// Throws PreconditionError unless X is local and locally dualizable.
void require_dualizable_local(const FinPoset& X);
/// D(F) against the local dualizing model.
SheafComplex dualize(const SheafComplex& F);
/// The same through the generic sheaf RHom engine.
SheafComplex dualize_generic(const SheafComplex& F);

/// Stalk cohomology of D(D(F)) against that of F.
bool reflexivity_check(const SheafComplex& F);

/// RHom(Z_K, D_X^Y) against the model of K along Y cap K extended by zero.
bool verify_closed_restriction(PosetPtr X, const std::vector<int>& Y, const std::vector<int>& K);

}  // namespace finsheaf
