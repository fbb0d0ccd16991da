// Simplicial complexes as closed subspaces of the affine space A^n over F1,
// that is downward closed families of subsets of {1..n}.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finsheaf/poset.hpp"
#include "finsheaf/zlinalg.hpp"

namespace finsheaf {

using Face = std::vector<int>;  // sorted vertex indices

class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  /// Facets may be redundant; non-maximal ones are dropped.  Vertex indices
  /// refer to `vertices`.
  SimplicialComplex(std::vector<std::string> vertices, std::vector<Face> facets, bool projective);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Face>& facets() const { return facets_; }
  /// All faces, by dimension and then lexicographically.  The empty face is
  /// listed first unless the complex is projective.
  const std::vector<Face>& faces() const { return faces_; }
  bool projective() const { return projective_; }
  bool contains(const Face& f) const;
  /// Dimension of the largest facet; -1 for {empty face}, -2 when there is no face at all.
  int dim() const;
  std::string face_label(const Face& f) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Face> facets_;
  std::vector<Face> faces_;
  bool projective_ = false;
};

/// Subsets of {1..n} by inclusion, with and without the empty set.
FinPoset affine_space(int n);
FinPoset projective_space(int n);

struct FacePoset {
  SimplicialComplex complex;
  FinPoset poset;
  /// embedding[i] is the face of poset element i as a subset of {0..n-1}.
  std::vector<Face> embedding;
};
/// Vertices are numbered by first appearance.  Throws PreconditionError on an
/// empty facet list.
FacePoset from_facets(const std::vector<std::vector<std::string>>& facets, bool projective);
FinPoset face_poset(const SimplicialComplex& K);

/// {tau : tau cap sigma = empty, tau cup sigma in K}, as an affine complex.
SimplicialComplex link(const SimplicialComplex& K, const Face& sigma);

/// Reduced homology from the simplicial chain complex, empty face in degree -1.
GradedGroups simplicial_reduced_homology(const SimplicialComplex& K);

struct ReisnerVerdict {
  bool holds = true;
  std::optional<Face> face;  // first failing face
  int degree = 0;
  FgGroup group;
};
/// For every face sigma, including the empty one, the reduced homology of
/// link(sigma) vanishes below dim link(sigma).
ReisnerVerdict reisner_check(const SimplicialComplex& K);

/// Minimal non-faces as monomials "x1*x3", variables numbered from 1 by vertex
/// index; sorted.
std::vector<std::string> sr_ideal(const SimplicialComplex& K);

/// Faces are the chains of X; vertices are the elements of X.
SimplicialComplex order_complex(const FinPoset& X);

/// One facet per line, whitespace separated labels, "#" starts a comment.
std::vector<std::vector<std::string>> parse_facets(const std::string& text);
std::vector<std::vector<std::string>> read_facet_file(const std::string& path);

}  // namespace finsheaf
