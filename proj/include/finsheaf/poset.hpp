// Finite T0-spaces as posets.  Opens are up-sets: U_x = {y >= x} is the
// smallest open containing x and C_x = {y <= x} is its closure.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "finsheaf/zlinalg.hpp"

namespace finsheaf {

using Chain = std::vector<int>;  // x_0 < x_1 < ... < x_p, element indices

class FinPoset {
 public:
  FinPoset() = default;
  /// Builds the order generated by `relations` (pairs x < y, not necessarily
  /// covers).  Throws PreconditionError on cycles, duplicate or empty labels.
  FinPoset(std::vector<std::string> labels, const std::vector<std::pair<int, int>>& relations);
  static FinPoset from_labeled_relations(std::vector<std::string> labels,
                                         const std::vector<std::pair<std::string, std::string>>& relations);

  int size() const { return static_cast<int>(labels_.size()); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(int x) const { return labels_[x]; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Index of a label; throws PreconditionError if absent.
  int index(const std::string& label) const;
  std::optional<int> find(const std::string& label) const;

  bool leq(int x, int y) const { return leq_[x * labels_.size() + y] != 0; }
  bool lt(int x, int y) const { return x != y && leq(x, y); }
  bool comparable(int x, int y) const { return leq(x, y) || leq(y, x); }

  /// Cover pairs (x, y) with x < y and nothing in between, sorted.
  const std::vector<std::pair<int, int>>& covers() const { return covers_; }
  bool is_cover(int x, int y) const;
  const std::vector<int>& upper_covers(int x) const { return upper_[x]; }
  const std::vector<int>& lower_covers(int x) const { return lower_[x]; }
  /// Elements strictly above / below x, ascending index.
  const std::vector<int>& strictly_above(int x) const { return above_[x]; }
  const std::vector<int>& strictly_below(int x) const { return below_[x]; }

  /// Elements listed so that x < y implies x comes first.
  const std::vector<int>& linear_extension() const { return topo_; }

  /// Longest chain starting at x (dim U_x) and ending at x (dim C_x).
  int dim_up(int x) const { return height_up_[x]; }
  int dim_down(int x) const { return height_down_[x]; }
  /// Length of the longest chain; -1 for the empty poset.
  int dim() const;

  std::vector<int> minimal_elements() const;
  std::vector<int> maximal_elements() const;

  bool operator==(const FinPoset& o) const { return labels_ == o.labels_ && covers_ == o.covers_; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
  std::vector<std::uint8_t> leq_;
  std::vector<std::pair<int, int>> covers_;
  std::vector<std::vector<int>> upper_, lower_, above_, below_;
  std::vector<int> topo_;
  std::vector<int> height_up_, height_down_;
};

enum class SubsetKind { Open, Closed, LocallyClosed, Arbitrary };

/// Subset of a poset; `elements` sorted ascending.  Open and closed subsets
/// are reported as such even when they are both (Open takes precedence).
struct SubSpace {
  std::vector<int> elements;
  SubsetKind kind = SubsetKind::Arbitrary;
  bool contains(int x) const;
};

bool is_open(const FinPoset& X, const std::vector<int>& s);
bool is_closed(const FinPoset& X, const std::vector<int>& s);
bool is_locally_closed(const FinPoset& X, const std::vector<int>& s);
SubSpace make_subspace(const FinPoset& X, std::vector<int> s);
/// Smallest closed set containing s.
std::vector<int> closure(const FinPoset& X, const std::vector<int>& s);

SubSpace up_set(const FinPoset& X, int x);
SubSpace down_set(const FinPoset& X, int x);
/// Induced subposet on `elements` (kept in the given order, labels preserved).
FinPoset induced(const FinPoset& X, const std::vector<int>& elements);
/// (x, y) = U_x^* cap C_y^*; requires x <= y.
FinPoset open_interval(const FinPoset& X, int x, int y);
/// [x, y]; requires x <= y.
FinPoset closed_interval(const FinPoset& X, int x, int y);
std::vector<int> open_interval_elements(const FinPoset& X, int x, int y);
/// U_x^* and C_x^* as subposets.
FinPoset punctured_up(const FinPoset& X, int x);
FinPoset punctured_down(const FinPoset& X, int x);

struct StructureReport {
  int dim = -1;
  bool is_pure = true;
  bool is_catenary = true;
  bool is_local = false;
  bool is_irreducible = false;
  bool is_connected = false;
  std::vector<int> closed_points;
  std::vector<int> generic_points;
};
StructureReport structure_report(const FinPoset& X);
bool is_catenary(const FinPoset& X);
bool is_pure(const FinPoset& X);
bool is_connected(const FinPoset& X);
/// Connected components, each sorted; components ordered by smallest element.
std::vector<std::vector<int>> connected_components(const FinPoset& X);
/// The unique minimum (closed point) of a local poset.
std::optional<int> closed_point(const FinPoset& X);
/// The unique maximum (generic point) of an irreducible poset.
std::optional<int> generic_point(const FinPoset& X);

using CodimFunction = std::vector<long>;

/// Solves d(x) = d(y) + 1 over covers.  Components without an anchor get
/// value 0 at their lexicographically first maximal label.  Returns nullopt
/// when the constraints are inconsistent; throws PreconditionError when a
/// component carries two anchors.
std::optional<CodimFunction> codimension_function(const FinPoset& X, const std::map<int, long>& anchors = {});
bool is_codimension_function(const FinPoset& X, const CodimFunction& phi);
/// phi_x = -dim C_x, meaningful for local spaces.
CodimFunction codim_local_preset(const FinPoset& X);
/// phi_x = dim U_x, meaningful for irreducible spaces.
CodimFunction codim_irreducible_preset(const FinPoset& X);

FinPoset opposite(const FinPoset& X);
/// Elements (x,y) with label "(a,b)", index x * |Y| + y.
FinPoset product(const FinPoset& X, const FinPoset& Y);
/// Nonempty chains ordered by inclusion; labels "[a<b<c]".
FinPoset barycentric(const FinPoset& X);
/// X with a new bottom and top adjoined (labels chosen to be fresh).
FinPoset with_bounds(const FinPoset& X);

struct ChainConstraints {
  int max_length = -1;               // -1 = unbounded
  std::optional<int> first;          // required x_0
  const std::vector<char>* within = nullptr;  // membership mask, if any
};

/// All chains satisfying the constraints, lexicographic by element index.
std::vector<Chain> chains(const FinPoset& X, const ChainConstraints& c = {});
void for_each_chain(const FinPoset& X, const ChainConstraints& c, const std::function<void(const Chain&)>& f);
std::size_t count_chains(const FinPoset& X);

std::string chain_label(const FinPoset& X, const Chain& c);

/// Order isomorphism test (labels ignored).
bool are_isomorphic(const FinPoset& X, const FinPoset& Y);

/// All posets on n elements up to isomorphism (labels "0".."n-1").
std::vector<FinPoset> enumerate_posets(int n);
/// Random poset: random DAG on n points with edge probability p, closed
/// transitively, then relabeled by a random permutation.
FinPoset random_poset(int n, double p, std::mt19937_64& rng);

// Text and JSON formats.
FinPoset parse_poset_text(const std::string& text);
std::string poset_to_text(const FinPoset& X);
FinPoset parse_poset_json(const std::string& text);
std::string poset_to_json(const FinPoset& X);
/// Reads a poset file, choosing the format by content.
FinPoset read_poset_file(const std::string& path);

}  // namespace finsheaf
