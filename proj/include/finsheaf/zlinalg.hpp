// Exact integer linear algebra: Smith normal form, finitely generated
// abelian groups and the homology of bounded free complexes.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace finsheaf {

using Integer = mpz_class;

/// Raised when a caller violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const;
  bool is_zero() const;
  bool is_diagonal() const;
  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix operator-() const;
  IntMatrix operator+(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix& rhs) const = default;

  /// Kronecker (tensor) product; rows/cols index pairs (i, j) as i * other + j.
  IntMatrix kron(const IntMatrix& rhs) const;

  std::vector<std::vector<Integer>> to_rows() const;
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Determinant by fraction-free (Bareiss) elimination.
Integer determinant(const IntMatrix& m);

/// Compressed sparse row matrix; the storage used by large differentials.
class SparseIntMatrix {
 public:
  struct Entry {
    std::size_t col;
    Integer value;
  };

  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_entries_(rows) {}
  static SparseIntMatrix from_dense(const IntMatrix& m);
  static SparseIntMatrix identity(std::size_t n);
  /// Rows given as unsorted (col, value) lists; duplicates are summed.
  static SparseIntMatrix from_rows(std::size_t rows, std::size_t cols, std::vector<std::vector<Entry>> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const;

  /// Accumulates `value` into entry (r, c).
  void add(std::size_t r, std::size_t c, const Integer& value);
  const std::vector<Entry>& row(std::size_t r) const { return row_entries_[r]; }

  /// Entry lookup by binary search.
  Integer at(std::size_t r, std::size_t c) const;

  IntMatrix to_dense() const;
  SparseIntMatrix transpose() const;
  SparseIntMatrix operator*(const SparseIntMatrix& rhs) const;
  SparseIntMatrix operator+(const SparseIntMatrix& rhs) const;
  SparseIntMatrix scaled(const Integer& c) const;
  SparseIntMatrix kron(const SparseIntMatrix& rhs) const;
  std::vector<Integer> apply(const std::vector<Integer>& v) const;
  bool is_zero() const;
  bool operator==(const SparseIntMatrix& rhs) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<Entry>> row_entries_;  // sorted by column, no zeros
};

struct SmithForm {
  IntMatrix S;     // U * M * V
  IntMatrix U;
  IntMatrix V;
  IntMatrix Uinv;  // U^{-1}
  IntMatrix Vinv;  // V^{-1}
  std::size_t rank = 0;
};

/// Collects entries in any order and builds a SparseIntMatrix.
class SparseBuilder {
 public:
  SparseBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows) {}
  void add(std::size_t r, std::size_t c, const Integer& v);
  /// Adds scale * m with its top-left corner at (r0, c0).
  void add_block(std::size_t r0, std::size_t c0, const SparseIntMatrix& m, const Integer& scale = 1);
  SparseIntMatrix build();

 private:
  std::size_t rows_, cols_;
  std::vector<std::vector<SparseIntMatrix::Entry>> entries_;
};

/// Smith normal form with unimodular transforms: S = U*M*V, diagonal,
/// d_1 | d_2 | ... with d_i > 0 followed by zeros.
SmithForm smith_normal_form(const IntMatrix& m);

/// Solution c of M c = u given the Smith form of M, if one exists over Z.
std::optional<std::vector<Integer>> solve_with(const SmithForm& s, const std::vector<Integer>& u);
/// Basis (as columns) of the lattice spanned by the columns of m.
IntMatrix column_span_basis(const IntMatrix& m);
/// Basis (as columns) of the integer kernel of m.
IntMatrix kernel_basis(const IntMatrix& m);

/// Nonzero invariant factors (units included) of a matrix.
std::vector<Integer> invariant_factors(const IntMatrix& m);
std::vector<Integer> invariant_factors(const SparseIntMatrix& m);

/// Isomorphism type of a finitely generated abelian group Z^rank + sum Z/d_i.
class FgGroup {
 public:
  FgGroup() = default;
  explicit FgGroup(std::size_t rank, std::vector<Integer> torsion = {});

  /// Normalizes arbitrary cyclic orders (entries 0 mean Z, 1 are dropped).
  static FgGroup from_cyclic(const std::vector<Integer>& orders);
  static FgGroup free(std::size_t rank) { return FgGroup(rank); }

  std::size_t rank() const { return rank_; }
  const std::vector<Integer>& torsion() const { return torsion_; }
  bool is_zero() const { return rank_ == 0 && torsion_.empty(); }
  bool is_free() const { return torsion_.empty(); }
  bool is_torsion() const { return rank_ == 0; }
  /// Free part is zero or torsion part is zero.
  bool is_unmixed() const { return rank_ == 0 || torsion_.empty(); }

  FgGroup torsion_part() const { return FgGroup(0, torsion_); }
  FgGroup free_part() const { return FgGroup(rank_); }

  bool operator==(const FgGroup&) const = default;
  std::string to_string() const;

 private:
  std::size_t rank_ = 0;
  std::vector<Integer> torsion_;  // invariant factors, each >= 2, d_i | d_{i+1}
};

bool groups_iso(const FgGroup& g, const FgGroup& h);
FgGroup direct_sum(const FgGroup& g, const FgGroup& h);
FgGroup tensor(const FgGroup& g, const FgGroup& h);
FgGroup tor(const FgGroup& g, const FgGroup& h);

struct GroupDual {
  FgGroup hom;   // Hom(G, Z)
  FgGroup ext1;  // Ext^1(G, Z)
};
GroupDual fg_group_dual(const FgGroup& g);

/// Degree -> group; zero groups are never stored.
class GradedGroups {
 public:
  GradedGroups() = default;
  GradedGroups(std::initializer_list<std::pair<const int, FgGroup>> items);

  FgGroup at(int degree) const;
  void set(int degree, FgGroup g);
  void add(int degree, const FgGroup& g);
  bool is_zero() const { return groups_.empty(); }
  const std::map<int, FgGroup>& items() const { return groups_; }

  /// Degrees reindexed by `k`: result(n) = this(n + k), i.e. E[k].
  GradedGroups shifted(int k) const;
  /// Alternating sum of ranks.
  long euler_characteristic() const;
  /// Single nonzero degree, if any.
  bool concentrated_in(int degree) const;

  bool operator==(const GradedGroups&) const = default;
  std::string to_string() const;

 private:
  std::map<int, FgGroup> groups_;
};

/// Cohomology of RHom_Z(E, Z) from the cohomology of E (universal coefficients).
GradedGroups dual_graded(const GradedGroups& h);
/// Cohomology of the derived tensor product (Kunneth formula).
GradedGroups derived_tensor(const GradedGroups& a, const GradedGroups& b);

/// Bounded cochain complex of free abelian groups in degrees [lo, lo + size).
class FreeComplexZ {
 public:
  FreeComplexZ() = default;
  FreeComplexZ(int lo, std::vector<std::size_t> ranks);

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
  bool empty() const { return ranks_.empty(); }
  std::size_t rank(int degree) const;
  /// Differential from `degree` to `degree + 1` (rank(degree+1) x rank(degree)).
  const SparseIntMatrix& differential(int degree) const;
  SparseIntMatrix& differential(int degree);
  void set_differential(int degree, SparseIntMatrix d);

  bool is_complex() const;
  long euler_characteristic() const;

 private:
  int lo_ = 0;
  std::vector<std::size_t> ranks_;
  std::vector<SparseIntMatrix> diffs_;  // diffs_[k]: lo+k -> lo+k+1
  SparseIntMatrix empty_;
};

/// H^i = ker d^i / im d^{i-1}; throws PreconditionError unless d o d = 0.
GradedGroups homology_of(const FreeComplexZ& c);
/// RHom_Z(C, Z): transposed differentials, negated degrees.
FreeComplexZ derived_dual(const FreeComplexZ& c);

/// Presentation of a cohomology group with explicit generators, used to
/// extract cohomology sheaves with their induced maps.
struct PresentedCohomology {
  FgGroup group;
  /// Generators as vectors in the ambient free group; torsion generators first
  /// (orders = group.torsion()), then free generators.
  std::vector<std::vector<Integer>> generators;
  /// Coordinates of a cocycle in the ambient group, returned in generator
  /// order (torsion coordinates reduced modulo their order).
  std::vector<Integer> coordinates(const std::vector<Integer>& cocycle) const;

  IntMatrix coord_map;            // ambient vector -> normalized kernel coordinates
  std::vector<std::size_t> kept;  // normalized coordinates kept, in generator order
};

/// Presentation of ker(d_out) / im(d_in) (dense; for stalk-size complexes).
PresentedCohomology present_cohomology(const IntMatrix& d_in, const IntMatrix& d_out, std::size_t dim);

}  // namespace finsheaf
