#pragma once

// Exact integer linear algebra: Smith normal form, cokernels, kernels and
// canonical forms of finitely generated abelian groups.

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhk {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense integer matrix, row-major. Zero-row and zero-column shapes are valid.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries);

  static IntMatrix identity(std::size_t n);
  /// Builds a matrix from nested initializer data, mostly for tests.
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  /// Columns are the given vectors; `height` is needed when `columns` is empty.
  static IntMatrix from_columns(std::span<const IntVector> columns,
                                std::size_t height);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const Integer& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  IntVector column(std::size_t c) const;
  IntVector row(std::size_t r) const;
  IntMatrix transpose() const;
  /// Horizontal concatenation [*this | rhs].
  IntMatrix hconcat(const IntMatrix& rhs) const;

  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend IntVector operator*(const IntMatrix& a, const IntVector& x);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

std::string to_string(const IntMatrix& m);

/// Rank of a free summand; `omega` stands for countably infinite rank.
class FreeRank {
 public:
  constexpr FreeRank(std::size_t n = 0) : value_(n), omega_(false) {}
  static constexpr FreeRank omega() {
    FreeRank r;
    r.omega_ = true;
    return r;
  }

  bool is_omega() const { return omega_; }
  std::size_t value() const;
  std::string to_string() const;

  friend bool operator==(const FreeRank& a, const FreeRank& b) {
    return a.omega_ == b.omega_ && (a.omega_ || a.value_ == b.value_);
  }

 private:
  std::size_t value_;
  bool omega_;
};

/// Finitely generated abelian group (or free group of rank omega) in
/// invariant-factor form. Two values are isomorphic iff they compare equal.
struct AbelianGroup {
  FreeRank free_rank;
  std::vector<Integer> torsion;  // each >= 2, each divides the next

  static AbelianGroup trivial() { return {}; }
  static AbelianGroup free(FreeRank rank) { return {rank, {}}; }
  /// Z^rank + sum of Z/c for arbitrary cyclic orders c (0 means Z, 1 is
  /// dropped); normalizes to invariant factors.
  static AbelianGroup from_cyclic(std::size_t rank,
                                  std::span<const Integer> orders);

  bool is_trivial() const {
    return !free_rank.is_omega() && free_rank.value() == 0 && torsion.empty();
  }
  Integer torsion_order() const;
  std::string to_string() const;

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b);
};

struct SnfResult {
  IntMatrix d;
  IntMatrix u;  // rows x rows, unimodular
  IntMatrix v;  // cols x cols, unimodular
};

/// Smith normal form with transforms: u * a * v == d. Pivoting picks the
/// nonzero entry of least absolute value, first in row-major order.
SnfResult snf(const IntMatrix& a);

/// Diagonal of the Smith normal form (length min(rows, cols)), without
/// building transforms.
std::vector<Integer> snf_diagonal(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);

/// Z^rows / image(a).
AbelianGroup cokernel(const IntMatrix& a);

/// Z-basis of {x : a x = 0}, in row Hermite normal form (so the basis is
/// canonical for the lattice and every vector is primitive).
std::vector<IntVector> kernel_basis(const IntMatrix& a);

/// Row Hermite normal form of the lattice spanned by `vectors`; zero rows are
/// dropped. Vectors must share one length.
std::vector<IntVector> hermite_basis(std::span<const IntVector> vectors);

/// Subgroup of Z^n / image(relations) generated by the classes of
/// `generators`, each of length n = relations.rows().
AbelianGroup subgroup_invariants(const IntMatrix& relations,
                                 std::span<const IntVector> generators);

/// Exact determinant (fraction-free Bareiss elimination).
Integer determinant(const IntMatrix& a);

}  // namespace bhk
