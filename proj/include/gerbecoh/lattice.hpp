#pragma once

#include "gerbecoh/normal_form.hpp"

#include <optional>
#include <vector>

namespace gerbecoh {

/// A sublattice of Z^n, stored by its canonical column Hermite basis.
class Lattice {
 public:
  Lattice() = default;

  static Lattice zero(std::size_t dim) { return Lattice(dim, IntMatrix(dim, 0), {}); }
  static Lattice full(std::size_t dim) { return span(IntMatrix::identity(dim)); }

  static Lattice span(const IntMatrix& generators) {
    ColumnHermite h = column_hermite_form(generators, false);
    return Lattice(generators.rows(), h.H.block(0, 0, generators.rows(), h.rank), h.pivot_rows);
  }
  static Lattice span(const std::vector<IntVector>& generators, std::size_t dim) {
    return span(IntMatrix::from_columns(generators, dim));
  }

  /// {x : M x in target}
  static Lattice preimage(const IntMatrix& M, const Lattice& target) {
    if (M.rows() != target.dim()) fail(ErrorKind::InvalidArgument, "preimage: dimension mismatch");
    IntMatrix neg = target.basis_;
    for (std::size_t i = 0; i < neg.rows(); ++i)
      for (std::size_t j = 0; j < neg.cols(); ++j) neg(i, j) = -neg(i, j);
    IntMatrix K = integer_kernel(M.hconcat(neg));
    return span(K.block(0, 0, M.cols(), K.cols()));
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return basis_.cols(); }
  const IntMatrix& basis() const noexcept { return basis_; }
  std::vector<IntVector> generators() const { return basis_.columns(); }

  /// Coordinates of v in the Hermite basis.
  std::optional<IntVector> coordinates(const IntVector& v) const {
    if (v.size() != dim_) fail(ErrorKind::InvalidArgument, "lattice membership: dimension mismatch");
    return solve_echelon(basis_, pivots_, rank(), v);
  }
  bool contains(const IntVector& v) const { return coordinates(v).has_value(); }
  bool contains(const Lattice& other) const {
    if (other.dim_ != dim_) return false;
    for (std::size_t j = 0; j < other.rank(); ++j)
      if (!contains(other.basis_.column(j))) return false;
    return true;
  }

  Lattice operator+(const Lattice& other) const {
    if (other.dim_ != dim_) fail(ErrorKind::InvalidArgument, "lattice sum: dimension mismatch");
    return span(basis_.hconcat(other.basis_));
  }
  Lattice intersection(const Lattice& other) const {
    // x = B a with B a in other.
    Lattice coeffs = preimage(basis_, other);
    return span(basis_ * coeffs.basis_);
  }
  Lattice image(const IntMatrix& M) const {
    if (M.cols() != dim_) fail(ErrorKind::InvalidArgument, "lattice image: dimension mismatch");
    if (rank() == 0) return zero(M.rows());
    return span(M * basis_);
  }

  bool operator==(const Lattice& o) const { return dim_ == o.dim_ && basis_ == o.basis_; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }

 private:
  Lattice(std::size_t dim, IntMatrix basis, std::vector<std::size_t> pivots)
      : dim_(dim), basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  std::size_t dim_ = 0;
  IntMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Block-diagonal sum of `copies` copies of L inside (Z^n)^copies.
inline Lattice repeated(const Lattice& L, std::size_t copies) {
  const std::size_t n = L.dim();
  const std::size_t k = L.rank();
  IntMatrix B(n * copies, k * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) B(c * n + i, c * k + j) = L.basis()(i, j);
  return Lattice::span(B);
}

}  // namespace gerbecoh
