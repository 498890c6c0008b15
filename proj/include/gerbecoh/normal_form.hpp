#pragma once

#include "gerbecoh/matrix.hpp"

#include <optional>
#include <vector>

namespace gerbecoh {

/// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... and d_i >= 0.
struct SmithForm {
  IntMatrix U, U_inv;
  IntMatrix D;
  IntMatrix V, V_inv;
  std::size_t rank = 0;

  Integer diagonal(std::size_t i) const { return i < D.rows() && i < D.cols() ? D(i, i) : Integer(0); }
};

inline SmithForm smith_normal_form(const IntMatrix& M) {
  const std::size_t n = M.rows();
  const std::size_t m = M.cols();
  SmithForm s{IntMatrix::identity(n), IntMatrix::identity(n), M, IntMatrix::identity(m), IntMatrix::identity(m), 0};
  IntMatrix& A = s.D;

  // Row/column operations mirrored on the transforms and their inverses.
  auto row_swap = [&](std::size_t a, std::size_t b) {
    A.swap_rows(a, b);
    s.U.swap_rows(a, b);
    s.U_inv.swap_cols(a, b);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    A.swap_cols(a, b);
    s.V.swap_cols(a, b);
    s.V_inv.swap_rows(a, b);
  };
  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& k) {  // row dst += k row src
    A.add_row(dst, src, k);
    s.U.add_row(dst, src, k);
    s.U_inv.add_col(src, dst, -k);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& k) {  // col dst += k col src
    A.add_col(dst, src, k);
    s.V.add_col(dst, src, k);
    s.V_inv.add_row(src, dst, -k);
  };

  std::size_t t = 0;
  while (t < n && t < m) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    bool found = false;
    std::size_t pi = t, pj = t;
    Integer best;
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = t; j < m; ++j) {
        if (A(i, j) == 0) continue;
        Integer a = abs_value(A(i, j));
        if (!found || a < best) {
          found = true;
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    row_swap(t, pi);
    col_swap(t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (A(i, t) == 0) continue;
        row_add(i, t, -floor_div(A(i, t), A(t, t)));
        if (A(i, t) != 0) {
          row_swap(t, i);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < m; ++j) {
        if (A(t, j) == 0) continue;
        col_add(j, t, -floor_div(A(t, j), A(t, t)));
        if (A(t, j) != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < n && divides; ++i)
        for (std::size_t j = t + 1; j < m; ++j)
          if (A(i, j) % A(t, t) != 0) {
            row_add(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (A(t, t) < 0) {
      A.negate_row(t);
      s.U.negate_row(t);
      s.U_inv.negate_col(t);
    }
    ++t;
  }
  s.rank = t;
  return s;
}

/// M * V = H with H in column Hermite form: the first `rank` columns are an echelon
/// basis of the column span (pivot rows strictly increasing, positive pivots, entries
/// left of each pivot reduced into [0, pivot)); the remaining columns are zero and the
/// matching columns of V span the integer kernel.
struct ColumnHermite {
  IntMatrix H;
  IntMatrix V;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;
};

inline ColumnHermite column_hermite_form(const IntMatrix& M, bool track_transform = true) {
  const std::size_t n = M.rows();
  const std::size_t m = M.cols();
  ColumnHermite out{M, track_transform ? IntMatrix::identity(m) : IntMatrix(), 0, {}};
  IntMatrix& H = out.H;
  auto col_swap = [&](std::size_t a, std::size_t b) {
    H.swap_cols(a, b);
    if (track_transform) out.V.swap_cols(a, b);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    H.add_col(dst, src, k);
    if (track_transform) out.V.add_col(dst, src, k);
  };
  auto col_negate = [&](std::size_t c) {
    H.negate_col(c);
    if (track_transform) out.V.negate_col(c);
  };

  std::size_t r = 0;
  for (std::size_t i = 0; i < n && r < m; ++i) {
    for (;;) {
      bool found = false;
      std::size_t best_k = r;
      Integer best;
      for (std::size_t k = r; k < m; ++k) {
        if (H(i, k) == 0) continue;
        Integer a = abs_value(H(i, k));
        if (!found || a < best) {
          found = true;
          best = a;
          best_k = k;
        }
      }
      if (!found) break;
      col_swap(r, best_k);
      bool done = true;
      for (std::size_t k = r + 1; k < m; ++k) {
        if (H(i, k) == 0) continue;
        col_add(k, r, -floor_div(H(i, k), H(i, r)));
        if (H(i, k) != 0) done = false;
      }
      if (done) break;
    }
    if (H(i, r) == 0) continue;
    if (H(i, r) < 0) col_negate(r);
    for (std::size_t k = 0; k < r; ++k) col_add(k, r, -floor_div(H(i, k), H(i, r)));
    out.pivot_rows.push_back(i);
    ++r;
  }
  out.rank = r;
  return out;
}

/// Columns spanning {x : M x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& M) {
  ColumnHermite h = column_hermite_form(M, true);
  const std::size_t m = M.cols();
  IntMatrix K(m, m - h.rank);
  for (std::size_t j = h.rank; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) K(i, j - h.rank) = h.V(i, j);
  return K;
}

/// Solves H y = b for an echelon basis H (as produced above, zero columns dropped).
inline std::optional<IntVector> solve_echelon(const IntMatrix& H, const std::vector<std::size_t>& pivots,
                                              std::size_t rank, const IntVector& b) {
  IntVector y(rank, 0);
  IntVector residual = b;
  for (std::size_t j = 0; j < rank; ++j) {
    const std::size_t p = pivots[j];
    // Rows strictly between pivots must already be cleared.
    const std::size_t prev = j == 0 ? 0 : pivots[j - 1] + 1;
    for (std::size_t i = prev; i < p; ++i)
      if (residual[i] != 0) return std::nullopt;
    if (residual[p] % H(p, j) != 0) return std::nullopt;
    y[j] = residual[p] / H(p, j);
    if (y[j] != 0)
      for (std::size_t i = p; i < H.rows(); ++i) residual[i] -= y[j] * H(i, j);
  }
  for (const auto& v : residual)
    if (v != 0) return std::nullopt;
  return y;
}

/// Some integer x with M x = b, if one exists.
inline std::optional<IntVector> solve_integer(const IntMatrix& M, const IntVector& b) {
  if (b.size() != M.rows()) fail(ErrorKind::InvalidArgument, "solve_integer: length mismatch");
  ColumnHermite h = column_hermite_form(M, true);
  auto y = solve_echelon(h.H, h.pivot_rows, h.rank, b);
  if (!y) return std::nullopt;
  IntVector x(M.cols(), 0);
  for (std::size_t i = 0; i < M.cols(); ++i)
    for (std::size_t j = 0; j < h.rank; ++j) x[i] += h.V(i, j) * (*y)[j];
  return x;
}

}  // namespace gerbecoh
