#pragma once

#include "gerbecoh/lattice.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gerbecoh {

/// Canonical invariant-factor presentation of Z^k / <relations>:
/// Z/d_1 + ... + Z/d_t + Z^f with d_1 | ... | d_t, every d_i >= 2.
/// Canonical coordinates list the torsion coordinates first (reduced into [0, d_i))
/// and then the free ones.
class AbelianPresentation {
 public:
  AbelianPresentation() = default;

  std::size_t ambient_rank() const noexcept { return ambient_rank_; }
  const std::vector<Integer>& invariant_factors() const noexcept { return invariant_factors_; }
  std::size_t torsion_rank() const noexcept { return invariant_factors_.size(); }
  std::size_t free_rank() const noexcept { return free_rank_; }
  std::size_t canonical_rank() const noexcept { return torsion_rank() + free_rank_; }
  bool is_finite() const noexcept { return free_rank_ == 0; }
  bool is_trivial() const noexcept { return free_rank_ == 0 && invariant_factors_.empty(); }

  Integer order() const {
    if (!is_finite()) fail(ErrorKind::InfiniteModule, "order of an infinite group");
    Integer o = 1;
    for (const auto& d : invariant_factors_) o *= d;
    return o;
  }
  Integer exponent() const {
    if (!is_finite()) fail(ErrorKind::InfiniteModule, "exponent of an infinite group");
    return invariant_factors_.empty() ? Integer(1) : invariant_factors_.back();
  }

  /// Modulus of canonical coordinate i (0 for a free coordinate).
  Integer modulus(std::size_t i) const { return i < torsion_rank() ? invariant_factors_[i] : Integer(0); }

  IntVector to_canonical(const IntVector& x) const {
    if (x.size() != ambient_rank_) fail(ErrorKind::InvalidArgument, "to_canonical: length mismatch");
    IntVector c = to_canonical_ * x;
    for (std::size_t i = 0; i < torsion_rank(); ++i) c[i] = mod_floor(c[i], invariant_factors_[i]);
    return c;
  }
  IntVector from_canonical(const IntVector& c) const {
    if (c.size() != canonical_rank()) fail(ErrorKind::InvalidArgument, "from_canonical: length mismatch");
    return from_canonical_ * c;
  }
  IntVector reduce(IntVector c) const {
    for (std::size_t i = 0; i < torsion_rank(); ++i) c[i] = mod_floor(c[i], invariant_factors_[i]);
    return c;
  }
  const IntMatrix& to_canonical_matrix() const noexcept { return to_canonical_; }
  const IntMatrix& from_canonical_matrix() const noexcept { return from_canonical_; }

  /// All canonical coordinate vectors of a finite group, in lexicographic order.
  std::vector<IntVector> enumerate() const {
    if (!is_finite()) fail(ErrorKind::InfiniteModule, "cannot enumerate an infinite group");
    std::vector<IntVector> out;
    IntVector c(torsion_rank(), 0);
    for (;;) {
      out.push_back(c);
      std::size_t i = c.size();
      while (i > 0) {
        --i;
        if (++c[i] < invariant_factors_[i]) break;
        c[i] = 0;
        if (i == 0) return out;
      }
      if (c.empty()) return out;
    }
  }

  std::string describe() const {
    if (is_trivial()) return "0";
    std::string s;
    for (const auto& d : invariant_factors_) s += (s.empty() ? "" : " + ") + ("Z/" + d.str());
    for (std::size_t i = 0; i < free_rank_; ++i) s += (s.empty() ? "" : " + ") + std::string("Z");
    return s;
  }

  friend AbelianPresentation quotient_presentation(std::size_t, const IntMatrix&);

 private:
  std::size_t ambient_rank_ = 0;
  std::vector<Integer> invariant_factors_;
  std::size_t free_rank_ = 0;
  IntMatrix to_canonical_;
  IntMatrix from_canonical_;
};

/// Presentation of Z^rank modulo the column span of `relations`.
inline AbelianPresentation quotient_presentation(std::size_t rank, const IntMatrix& relations) {
  if (relations.rows() != rank) fail(ErrorKind::InvalidArgument, "relations must have `rank` rows");
  SmithForm s = smith_normal_form(relations);
  AbelianPresentation p;
  p.ambient_rank_ = rank;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.D(i, i) != 1) {
      kept.push_back(i);
      p.invariant_factors_.push_back(s.D(i, i));
    }
  for (std::size_t i = s.rank; i < rank; ++i) kept.push_back(i);
  p.free_rank_ = rank - s.rank;
  p.to_canonical_ = IntMatrix(kept.size(), rank);
  p.from_canonical_ = IntMatrix(rank, kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c)
    for (std::size_t j = 0; j < rank; ++j) {
      p.to_canonical_(c, j) = s.U(kept[c], j);
      p.from_canonical_(j, c) = s.U_inv(j, kept[c]);
    }
  return p;
}

inline AbelianPresentation quotient_presentation(std::size_t rank, const std::vector<IntVector>& relations) {
  return quotient_presentation(rank, IntMatrix::from_columns(relations, rank));
}

/// The finitely generated abelian group numerator / denominator, both sublattices of Z^n.
class Subquotient {
 public:
  Subquotient() = default;
  Subquotient(Lattice numerator, Lattice denominator) : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (!num_.contains(den_)) fail(ErrorKind::InvalidArgument, "subquotient: denominator not contained in numerator");
    IntMatrix rel(num_.rank(), den_.rank());
    for (std::size_t j = 0; j < den_.rank(); ++j) {
      auto c = num_.coordinates(den_.basis().column(j));
      for (std::size_t i = 0; i < num_.rank(); ++i) rel(i, j) = (*c)[i];
    }
    pres_ = quotient_presentation(num_.rank(), rel);
  }

  static Subquotient whole(std::size_t dim) { return Subquotient(Lattice::full(dim), Lattice::zero(dim)); }

  std::size_t ambient_dim() const noexcept { return num_.dim(); }
  const Lattice& numerator() const noexcept { return num_; }
  const Lattice& denominator() const noexcept { return den_; }
  const AbelianPresentation& presentation() const noexcept { return pres_; }
  bool is_finite() const noexcept { return pres_.is_finite(); }
  bool is_trivial() const noexcept { return pres_.is_trivial(); }
  Integer order() const { return pres_.order(); }
  const std::vector<Integer>& invariant_factors() const noexcept { return pres_.invariant_factors(); }
  std::size_t free_rank() const noexcept { return pres_.free_rank(); }
  std::string describe() const { return pres_.describe(); }

  bool contains(const IntVector& v) const { return num_.contains(v); }

  IntVector canonical(const IntVector& v) const {
    auto c = num_.coordinates(v);
    if (!c) fail(ErrorKind::InvalidArgument, "element " + to_string(v) + " does not lie in the group");
    return pres_.to_canonical(*c);
  }
  IntVector representative(const IntVector& canonical_coords) const {
    return num_.basis() * pres_.from_canonical(canonical_coords);
  }
  IntVector normal_form(const IntVector& v) const { return representative(canonical(v)); }
  bool is_zero(const IntVector& v) const { return den_.contains(v); }
  bool equal(const IntVector& a, const IntVector& b) const { return den_.contains(a - b); }

  /// Ambient representatives of the canonical generators.
  std::vector<IntVector> generators() const {
    std::vector<IntVector> g;
    for (std::size_t i = 0; i < pres_.canonical_rank(); ++i)
      g.push_back(representative(unit_vector(pres_.canonical_rank(), i)));
    return g;
  }
  /// Torsion subgroup, read off the invariant factors (as a lattice containing the denominator).
  Lattice torsion() const {
    std::vector<IntVector> g = den_.generators();
    for (std::size_t i = 0; i < pres_.torsion_rank(); ++i)
      g.push_back(representative(unit_vector(pres_.canonical_rank(), i)));
    return g.empty() ? Lattice::zero(ambient_dim()) : Lattice::span(g, ambient_dim());
  }
  /// Ambient representatives of every element (finite groups only).
  std::vector<IntVector> elements() const {
    std::vector<IntVector> out;
    for (const auto& c : pres_.enumerate()) out.push_back(representative(c));
    return out;
  }
  /// Element order of a class (0 when infinite).
  Integer element_order(const IntVector& v) const {
    IntVector c = canonical(v);
    for (std::size_t i = pres_.torsion_rank(); i < c.size(); ++i)
      if (c[i] != 0) return 0;
    Integer o = 1;
    for (std::size_t i = 0; i < pres_.torsion_rank(); ++i) {
      Integer d = pres_.invariant_factors()[i];
      o = lcm(o, d / gcd(d, c[i]));
    }
    return o;
  }

  /// The same group carried along an injective integer map of ambients.
  Subquotient transported(const IntMatrix& M) const { return Subquotient(num_.image(M), den_.image(M)); }

  /// Subgroup given as a lattice between denominator and numerator.
  Subquotient subgroup(const Lattice& L) const { return Subquotient(L + den_, den_); }

 private:
  Lattice num_, den_;
  AbelianPresentation pres_;
};

/// Order of the subgroup L/den inside a subquotient.
inline Integer subgroup_order(const Lattice& L, const Lattice& den) { return Subquotient(L + den, den).order(); }

/// Homomorphism between subquotients induced by an integer matrix of ambients.
struct Homomorphism {
  Subquotient source;
  Subquotient target;
  IntMatrix matrix;  // target.ambient_dim() x source.ambient_dim()

  IntVector apply(const IntVector& v) const { return matrix * v; }

  bool well_defined() const {
    return target.numerator().contains(source.numerator().image(matrix)) &&
           target.denominator().contains(source.denominator().image(matrix));
  }
  /// Preimage lattice of the target's zero inside the source numerator.
  Lattice kernel() const {
    Lattice coeffs = Lattice::preimage(matrix * source.numerator().basis(), target.denominator());
    return Lattice::span(source.numerator().basis() * coeffs.basis()) + source.denominator();
  }
  Lattice image() const { return source.numerator().image(matrix) + target.denominator(); }
  bool injective() const { return kernel() == source.denominator(); }
  bool surjective() const { return image() == target.numerator(); }
  bool is_isomorphism() const { return injective() && surjective(); }
};

inline Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  return Homomorphism{f.source, g.target, g.matrix * f.matrix};
}

/// ker(g) == im(f) for source(g) == target(f).
inline bool exact_at(const Homomorphism& f, const Homomorphism& g) { return g.kernel() == f.image(); }

/// Order of the left kernel of a Q/Z-valued pairing between finite groups, given by its
/// values on canonical generators: values[i][j] = <e_i, f_j>.
inline Integer left_kernel_order(const AbelianPresentation& left, const std::vector<std::vector<QZValue>>& values) {
  if (!left.is_finite()) fail(ErrorKind::InfiniteModule, "pairing on an infinite group");
  const std::size_t t = left.torsion_rank();
  if (values.size() != t) fail(ErrorKind::InvalidArgument, "pairing table has the wrong number of rows");
  const std::size_t cols = t == 0 ? 0 : values.front().size();
  Integer L = 1;
  for (const auto& row : values)
    for (const auto& v : row) L = lcm(L, v.denominator());
  // sum_i x_i L <e_i, f_j> = 0 mod L for every j
  IntMatrix M(cols, t);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < t; ++i) M(j, i) = numerator(values[i][j].value() * Rational(L));
  Lattice ker = Lattice::preimage(M, Lattice::span(L * IntMatrix::identity(cols)));
  IntMatrix rel(t, t);
  for (std::size_t i = 0; i < t; ++i) rel(i, i) = left.invariant_factors()[i];
  Lattice den = Lattice::span(rel);
  return Subquotient(ker + den, den).order();
}

/// Perfectness of a pairing between finite groups: both kernels vanish.
inline bool pairing_is_perfect(const AbelianPresentation& left, const AbelianPresentation& right,
                               const std::vector<std::vector<QZValue>>& values) {
  if (left.order() != right.order()) return false;
  std::vector<std::vector<QZValue>> transposed(right.torsion_rank(), std::vector<QZValue>(left.torsion_rank()));
  for (std::size_t i = 0; i < left.torsion_rank(); ++i)
    for (std::size_t j = 0; j < right.torsion_rank(); ++j) transposed[j][i] = values[i][j];
  return left_kernel_order(left, values) == 1 && left_kernel_order(right, transposed) == 1;
}

}  // namespace gerbecoh
