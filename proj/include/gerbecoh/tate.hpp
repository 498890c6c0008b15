#pragma once

#include "gerbecoh/gamma_module.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace gerbecoh {

constexpr int kMinDegree = -3;
constexpr int kMaxDegree = 3;

/// Number of group arguments of an inhomogeneous cochain in the given degree.
inline std::size_t cochain_arity(int degree) {
  switch (degree) {
    case -3: return 2;
    case -2: return 1;
    case -1:
    case 0: return 0;
    case 1: return 1;
    case 2: return 2;
    case 3: return 3;
    default: fail(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(degree) + " outside -3..3");
  }
}

inline std::size_t int_pow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

/// A Tate cochain: values in Z^rank (representatives modulo the relations) indexed by
/// tuples of group elements; tuple (s, t) has index s * |G| + t.
struct TateCochain {
  int degree = 0;
  std::size_t group_order = 1;
  std::size_t rank = 0;
  IntVector data;

  TateCochain() = default;
  TateCochain(int deg, std::size_t n, std::size_t r)
      : degree(deg), group_order(n), rank(r), data(int_pow(n, cochain_arity(deg)) * r, 0) {}
  TateCochain(int deg, std::size_t n, std::size_t r, IntVector values) : TateCochain(deg, n, r) {
    if (values.size() != data.size()) fail(ErrorKind::InvalidArgument, "cochain data has the wrong length");
    data = std::move(values);
  }

  std::size_t slots() const { return int_pow(group_order, cochain_arity(degree)); }
  IntVector at(std::size_t slot) const {
    return IntVector(data.begin() + static_cast<std::ptrdiff_t>(slot * rank),
                     data.begin() + static_cast<std::ptrdiff_t>((slot + 1) * rank));
  }
  IntVector at(std::size_t s, std::size_t t) const { return at(s * group_order + t); }
  void set(std::size_t slot, const IntVector& v) {
    for (std::size_t i = 0; i < rank; ++i) data[slot * rank + i] = v[i];
  }
  void add(std::size_t slot, const IntVector& v, const Integer& k = 1) {
    for (std::size_t i = 0; i < rank; ++i) data[slot * rank + i] += k * v[i];
  }

  TateCochain operator+(const TateCochain& o) const {
    TateCochain c = *this;
    c.data = data + o.data;
    return c;
  }
  TateCochain operator-(const TateCochain& o) const {
    TateCochain c = *this;
    c.data = data - o.data;
    return c;
  }
};

/// Cohomology Z/B of a Tate complex in one degree, as a subquotient of the cochain space.
class CohomologySpace {
 public:
  CohomologySpace() = default;
  CohomologySpace(int degree, std::size_t n, std::size_t r, Lattice cocycles, Lattice coboundaries)
      : degree_(degree), n_(n), r_(r), group_(std::move(cocycles), std::move(coboundaries)) {}

  int degree() const noexcept { return degree_; }
  const Subquotient& group() const noexcept { return group_; }
  const AbelianPresentation& presentation() const noexcept { return group_.presentation(); }
  const Lattice& cocycles() const noexcept { return group_.numerator(); }
  const Lattice& coboundaries() const noexcept { return group_.denominator(); }
  Integer order() const { return group_.order(); }
  std::string describe() const { return group_.describe(); }

  bool is_cocycle(const TateCochain& f) const { return check(f), group_.contains(f.data); }
  IntVector classify(const TateCochain& f) const {
    check(f);
    if (!group_.contains(f.data)) fail(ErrorKind::NotACycle, "cochain is not a cocycle in degree " + std::to_string(degree_));
    return group_.canonical(f.data);
  }
  TateCochain representative(const IntVector& canonical) const {
    return TateCochain(degree_, n_, r_, group_.representative(canonical));
  }
  std::vector<TateCochain> representatives() const {
    std::vector<TateCochain> out;
    for (const auto& g : group_.generators()) out.emplace_back(degree_, n_, r_, g);
    return out;
  }

 private:
  void check(const TateCochain& f) const {
    if (f.degree != degree_ || f.group_order != n_ || f.rank != r_)
      fail(ErrorKind::InvalidArgument, "cochain does not belong to this cohomology space");
  }

  int degree_ = 0;
  std::size_t n_ = 1, r_ = 0;
  Subquotient group_;
};

/// The Tate cochain complex C^-3 -> ... -> C^3 of a finite group acting on Z^r / R.
class TateComplex {
 public:
  TateComplex() = default;
  explicit TateComplex(GammaModule A) : A_(std::move(A)), cache_(std::make_shared<Cache>()) {}

  const GammaModule& coefficients() const noexcept { return A_; }
  const FiniteGroup& group() const noexcept { return A_.group(); }
  std::size_t group_order() const noexcept { return A_.group().order(); }
  std::size_t rank() const noexcept { return A_.rank(); }
  std::size_t dimension(int degree) const { return int_pow(group_order(), cochain_arity(degree)) * rank(); }

  TateCochain zero(int degree) const { return TateCochain(degree, group_order(), rank()); }
  TateCochain cochain(int degree, IntVector data) const { return TateCochain(degree, group_order(), rank(), std::move(data)); }

  /// The relation lattice of C^degree (copies of the relations of A).
  Lattice relations(int degree) const {
    return cached(cache_->relations, degree, [&] { return repeated(A_.relations(), dimension(degree) / std::max<std::size_t>(rank(), 1)); });
  }

  /// Pointwise differential d: C^p -> C^{p+1}, p in -3..2.
  TateCochain differential(const TateCochain& f) const {
    check(f);
    const int p = f.degree;
    if (p < -3 || p > 2) fail(ErrorKind::DegreeOutOfRange, "no differential out of degree " + std::to_string(p));
    const std::size_t n = group_order();
    const FiniteGroup& G = group();
    TateCochain out = zero(p + 1);
    switch (p) {
      case -3:
        // (dh)(rho) = sum_s s^-1 h(s, rho) - sum_{st = rho} h(s, t) + sum_t h(rho, t)
        for (std::size_t rho = 0; rho < n; ++rho)
          for (std::size_t s = 0; s < n; ++s) {
            out.add(rho, A_.apply(G.inv(s), f.at(s, rho)));
            out.add(rho, f.at(rho, s));
          }
        for (std::size_t s = 0; s < n; ++s)
          for (std::size_t t = 0; t < n; ++t) out.add(G.mul(s, t), f.at(s, t), -1);
        break;
      case -2:
        // df = sum_s s^-1 f(s) - f(s)
        for (std::size_t s = 0; s < n; ++s) {
          out.add(0, A_.apply(G.inv(s), f.at(s)));
          out.add(0, f.at(s), -1);
        }
        break;
      case -1:
        for (std::size_t s = 0; s < n; ++s) out.add(0, A_.apply(s, f.at(0)));
        break;
      case 0:
        for (std::size_t s = 0; s < n; ++s) {
          out.add(s, A_.apply(s, f.at(0)));
          out.add(s, f.at(0), -1);
        }
        break;
      case 1:
        for (std::size_t s = 0; s < n; ++s)
          for (std::size_t t = 0; t < n; ++t) {
            std::size_t slot = s * n + t;
            out.add(slot, A_.apply(s, f.at(t)));
            out.add(slot, f.at(G.mul(s, t)), -1);
            out.add(slot, f.at(s));
          }
        break;
      case 2:
        for (std::size_t s = 0; s < n; ++s)
          for (std::size_t t = 0; t < n; ++t)
            for (std::size_t u = 0; u < n; ++u) {
              std::size_t slot = (s * n + t) * n + u;
              out.add(slot, A_.apply(s, f.at(t, u)));
              out.add(slot, f.at(G.mul(s, t), u), -1);
              out.add(slot, f.at(s, G.mul(t, u)));
              out.add(slot, f.at(s, t), -1);
            }
        break;
    }
    return out;
  }

  /// Matrix of d: C^p -> C^{p+1}, assembled column by column from the pointwise formula.
  IntMatrix differential_matrix(int p) const {
    return cached(cache_->differentials, p, [&] {
      if (p < -3 || p > 2) fail(ErrorKind::DegreeOutOfRange, "no differential out of degree " + std::to_string(p));
      const std::size_t dim = dimension(p);
      IntMatrix D(dimension(p + 1), dim);
      for (std::size_t j = 0; j < dim; ++j) D.set_column(j, differential(cochain(p, unit_vector(dim, j))).data);
      return D;
    });
  }

  /// Z^p = {f : df = 0 mod relations}; Z^3 is all of C^3.
  Lattice cocycles(int p) const {
    return cached(cache_->cocycles, p, [&] {
      if (p == kMaxDegree) return Lattice::full(dimension(p));
      return Lattice::preimage(differential_matrix(p), relations(p + 1));
    });
  }
  /// B^p = d(C^{p-1}) + relations; B^-3 is the relation lattice.
  Lattice coboundaries(int p) const {
    return cached(cache_->coboundaries, p, [&] {
      if (p == kMinDegree) return relations(p);
      return Lattice::span(differential_matrix(p - 1)) + relations(p);
    });
  }

  bool is_cocycle(const TateCochain& f) const { return check(f), cocycles(f.degree).contains(f.data); }
  bool is_zero(const TateCochain& f) const { return check(f), relations(f.degree).contains(f.data); }
  bool equal(const TateCochain& a, const TateCochain& b) const { return is_zero(a - b); }

  /// Whole cochain space modulo relations.
  Subquotient cochain_group(int p) const { return Subquotient(Lattice::full(dimension(p)), relations(p)); }

  TateCochain reduced(const TateCochain& f) const {
    check(f);
    TateCochain out = f;
    for (std::size_t s = 0; s < f.slots(); ++s) out.set(s, A_.reduce(f.at(s)));
    return out;
  }

  void check(const TateCochain& f) const {
    if (f.group_order != group_order() || f.rank != rank())
      fail(ErrorKind::MismatchedCoefficients, "cochain does not belong to this complex");
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<int, Lattice> relations, cocycles, coboundaries;
    std::map<int, IntMatrix> differentials;
  };

  template <typename T, typename F>
  T cached(std::map<int, T>& table, int key, F make) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      auto it = table.find(key);
      if (it != table.end()) return it->second;
    }
    T value = make();
    std::lock_guard<std::mutex> lock(cache_->mutex);
    return table.emplace(key, std::move(value)).first->second;
  }

  GammaModule A_;
  std::shared_ptr<Cache> cache_;
};

/// Tate cohomology in degrees -2..2.
inline CohomologySpace tate_group(const TateComplex& C, int degree) {
  if (degree < -2 || degree > 2) fail(ErrorKind::DegreeOutOfRange, "Tate group in degree " + std::to_string(degree));
  if (degree == -2 && !C.coefficients().is_finite())
    fail(ErrorKind::InfiniteCoefficientsInDegreeMinus2, "degree -2 requires finite coefficients");
  return CohomologySpace(degree, C.group_order(), C.rank(), C.cocycles(degree), C.coboundaries(degree));
}

inline CohomologySpace tate_group(const GammaModule& A, int degree) { return tate_group(TateComplex(A), degree); }

/// C^-2 / B^-2.
inline Subquotient cochains_mod_boundaries(const TateComplex& C) {
  if (!C.coefficients().is_finite())
    fail(ErrorKind::InfiniteCoefficientsInDegreeMinus2, "degree -2 requires finite coefficients");
  return Subquotient(Lattice::full(C.dimension(-2)), C.coboundaries(-2));
}

// ---------------------------------------------------------------------------
// Coinflation along a tower.

/// Matrix of f(s) = sum_{s' -> s} f'(s') in degree -2, or the analogous double sum in degree -3.
inline IntMatrix coinflation_matrix(const TowerSurjection& t, std::size_t rank, int degree) {
  const std::size_t n1 = t.source().order(), n = t.target().order();
  if (degree == -2) {
    IntMatrix M(n * rank, n1 * rank);
    for (std::size_t s = 0; s < n1; ++s)
      for (std::size_t i = 0; i < rank; ++i) M(t(s) * rank + i, s * rank + i) = 1;
    return M;
  }
  if (degree == -3) {
    IntMatrix M(n * n * rank, n1 * n1 * rank);
    for (std::size_t s = 0; s < n1; ++s)
      for (std::size_t u = 0; u < n1; ++u)
        for (std::size_t i = 0; i < rank; ++i) M((t(s) * n + t(u)) * rank + i, (s * n1 + u) * rank + i) = 1;
    return M;
  }
  fail(ErrorKind::DegreeOutOfRange, "coinflation is defined in degrees -3 and -2");
}

inline TateCochain coinflation(const TateCochain& f, const TowerSurjection& t) {
  if (f.group_order != t.source().order())
    fail(ErrorKind::IncompatibleTower, "cochain is not indexed by the tower source");
  if (f.degree != -2 && f.degree != -3) fail(ErrorKind::DegreeOutOfRange, "coinflation is defined in degrees -3 and -2");
  TateCochain out(f.degree, t.target().order(), f.rank);
  out.data = coinflation_matrix(t, f.rank, f.degree) * f.data;
  return out;
}

/// Inflation of a degree 0..2 cochain along a tower: f'(s') = f(image of s').
inline TateCochain inflation(const TateCochain& f, const TowerSurjection& t) {
  if (f.group_order != t.target().order()) fail(ErrorKind::IncompatibleTower, "cochain is not indexed by the tower target");
  if (f.degree < 0) fail(ErrorKind::DegreeOutOfRange, "inflation is defined in nonnegative degrees");
  const std::size_t n1 = t.source().order(), n = t.target().order();
  TateCochain out(f.degree, n1, f.rank);
  for (std::size_t slot = 0; slot < out.slots(); ++slot) {
    std::size_t image = 0, rest = slot, scale = 1;
    for (std::size_t k = 0; k < cochain_arity(f.degree); ++k) {
      image += t(rest % n1) * scale;
      rest /= n1;
      scale *= n;
    }
    out.set(slot, f.at(image));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Short exact sequences and the connecting map in degree -2.

/// 0 -> sub --inc--> mid --proj--> quot -> 0, all over one group.
struct ShortExactSequence {
  GammaModule sub, mid, quot;
  IntMatrix inc;   // mid.rank x sub.rank
  IntMatrix proj;  // quot.rank x mid.rank

  /// 0 -> Y -> Ybar -> Ybar/Y -> 0 in Ybar coordinates.
  static ShortExactSequence from_overlattice(const OverlatticePair& p) {
    ShortExactSequence s{p.base(), p.cover(), overlattice_quotient(p), p.inclusion(), IntMatrix::identity(p.rank())};
    s.validate();
    return s;
  }

  void validate() const {
    if (sub.group() != mid.group() || mid.group() != quot.group())
      fail(ErrorKind::NotExact, "modules of the sequence are over different groups");
    if (inc.rows() != mid.rank() || inc.cols() != sub.rank() || proj.rows() != quot.rank() || proj.cols() != mid.rank())
      fail(ErrorKind::NotExact, "sequence maps have the wrong shape");
    for (std::size_t s = 0; s < mid.group().order(); ++s) {
      IntMatrix a = inc * sub.action(s) - mid.action(s) * inc;
      IntMatrix b = proj * mid.action(s) - quot.action(s) * proj;
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (!mid.relations().contains(a.column(j))) fail(ErrorKind::NotExact, "inclusion is not equivariant");
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!quot.relations().contains(b.column(j))) fail(ErrorKind::NotExact, "projection is not equivariant");
    }
    Homomorphism i{sub.as_group(), mid.as_group(), inc};
    Homomorphism q{mid.as_group(), quot.as_group(), proj};
    if (!i.well_defined() || !q.well_defined()) fail(ErrorKind::NotExact, "sequence maps are not well defined");
    if (!i.injective()) fail(ErrorKind::NotExact, "inclusion is not injective");
    if (!q.surjective()) fail(ErrorKind::NotExact, "projection is not surjective");
    if (!exact_at(i, q)) fail(ErrorKind::NotExact, "sequence is not exact in the middle");
  }

  /// Some lift of a quotient element to mid.
  IntVector lift(const IntVector& x) const {
    auto sol = solve_integer(proj.hconcat(quot.relations().basis()), x);
    if (!sol) fail(ErrorKind::NotExact, "element has no preimage");
    sol->resize(mid.rank());
    return *sol;
  }
  /// The sub element mapping to v, when v lies in the image.
  std::optional<IntVector> retract(const IntVector& v) const {
    auto sol = solve_integer(inc.hconcat(mid.relations().basis()), v);
    if (!sol) return std::nullopt;
    sol->resize(sub.rank());
    return sol;
  }
  TateCochain lift(const TateCochain& f) const {
    TateCochain out(f.degree, f.group_order, mid.rank());
    for (std::size_t s = 0; s < f.slots(); ++s) out.set(s, lift(f.at(s)));
    return out;
  }
  TateCochain project(const TateCochain& f) const {
    TateCochain out(f.degree, f.group_order, quot.rank());
    for (std::size_t s = 0; s < f.slots(); ++s) out.set(s, proj * f.at(s));
    return out;
  }
};

/// Differential of a lift of a (-2)-cycle, as a norm-killed element of sub (degree -1 cochain).
inline TateCochain connecting_neg2_cochain(const ShortExactSequence& ses, const TateCochain& lifted) {
  TateComplex mid(ses.mid);
  TateCochain dv = mid.differential(lifted);
  auto w = ses.retract(dv.at(0));
  if (!w) fail(ErrorKind::NotACycle, "differential of the lift does not come from the submodule");
  return TateCochain(-1, lifted.group_order, ses.sub.rank(), *w);
}

/// Ĥ^-2(quot) -> Ĥ^-1(sub): lift, differentiate, pull back.
inline IntVector connecting_neg2(const ShortExactSequence& ses, const IntVector& cls) {
  CohomologySpace H2 = tate_group(TateComplex(ses.quot), -2);
  CohomologySpace H1 = tate_group(TateComplex(ses.sub), -1);
  TateCochain f = H2.representative(cls);
  return H1.classify(connecting_neg2_cochain(ses, ses.lift(f)));
}

/// Images of the canonical generators of Ĥ^-2(quot) in Ĥ^-1(sub) (canonical coordinates).
inline std::vector<IntVector> connecting_neg2_table(const ShortExactSequence& ses) {
  CohomologySpace H2 = tate_group(TateComplex(ses.quot), -2);
  CohomologySpace H1 = tate_group(TateComplex(ses.sub), -1);
  std::vector<IntVector> out;
  for (const auto& f : H2.representatives()) out.push_back(H1.classify(connecting_neg2_cochain(ses, ses.lift(f))));
  return out;
}

/// Whether a map between finite groups, given by the images of canonical generators, is bijective.
inline bool table_is_bijective(const AbelianPresentation& src, const AbelianPresentation& dst,
                               const std::vector<IntVector>& images) {
  if (!src.is_finite() || !dst.is_finite()) fail(ErrorKind::InfiniteModule, "bijectivity test on infinite groups");
  if (src.order() != dst.order()) return false;
  IntMatrix M = IntMatrix::from_columns(images, dst.canonical_rank());
  IntMatrix rel(dst.canonical_rank(), dst.canonical_rank());
  for (std::size_t i = 0; i < dst.canonical_rank(); ++i) rel(i, i) = dst.modulus(i);
  Lattice img = (images.empty() ? Lattice::zero(dst.canonical_rank()) : Lattice::span(M)) + Lattice::span(rel);
  return img == Lattice::full(dst.canonical_rank());
}

// ---------------------------------------------------------------------------
// Cup products into Q/Z. The total degree -1 pairings are
//   (-1, 0): eval(a, b)
//   (-2, 1): -sum_s eval(f(s), c(s))
// and the total degree 0 pairings needed for the compatibility with d are
//   (0, 0): eval(a, b)
//   (-1, 1): sum_t eval(a, c(t))
//   (-2, 2): -sum_{s,t} eval(f(s), phi(s, t)).

inline bool cup_bidegree_supported(int p, int q) {
  return (p == -1 && q == 0) || (p == -2 && q == 1) || (p == 0 && q == 0) || (p == -1 && q == 1) || (p == -2 && q == 2);
}

inline QZValue cup_pair(const PontryaginDual& D, const TateCochain& a, const TateCochain& b) {
  if (a.rank != D.source().rank() || b.rank != D.module().rank() || a.group_order != b.group_order ||
      a.group_order != D.source().group().order())
    fail(ErrorKind::MismatchedCoefficients, "cup product needs A-valued and dual-valued cochains over one group");
  if (!cup_bidegree_supported(a.degree, b.degree))
    fail(ErrorKind::WrongDegrees, "no cup pairing in bidegree (" + std::to_string(a.degree) + "," + std::to_string(b.degree) + ")");
  const std::size_t n = a.group_order;
  QZValue v;
  if (b.degree == 0) return D.eval(a.at(0), b.at(0));
  if (a.degree == -1 && b.degree == 1) {
    for (std::size_t t = 0; t < n; ++t) v += D.eval(a.at(0), b.at(t));
    return v;
  }
  if (b.degree == 1) {
    for (std::size_t s = 0; s < n; ++s) v -= D.eval(a.at(s), b.at(s));
    return v;
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) v -= D.eval(a.at(s), b.at(s, t));
  return v;
}

/// Rational matrix F with a cup b = a^T F b mod 1.
inline RatMatrix cup_form(const PontryaginDual& D, int p, int q) {
  if (!cup_bidegree_supported(p, q))
    fail(ErrorKind::WrongDegrees, "no cup pairing in bidegree (" + std::to_string(p) + "," + std::to_string(q) + ")");
  const std::size_t n = D.source().group().order();
  const std::size_t r = D.source().rank(), k = D.module().rank();
  const RatMatrix& W = D.form();
  auto block = [&](RatMatrix& F, std::size_t ra, std::size_t cb, const Rational& sign) {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < k; ++j) F(ra * r + i, cb * k + j) += sign * W(i, j);
  };
  RatMatrix F(int_pow(n, cochain_arity(p)) * r, int_pow(n, cochain_arity(q)) * k);
  if (q == 0) {
    block(F, 0, 0, 1);
  } else if (p == -1 && q == 1) {
    for (std::size_t t = 0; t < n; ++t) block(F, 0, t, 1);
  } else if (q == 1) {
    for (std::size_t s = 0; s < n; ++s) block(F, s, s, -1);
  } else {
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) block(F, s, s * n + t, -1);
  }
  return F;
}

/// {y : <x, y> = 0 for all x in S} for the pairing x^T F y mod 1.
inline Lattice right_annihilator(const Lattice& S, const RatMatrix& F) {
  if (S.dim() != F.rows()) fail(ErrorKind::InvalidArgument, "annihilator: dimension mismatch");
  RatMatrix P = to_rational(S.basis().transpose()) * F;
  Integer L = 1;
  for (std::size_t i = 0; i < P.rows(); ++i)
    for (std::size_t j = 0; j < P.cols(); ++j) L = lcm(L, denominator(P(i, j)));
  IntMatrix M(P.rows(), P.cols());
  for (std::size_t i = 0; i < P.rows(); ++i)
    for (std::size_t j = 0; j < P.cols(); ++j) M(i, j) = numerator(P(i, j) * Rational(L));
  if (P.rows() == 0) return Lattice::full(F.cols());
  return Lattice::preimage(M, Lattice::span(L * IntMatrix::identity(P.rows())));
}

/// {x : <x, y> = 0 for all y in T}.
inline Lattice left_annihilator(const Lattice& T, const RatMatrix& F) { return right_annihilator(T, F.transpose()); }

// ---------------------------------------------------------------------------
// Stabilization along towers.

struct StabilizationReport {
  int degree = 0;
  Integer source_order, target_order;  // at the top (tower source) and bottom (tower target) levels
  bool injective = false, surjective = false;
  bool isomorphism() const { return injective && surjective; }
  std::optional<Integer> h1w_source_order, h1w_target_order;
  std::optional<bool> h1w_isomorphism;
};

/// A is a module over the tower target; compares the group at both levels through the
/// identity (degree -1, bottom to top) or coinflation (degree -2, top to bottom).
inline StabilizationReport stabilization_check(const TowerSurjection& t, const GammaModule& A, int degree,
                                               bool also_h1w = false) {
  if (A.group() != t.target()) fail(ErrorKind::IncompatibleTower, "module does not live on the tower target");
  if (degree != -1 && degree != -2) fail(ErrorKind::DegreeOutOfRange, "stabilization is checked in degrees -2 and -1");
  TateComplex bottom(A), top(A.inflate(t));
  StabilizationReport rep;
  rep.degree = degree;
  CohomologySpace Hb = tate_group(bottom, degree), Ht = tate_group(top, degree);
  rep.source_order = Ht.order();
  rep.target_order = Hb.order();
  if (degree == -1) {
    Homomorphism h{Hb.group(), Ht.group(), IntMatrix::identity(A.rank())};
    if (!h.well_defined()) fail(ErrorKind::IncompatibleTower, "identity does not induce a map on degree -1");
    rep.injective = h.injective();
    rep.surjective = h.surjective();
  } else {
    Homomorphism h{Ht.group(), Hb.group(), coinflation_matrix(t, A.rank(), -2)};
    if (!h.well_defined()) fail(ErrorKind::IncompatibleTower, "coinflation does not descend to degree -2");
    rep.injective = h.injective();
    rep.surjective = h.surjective();
  }
  if (also_h1w) {
    Subquotient Qt = cochains_mod_boundaries(top), Qb = cochains_mod_boundaries(bottom);
    Homomorphism h{Qt, Qb, coinflation_matrix(t, A.rank(), -2)};
    if (!h.well_defined()) fail(ErrorKind::IncompatibleTower, "coinflation does not descend to C^-2/B^-2");
    rep.h1w_source_order = Qt.order();
    rep.h1w_target_order = Qb.order();
    rep.h1w_isomorphism = h.is_isomorphism();
  }
  return rep;
}

}  // namespace gerbecoh
