#pragma once

#include "gerbecoh/gerbe.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gerbecoh {

/// A Q/Z-valued character of a finite group, by its values on the canonical generators.
struct DualCharacter {
  AbelianPresentation target;
  std::vector<QZValue> values;

  bool well_defined() const {
    if (values.size() != target.torsion_rank() || !target.is_finite()) return false;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!(target.modulus(i) * values[i]).is_zero()) return false;
    return true;
  }
};

/// Hom(X, Q/Z) for a finite subquotient X, in coordinates chi_i in Z/d_i:
/// <x, chi> = sum_i c_i(x) chi_i / d_i with c the canonical coordinates of x.
class CharacterGroup {
 public:
  CharacterGroup() = default;
  explicit CharacterGroup(Subquotient X) : primal_(std::move(X)) {
    if (!primal_.is_finite()) fail(ErrorKind::InfiniteModule, "characters of an infinite group");
    const auto& P = primal_.presentation();
    IntMatrix rel(P.torsion_rank(), P.torsion_rank());
    for (std::size_t i = 0; i < P.torsion_rank(); ++i) rel(i, i) = P.modulus(i);
    group_ = Subquotient(Lattice::full(P.torsion_rank()), Lattice::span(rel));
  }

  const Subquotient& primal() const noexcept { return primal_; }
  const Subquotient& group() const noexcept { return group_; }
  std::size_t rank() const { return group_.ambient_dim(); }

  QZValue pair(const IntVector& x, const IntVector& chi) const {
    IntVector c = primal_.canonical(x);
    QZValue v;
    for (std::size_t i = 0; i < chi.size(); ++i) v += QZValue(c[i] * chi[i], primal_.presentation().modulus(i));
    return v;
  }

  /// The character whose value on the i-th canonical generator is value(g_i).
  IntVector from_values(const std::function<QZValue(const IntVector&)>& value) const {
    IntVector chi(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      Integer d = primal_.presentation().modulus(i);
      QZValue v = value(primal_.representative(unit_vector(rank(), i)));
      if (!(d * v).is_zero()) fail(ErrorKind::NotAHomomorphism, "value is not killed by the generator order");
      chi[i] = numerator(v.value() * Rational(d));
    }
    return chi;
  }

  DualCharacter character(const IntVector& chi) const {
    DualCharacter out{primal_.presentation(), {}};
    for (std::size_t i = 0; i < chi.size(); ++i) out.values.emplace_back(chi[i], primal_.presentation().modulus(i));
    return out;
  }

 private:
  Subquotient primal_;
  Subquotient group_;
};

// ---------------------------------------------------------------------------
// Points of [dual Sbar]^+ and the maps -d, -delta

/// A finite-order point h : Ybar -> Q/Z of the dual torus of Sbar, by its values on the Ybar basis.
struct PlusPoint {
  OverlatticePair pair;
  std::vector<QZValue> h;

  QZValue operator()(const IntVector& v) const {
    QZValue s;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * h[i];
    return s;
  }
  /// h vanishes on (sigma - 1) Y.
  bool satisfies_plus() const {
    const auto& E = pair.inclusion();
    for (std::size_t s = 0; s < pair.group().order(); ++s)
      for (std::size_t j = 0; j < pair.rank(); ++j) {
        IntVector y = E.column(j);
        if (!(*this)(pair.cover().apply(s, y) - y).is_zero()) return false;
      }
    return true;
  }
  bool is_fixed() const {
    for (std::size_t s = 0; s < pair.group().order(); ++s)
      for (std::size_t j = 0; j < pair.rank(); ++j) {
        IntVector e = unit_vector(pair.rank(), j);
        if ((*this)(pair.cover().apply(s, e)) != h[j]) return false;
      }
    return true;
  }
};

/// Write a functional on Ybar that kills Y as an element of the dual of A = Ybar / Y.
inline IntVector functional_as_character(const PontryaginDual& D, const std::function<QZValue(const IntVector&)>& psi) {
  const GammaModule& A = D.source();
  const auto& P = A.presentation();
  IntVector chi(P.torsion_rank());
  for (std::size_t i = 0; i < chi.size(); ++i) {
    QZValue v = psi(A.as_group().representative(unit_vector(P.canonical_rank(), i)));
    if (!(P.modulus(i) * v).is_zero()) fail(ErrorKind::NotAHomomorphism, "functional does not vanish on Y");
    chi[i] = numerator(v.value() * Rational(P.modulus(i)));
  }
  return chi;
}

/// sigma -> -(sigma h - h) on Ybar / Y, where (sigma h)(a) = h(sigma^{-1} a).
inline TateCochain minus_d_plus_point(const PontryaginDual& D, const PlusPoint& p, bool drop_sign = false) {
  if (!p.satisfies_plus()) fail(ErrorKind::PlusConditionViolated, "h is not Galois-fixed on Y");
  const FiniteGroup& G = p.pair.group();
  const GammaModule& bar = p.pair.cover();
  TateCochain out(1, G.order(), D.module().rank());
  for (std::size_t s = 0; s < G.order(); ++s) {
    auto psi = [&](const IntVector& a) {
      QZValue v = p(bar.apply(G.inv(s), a)) - p(a);
      return drop_sign ? v : -v;
    };
    out.set(s, functional_as_character(D, psi));
  }
  return out;
}

inline TateCochain minus_d_plus_point(const PlusPoint& p, bool drop_sign = false) {
  return minus_d_plus_point(PontryaginDual(overlattice_quotient(p.pair)), p, drop_sign);
}

/// Extension of a character of the torsion of L / M (L, M lattices) to all of L / M, by zero on the
/// free canonical coordinates.
inline std::vector<QZValue> extend_from_torsion(const Subquotient& whole, const CharacterGroup& tors,
                                                const IntVector& chi) {
  const auto& P = whole.presentation();
  std::vector<QZValue> out;
  for (std::size_t j = 0; j < whole.ambient_dim(); ++j) {
    IntVector c = whole.canonical(unit_vector(whole.ambient_dim(), j));
    QZValue v;
    for (std::size_t i = 0; i < P.torsion_rank(); ++i) {
      QZValue gi = tors.pair(whole.representative(unit_vector(P.canonical_rank(), i)), chi);
      v += c[i] * gi;
    }
    out.push_back(v);
  }
  return out;
}

/// The PlusPoint extending a character of (Ybar / IY)_tor.
inline PlusPoint plus_point_from_character(const RigidH1& R, const CharacterGroup& chars, const IntVector& chi) {
  Subquotient whole(Lattice::full(R.pair.rank()), augmentation_in_cover(R.pair));
  return PlusPoint{R.pair, extend_from_torsion(whole, chars, chi)};
}

/// -delta of a character t of H^-1(Gamma, Y) (given on its Ybar-coordinate model): extend t to a
/// Galois-fixed t : Y -> Q/Z, lift to Ybar through rational values, and take -(sigma tbar - tbar).
inline TateCochain minus_delta(const PontryaginDual& D, const OverlatticePair& p, const CharacterGroup& h1y,
                               const IntVector& chi, bool drop_sign = false) {
  const std::size_t r = p.rank();
  const FiniteGroup& G = p.group();
  Subquotient whole(Lattice::full(r), augmentation_lattice(p.base()));  // Y / IY in Y coordinates
  // characters of the Y-coordinate torsion, read through the inclusion into Ybar coordinates
  const auto& P = whole.presentation();
  std::vector<Rational> t(r);
  for (std::size_t j = 0; j < r; ++j) {
    IntVector c = whole.canonical(unit_vector(r, j));
    QZValue v;
    for (std::size_t i = 0; i < P.torsion_rank(); ++i) {
      IntVector g = whole.representative(unit_vector(P.canonical_rank(), i));
      v += c[i] * h1y.pair(p.inclusion() * g, chi);
    }
    t[j] = v.value();
  }
  auto tbar = [&](const IntVector& a) {
    RatVector q = p.to_rational_coordinates(a);
    Rational s = 0;
    for (std::size_t j = 0; j < r; ++j) s += q[j] * t[j];
    return QZValue(s);
  };
  TateCochain out(1, G.order(), D.module().rank());
  for (std::size_t s = 0; s < G.order(); ++s) {
    auto psi = [&](const IntVector& a) {
      QZValue v = tbar(p.cover().apply(G.inv(s), a)) - tbar(a);
      return drop_sign ? v : -v;
    };
    out.set(s, functional_as_character(D, psi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pairings

inline QZValue pairing_h1w(const PontryaginDual& D, const TateCochain& cls, const TateCochain& zc) {
  if (cls.degree != -2 || zc.degree != 1) fail(ErrorKind::WrongDegrees, "pairing_h1w pairs degree -2 with degree 1");
  if (cls.rank != D.source().rank() || zc.rank != D.module().rank() || cls.group_order != zc.group_order)
    fail(ErrorKind::MismatchedCoefficients, "cochains do not live on dual modules");
  if (!TateComplex(D.module()).is_cocycle(zc)) fail(ErrorKind::NotACycle, "second argument is not a 1-cocycle");
  return cup_pair(D, cls, zc);
}

inline QZValue pairing_h1w(const GammaModule& A, const TateCochain& cls, const TateCochain& zc) {
  return pairing_h1w(PontryaginDual(A), cls, zc);
}

/// <[y], (-d) s>.
inline QZValue change_of_rigidification(const TateCochain& y_class, const PlusPoint& s) {
  GammaModule A = overlattice_quotient(s.pair);
  if (y_class.rank != A.rank() || y_class.group_order != A.group().order())
    fail(ErrorKind::MismatchedCoefficients, "class does not live on Ybar / Y");
  PontryaginDual D(A);
  return pairing_h1w(D, y_class, minus_d_plus_point(D, s));
}

struct AnnihilatorReport {
  int i = 0;
  char subgroup = 'Z';
  Lattice annihilator, predicted;
  bool holds() const { return annihilator == predicted; }
};

/// Exact annihilator of Z^{-i-1}(A) (or B^{-i-1}(A)) in C^i(dual), compared with B^i (or Z^i).
inline AnnihilatorReport annihilator_check(int i, const GammaModule& A, char subgroup) {
  if (i != 0 && i != 1) fail(ErrorKind::DegreeOutOfRange, "annihilators are checked for i = 0, 1");
  if (subgroup != 'Z' && subgroup != 'B') fail(ErrorKind::InvalidArgument, "subgroup must be Z or B");
  PontryaginDual D(A);
  TateComplex C(A), Cd(D.module());
  RatMatrix F = cup_form(D, -i - 1, i);
  AnnihilatorReport rep;
  rep.i = i;
  rep.subgroup = subgroup;
  Lattice S = subgroup == 'Z' ? C.cocycles(-i - 1) : C.coboundaries(-i - 1);
  rep.annihilator = right_annihilator(S, F);
  rep.predicted = subgroup == 'Z' ? Cd.coboundaries(i) : Cd.cocycles(i);
  return rep;
}

// ---------------------------------------------------------------------------
// The dual diagram

/// Drops the minus sign of one of the explicit dual maps ("-d", "-d top", "-delta").
struct SignFault {
  std::string arrow;
};

struct DualDiagramReport {
  CertificationReport report;
  std::vector<std::pair<std::string, std::pair<Integer, Integer>>> orders;  // group, (primal, dual)
  bool passed() const { return report.passed(); }
};

namespace detail {

using Pairing = std::function<QZValue(const IntVector&, const IntVector&)>;

struct Paired {
  Subquotient primal, dual;
  Pairing pair;
};

/// Matrix of chi' -> chi' o T into characters of T's source.
inline IntMatrix pullback_matrix(const CharacterGroup& src_chars, const Homomorphism& T, const Paired& target) {
  const std::size_t cols = target.dual.ambient_dim();
  IntMatrix M(src_chars.rank(), cols);
  for (std::size_t j = 0; j < cols; ++j) {
    IntVector e = unit_vector(cols, j);
    IntVector chi = src_chars.from_values([&](const IntVector& g) { return target.pair(T.apply(g), e); });
    for (std::size_t i = 0; i < chi.size(); ++i) M(i, j) = chi[i];
  }
  return M;
}

inline IntMatrix matrix_from_columns(std::size_t rows, std::size_t cols, const std::function<IntVector(const IntVector&)>& f) {
  IntMatrix M(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    IntVector c = f(unit_vector(cols, j));
    for (std::size_t i = 0; i < rows; ++i) M(i, j) = c[i];
  }
  return M;
}

}  // namespace detail

inline DualDiagramReport dual_diagram_bfdpd(const OverlatticePair& p, const SignFault& fault = {}) {
  using detail::Paired;
  const std::string& sf = fault.arrow;
  if (!sf.empty() && sf != "-d" && sf != "-d top" && sf != "-delta")
    fail(ErrorKind::MalformedInstance, "no signed dual arrow named " + sf);

  DiagramCertifier c("bfdpd");
  detail::bfd_tn_cells(c, p);  // the primal diagram, arrows and cells

  GammaModule A = overlattice_quotient(p);
  PontryaginDual D(A);
  TateComplex CA(A), Cd(D.module());
  RigidH1 R = rigid_h1(p);
  const std::size_t c1 = Cd.dimension(1), c0 = Cd.dimension(0);

  auto cup = [D, CA, Cd](int deg_a, int deg_b) {
    return detail::Pairing([=](const IntVector& a, const IntVector& b) {
      return cup_pair(D, CA.cochain(deg_a, a), Cd.cochain(deg_b, b));
    });
  };
  auto chars_of = [](const Subquotient& X, CharacterGroup& out) {
    out = CharacterGroup(X);
    return Paired{X, out.group(), [out](const IntVector& x, const IntVector& chi) { return out.pair(x, chi); }};
  };

  const Homomorphism &incl = c.arrow("incl"), &d = c.arrow("d"), &inf = c.arrow("inf"), &res = c.arrow("res"),
                     &r1 = c.arrow("r1"), &r2 = c.arrow("r2"), &delta = c.arrow("delta"), &V = c.arrow("V"),
                     &eq_top = c.arrow("eq_top"), &eq_left = c.arrow("eq_left"), &pi_mid = c.arrow("pi_mid"),
                     &pi_right = c.arrow("pi_right");

  CharacterGroup chQ1, chQ2, chR1, chR2;
  std::map<std::string, Paired> G;
  G.emplace("P1", Paired{incl.source, tate_group(Cd, 1).group(), cup(-2, 1)});
  G.emplace("P2", Paired{incl.target, Subquotient(Cd.cocycles(1), Cd.relations(1)), cup(-2, 1)});
  G.emplace("P3", Paired{d.target, Subquotient(Lattice::full(c0), Cd.coboundaries(0)), cup(-1, 0)});
  G.emplace("Q1", chars_of(inf.source, chQ1));
  G.emplace("Q2", chars_of(inf.target, chQ2));
  G.emplace("Q3", G.at("P3"));
  G.emplace("R1", chars_of(r1.source, chR1));
  G.emplace("R2", chars_of(r1.target, chR2));
  // H^0 of the dual in coordinates on the cocycle basis, so that every ambient vector is a cocycle
  const IntMatrix Z0 = Cd.cocycles(0).basis();
  {
    auto eval = cup(-1, 0);
    G.emplace("R3", Paired{r2.target,
                           Subquotient(Lattice::full(Z0.cols()), Lattice::preimage(Z0, Cd.coboundaries(0))),
                           [eval, Z0](const IntVector& a, const IntVector& y) { return eval(a, Z0 * y); }});
  }

  DualDiagramReport out;
  for (const auto& name : {"P1", "P2", "P3", "Q1", "Q2", "Q3", "R1", "R2", "R3"}) {
    const Paired& g = G.at(name);
    out.orders.push_back({name, {g.primal.order(), g.dual.order()}});
    c.custom(std::string("perfect pairing ") + name, {}, [&]() -> std::optional<std::string> {
      for (const auto& x : g.primal.denominator().generators())
        for (const auto& y : g.dual.numerator().generators())
          if (!g.pair(x, y).is_zero()) return "relation " + to_string(x) + " pairs nontrivially with " + to_string(y);
      for (const auto& x : g.primal.numerator().generators())
        for (const auto& y : g.dual.denominator().generators())
          if (!g.pair(x, y).is_zero()) return to_string(x) + " pairs nontrivially with relation " + to_string(y);
      const auto &Pl = g.primal.presentation(), &Pr = g.dual.presentation();
      std::vector<std::vector<QZValue>> table(Pl.torsion_rank(), std::vector<QZValue>(Pr.torsion_rank()));
      for (std::size_t i = 0; i < Pl.torsion_rank(); ++i)
        for (std::size_t j = 0; j < Pr.torsion_rank(); ++j)
          table[i][j] = g.pair(g.primal.representative(unit_vector(Pl.canonical_rank(), i)),
                               g.dual.representative(unit_vector(Pr.canonical_rank(), j)));
      if (!g.primal.is_finite() || !g.dual.is_finite()) return std::string("infinite group");
      if (!pairing_is_perfect(Pl, Pr, table))
        return "orders " + to_string(g.primal.order()) + " and " + to_string(g.dual.order()) + ", pairing degenerate";
      return std::nullopt;
    });
  }

  auto sign = [](bool drop) { return drop ? Integer(1) : Integer(-1); };

  // dual arrows: name, primal arrow, primal source, primal target, matrix, pointwise formula
  struct DualArrow {
    std::string name, primal, from, to;
    IntMatrix matrix;
    DiagramCertifier::Formula formula;
  };
  std::vector<DualArrow> arrows;
  auto pullback = [&](const std::string& name, const std::string& primal, const Homomorphism& T, const std::string& from,
                      const std::string& to, const CharacterGroup& src_chars) {
    const Paired& tgt = G.at(to);
    DiagramCertifier::Formula f = [src_chars, T, pair = tgt.pair](const IntVector& chi) {
      return src_chars.from_values([&](const IntVector& g) { return pair(T.apply(g), chi); });
    };
    arrows.push_back({name, primal, from, to, detail::pullback_matrix(src_chars, T, tgt), f});
  };
  auto identity = [](const IntVector& x) { return x; };

  arrows.push_back({"incl^", "incl", "P1", "P2", IntMatrix::identity(c1), identity});
  {
    Integer s = sign(sf == "-d top");
    auto f = [Cd, s](const IntVector& x) {
      IntVector v = Cd.differential(Cd.cochain(0, x)).data;
      for (auto& e : v) e *= s;
      return v;
    };
    arrows.push_back({"-d top", "d", "P2", "P3", detail::matrix_from_columns(c1, c0, f), f});
  }
  pullback("inf^", "inf", inf, "Q1", "Q2", chQ1);
  pullback("res^", "res", res, "Q2", "Q3", chQ2);
  pullback("r1^", "r1", r1, "R1", "R2", chR1);
  pullback("r2^", "r2", r2, "R2", "R3", chR2);
  {
    bool drop = sf == "-delta";
    auto f = [D, p, chQ1, drop](const IntVector& chi) { return minus_delta(D, p, chQ1, chi, drop).data; };
    arrows.push_back({"-delta", "delta", "P1", "Q1", detail::matrix_from_columns(c1, chQ1.rank(), f), f});
  }
  {
    bool drop = sf == "-d";
    auto f = [D, R, chQ2, drop](const IntVector& chi) {
      return minus_d_plus_point(D, plus_point_from_character(R, chQ2, chi), drop).data;
    };
    arrows.push_back({"-d", "V", "P2", "Q2", detail::matrix_from_columns(c1, chQ2.rank(), f), f});
  }
  arrows.push_back({"eq_top^", "eq_top", "P3", "Q3", IntMatrix::identity(c0), identity});
  pullback("eq_left^", "eq_left", eq_left, "Q1", "R1", chQ1);
  pullback("pi_mid^", "pi_mid", pi_mid, "Q2", "R2", chQ2);
  arrows.push_back({"pi_right^", "pi_right", "Q3", "R3", Z0, [Z0](const IntVector& y) { return Z0 * y; }});

  for (const auto& a : arrows) {
    const Paired &X = G.at(a.from), &Xp = G.at(a.to);
    c.add_arrow(a.name, Homomorphism{Xp.dual, X.dual, a.matrix}, a.formula);
    const Homomorphism& T = c.arrow(a.primal);
    const Homomorphism& Tv = c.arrow(a.name);
    c.custom("adjoint " + a.primal + " / " + a.name, {}, [&]() -> std::optional<std::string> {
      for (const auto& x : test_elements(X.primal))
        for (const auto& y : test_elements(Xp.dual)) {
          QZValue lhs = Xp.pair(T.apply(x), y), rhs = X.pair(x, Tv.apply(y));
          if (lhs != rhs)
            return "<T " + to_string(x) + ", " + to_string(y) + "> = " + lhs.str() + " but <x, T^ y> = " + rhs.str();
        }
      return std::nullopt;
    });
  }
  (void)V;
  (void)delta;
  (void)eq_top;
  (void)pi_right;
  (void)res;
  (void)r2;
  out.report = c.finish();
  return out;
}

}  // namespace gerbecoh
