#pragma once

#include "gerbecoh/certify.hpp"
#include "gerbecoh/gamma_module.hpp"
#include "gerbecoh/tate.hpp"

#include <string>
#include <vector>

namespace gerbecoh {

/// [E:F]^{-1} N(y), a Galois-fixed rational vector.
inline RatVector newton_diamond(const GammaModule& Y, const RatVector& y) {
  if (y.size() != Y.rank()) fail(ErrorKind::InvalidArgument, "vector length does not match the lattice rank");
  RatVector out(Y.rank());
  for (const auto& a : Y.actions()) {
    RatVector ay = to_rational(a) * y;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += ay[i];
  }
  for (auto& x : out) x /= Rational(static_cast<long long>(Y.group().order()));
  return out;
}

inline RatVector newton_diamond(const GammaModule& Y, const IntVector& y) { return newton_diamond(Y, to_rational(y)); }

/// B(S) = Y / IY with its Newton map.
struct IsocrystalGroup {
  GammaModule lattice;
  Subquotient coinvariants;  // Y / IY
  Subquotient torsion;       // ker N / IY

  RatVector newton(const IntVector& y) const { return newton_diamond(lattice, y); }
  IntVector classify(const IntVector& y) const { return coinvariants.canonical(y); }
  bool is_torsion(const IntVector& y) const { return torsion.contains(y); }
};

inline IsocrystalGroup isocrystal_bs(const GammaModule& Y) {
  if (!Y.is_lattice()) fail(ErrorKind::InvalidArgument, "B(S) needs a lattice");
  Lattice IY = augmentation_lattice(Y);
  return IsocrystalGroup{Y, Subquotient(Lattice::full(Y.rank()), IY), Subquotient(norm_kernel(Y), IY)};
}

/// Ybar coordinates of IY.
inline Lattice augmentation_in_cover(const OverlatticePair& p) {
  return augmentation_lattice(p.base()).image(p.inclusion());
}

/// H^1(u -> W, Z -> S) = (Ybar / IY)_tor, all in Ybar coordinates.
struct RigidH1 {
  OverlatticePair pair;
  Subquotient group;         // ker Nbar / IY
  Subquotient h1_base;       // ker N / IY in Y coordinates
  Subquotient restriction_target;  // Z^{-1}(Ybar / Y)
  Homomorphism inflation;    // h1_base -> group
  Homomorphism restriction;  // group -> restriction_target
  bool row_exact = false;
};

inline RigidH1 rigid_h1(const OverlatticePair& p) {
  const std::size_t r = p.rank();
  RigidH1 out{p, {}, {}, {}, {}, {}, false};
  Lattice IY = augmentation_in_cover(p);
  out.group = Subquotient(norm_kernel(p.cover()), IY);
  out.h1_base = Subquotient(norm_kernel(p.base()), augmentation_lattice(p.base()));
  TateComplex A(overlattice_quotient(p));
  out.restriction_target = Subquotient(A.cocycles(-1), A.relations(-1));
  out.inflation = Homomorphism{out.h1_base, out.group, p.inclusion()};
  out.restriction = Homomorphism{out.group, out.restriction_target, IntMatrix::identity(r)};
  out.row_exact = out.inflation.injective() && exact_at(out.inflation, out.restriction);
  return out;
}

/// Transition between two levels over the same Y: Ybar_from -> Ybar_to.
inline Homomorphism rigid_transition(const RigidH1& from, const RigidH1& to) {
  if (from.pair.rank() != to.pair.rank() || from.pair.base().actions() != to.pair.base().actions())
    fail(ErrorKind::IncompatibleData, "levels over different lattices");
  auto inv = inverse(to.pair.embedding());
  auto M = to_integer(*inv * from.pair.embedding());
  if (!M) fail(ErrorKind::NotAnOverlattice, "source level is not contained in the target level");
  return Homomorphism{from.group, to.group, *M};
}

struct ComparisonClass {
  IntVector representative;  // Ybar coordinates
  IntVector canonical;       // coordinates in RigidH1::group
};

/// y - N<>(y), read in the level Ybar.
inline ComparisonClass comparison_map(const GammaModule& Y, const IntVector& y, const RigidH1& target) {
  if (Y.rank() != target.pair.rank() || Y.actions() != target.pair.base().actions())
    fail(ErrorKind::MismatchedCoefficients, "level does not sit over this lattice");
  RatVector n = newton_diamond(Y, y);
  RatVector v = to_rational(y);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= n[i];
  auto u = target.pair.from_rational_coordinates(v);
  if (!u) fail(ErrorKind::NotInLevel, "y - N(y) = " + to_string(v) + " does not lie in Ybar");
  return ComparisonClass{*u, target.group.canonical(*u)};
}

inline ComparisonClass comparison_map(const GammaModule& Y, const IntVector& y, const OverlatticePair& target) {
  return comparison_map(Y, y, rigid_h1(target));
}

/// H^1(W, Z) = C^{-2} / B^{-2} and the rim of the diagram around it.
struct H1WZ {
  GammaModule coefficients;
  CohomologySpace h_minus2;
  Subquotient quotient;   // C^{-2} / B^{-2}
  Subquotient z_minus1;   // Z^{-1} modulo relations
  CohomologySpace h_minus1;
  Homomorphism inclusion, differential, projection;
  bool injective = false, exact_at_quotient = false, exact_at_cocycles = false, surjective = false;

  bool exact() const { return injective && exact_at_quotient && exact_at_cocycles && surjective; }
  Integer order() const { return quotient.order(); }
};

inline H1WZ h1_w(const GammaModule& A) {
  if (!A.is_finite()) fail(ErrorKind::InfiniteModule, "H^1(W, Z) needs finite coefficients");
  TateComplex C(A);
  H1WZ out{A, tate_group(C, -2), cochains_mod_boundaries(C), Subquotient(C.cocycles(-1), C.relations(-1)),
           tate_group(C, -1), {}, {}, {}};
  out.inclusion = Homomorphism{out.h_minus2.group(), out.quotient, IntMatrix::identity(C.dimension(-2))};
  out.differential = Homomorphism{out.quotient, out.z_minus1, C.differential_matrix(-2)};
  out.projection = Homomorphism{out.z_minus1, out.h_minus1.group(), IntMatrix::identity(C.dimension(-1))};
  out.injective = out.inclusion.injective();
  out.exact_at_quotient = exact_at(out.inclusion, out.differential);
  out.exact_at_cocycles = exact_at(out.differential, out.projection);
  out.surjective = out.projection.surjective();
  return out;
}

/// The dual of phi_n at level E: Z/n -> (Z/[E:F])[Gamma], 1 -> -([E:F]/n) sum [sigma].
struct PhiDual {
  Integer n, degree;
  std::size_t group_order = 0;
  std::vector<Integer> image;  // coefficient of [sigma], reduced mod degree

  std::vector<Integer> apply(const Integer& k) const {
    std::vector<Integer> out;
    for (const auto& c : image) out.push_back(mod_floor(k * c, degree));
    return out;
  }
  /// n kills the image and the image is Galois-fixed.
  bool well_defined() const {
    for (const auto& c : apply(n))
      if (c != 0) return false;
    for (const auto& c : image)
      if (c != image.front()) return false;
    return true;
  }
};

inline PhiDual phi_dual(const Integer& n, const FiniteGroup& level) {
  const Integer deg(static_cast<unsigned long long>(level.order()));
  if (n <= 0 || deg % n != 0) fail(ErrorKind::NotADivisor, to_string(n) + " does not divide " + to_string(deg));
  PhiDual out{n, deg, level.order(), {}};
  out.image.assign(level.order(), mod_floor(-(deg / n), deg));
  return out;
}

/// phi_m followed by the (m/n)-power map is phi_n; dually phi_m^dual(m/n) = phi_n^dual(1).
inline bool phi_transition_holds(const Integer& n, const Integer& m, const FiniteGroup& level) {
  if (m % n != 0) fail(ErrorKind::NotADivisor, to_string(n) + " does not divide " + to_string(m));
  return phi_dual(m, level).apply(m / n) == phi_dual(n, level).apply(1);
}

// ---------------------------------------------------------------------------
// Diagram certification.

enum class DiagramId { BG, RI, BFD_TN, ZZ };

inline std::string_view to_string(DiagramId id) {
  switch (id) {
    case DiagramId::BG: return "bgdiag";
    case DiagramId::RI: return "ridiag";
    case DiagramId::BFD_TN: return "bfd_tn";
    case DiagramId::ZZ: return "zz";
  }
  return "?";
}

inline DiagramId parse_diagram_id(std::string_view s) {
  for (auto id : {DiagramId::BG, DiagramId::RI, DiagramId::BFD_TN, DiagramId::ZZ})
    if (to_string(id) == s) return id;
  fail(ErrorKind::MalformedInstance, "unknown diagram '" + std::string(s) + "'");
}

namespace detail {

inline DiagramCertifier::Formula identity_formula() {
  return [](const IntVector& x) { return x; };
}

inline Subquotient free_group(std::size_t r) { return Subquotient(Lattice::full(r), Lattice::zero(r)); }

inline void zz_cells(DiagramCertifier& c, const GammaModule& A) {
  TateComplex C(A);
  CohomologySpace H2 = tate_group(C, -2), H1 = tate_group(C, -1);
  Subquotient Q = cochains_mod_boundaries(C), Z1(C.cocycles(-1), C.relations(-1));
  auto diff = [C](const IntVector& x) { return C.differential(C.cochain(-2, x)).data; };
  c.add_arrow("incl", Homomorphism{H2.group(), Q, IntMatrix::identity(C.dimension(-2))}, identity_formula());
  c.add_arrow("d", Homomorphism{Q, Z1, C.differential_matrix(-2)}, diff);
  c.add_arrow("proj", Homomorphism{Z1, H1.group(), IntMatrix::identity(C.dimension(-1))}, identity_formula());
  c.injective("exact at H^-2", "incl");
  c.exact("exact at C^-2/B^-2", "incl", "d");
  c.exact("exact at Z^-1", "d", "proj");
  c.surjective("exact at H^-1", "proj");
  c.custom("order identity", {}, [&]() -> std::optional<std::string> {
    if (Q.order() * H1.order() == H2.order() * Z1.order()) return std::nullopt;
    return "|C/B| " + to_string(Q.order()) + ", |H^-1| " + to_string(H1.order()) + ", |H^-2| " +
           to_string(H2.order()) + ", |Z^-1| " + to_string(Z1.order());
  });
}

inline void bg_cells(DiagramCertifier& c, const GammaModule& Y) {
  const std::size_t r = Y.rank();
  IsocrystalGroup B = isocrystal_bs(Y);
  const Integer n(static_cast<unsigned long long>(Y.group().order()));
  Lattice IY = augmentation_lattice(Y);
  Subquotient tors(B.coinvariants.torsion(), IY);
  Subquotient target = free_group(r);  // [Y (x) Q]^Gamma scaled by [E:F]
  auto scaled_newton = [Y, n](const IntVector& y) {
    RatVector v = newton_diamond(Y, y);
    for (auto& x : v) x *= Rational(n);
    return *to_integer(v);
  };
  IntMatrix N = norm_endomorphism(Y), I = IntMatrix::identity(r);
  c.add_arrow("inf", Homomorphism{B.torsion, B.coinvariants, I}, identity_formula());
  c.add_arrow("newton", Homomorphism{B.coinvariants, target, N}, scaled_newton);
  c.add_arrow("incl", Homomorphism{tors, B.coinvariants, I}, identity_formula());
  c.add_arrow("ndiamond", Homomorphism{B.coinvariants, target, N}, scaled_newton);
  c.add_arrow("tn", Homomorphism{tors, B.torsion, I}, identity_formula());
  c.add_arrow("bs", Homomorphism{B.coinvariants, B.coinvariants, I}, identity_formula());
  c.add_arrow("eq", Homomorphism{target, target, I}, identity_formula());
  c.square("left square", "incl", "bs", "tn", "inf");
  c.square("right square", "ndiamond", "eq", "bs", "newton");
  c.injective("top row at H^1", "inf");
  c.exact("top row at B(S)", "inf", "newton");
  c.injective("bottom row at torsion", "incl");
  c.exact("bottom row at Y/IY", "incl", "ndiamond");
  c.injective("TN injective", "tn");
  c.surjective("TN surjective", "tn");
}

inline void ri_cells(DiagramCertifier& c, const OverlatticePair& p) {
  const std::size_t r = p.rank();
  RigidH1 R = rigid_h1(p);
  Lattice IY = augmentation_lattice(p.base()), IYbar = augmentation_in_cover(p);
  Subquotient torsY(Subquotient(Lattice::full(r), IY).torsion(), IY);
  Subquotient torsBar(Subquotient(Lattice::full(r), IYbar).torsion(), IYbar);
  Subquotient quot(Lattice::full(r), p.base_in_cover());
  RatMatrix Einv = *inverse(p.embedding());
  auto into_cover = [Einv](const IntVector& y) { return *to_integer(Einv * to_rational(y)); };
  IntMatrix I = IntMatrix::identity(r);
  c.add_arrow("inf", R.inflation, into_cover);
  c.add_arrow("res", R.restriction, identity_formula());
  c.add_arrow("incl", Homomorphism{torsY, torsBar, p.inclusion()}, into_cover);
  c.add_arrow("proj", Homomorphism{torsBar, quot, I}, identity_formula());
  c.add_arrow("tn", Homomorphism{torsY, R.h1_base, I}, identity_formula());
  c.add_arrow("riisos", Homomorphism{torsBar, R.group, I}, identity_formula());
  c.add_arrow("eq", Homomorphism{R.restriction_target, quot, I}, identity_formula());
  c.square("left square", "incl", "riisos", "tn", "inf");
  c.commutes("right square", {"riisos", "res", "eq"}, {"proj"});
  c.injective("top row at H^1(Gamma,S)", "inf");
  c.exact("top row at H^1(u->W)", "inf", "res");
  c.injective("bottom row at Y/IY tor", "incl");
  c.exact("bottom row at Ybar/IY tor", "incl", "proj");
  c.injective("TN injective", "tn");
  c.surjective("TN surjective", "tn");
  c.injective("riisos injective", "riisos");
  c.surjective("riisos surjective", "riisos");
}

inline void bfd_tn_cells(DiagramCertifier& c, const OverlatticePair& p) {
  const std::size_t r = p.rank();
  GammaModule Abar = overlattice_quotient(p);
  TateComplex CA(Abar), CY(p.cover());
  const std::size_t m2 = CA.dimension(-2);
  ShortExactSequence ses = ShortExactSequence::from_overlattice(p);
  Lattice IY = augmentation_in_cover(p), IYbar = augmentation_lattice(p.cover());
  Lattice kerN = norm_kernel(p.cover());
  Lattice kerN_Y = norm_kernel(p.base()).image(p.inclusion());

  Subquotient P1 = tate_group(CA, -2).group(), P2 = cochains_mod_boundaries(CA);
  Subquotient P3(CA.cocycles(-1), CA.relations(-1));
  Subquotient Q1(kerN_Y, IY), Q2(kerN, IY), Q3 = P3, R1 = Q1;
  Subquotient R2(kerN, IYbar), R3 = tate_group(CA, -1).group();

  IntMatrix I2 = IntMatrix::identity(m2), I1 = IntMatrix::identity(r);
  IntMatrix Dbar = CY.differential_matrix(-2), DA = CA.differential_matrix(-2);
  auto diffA = [CA](const IntVector& x) { return CA.differential(CA.cochain(-2, x)).data; };
  auto lift_diff = [CY, ses](const IntVector& x) {
    TateCochain f(-2, CY.group_order(), ses.quot.rank(), x);
    return CY.differential(ses.lift(f)).data;
  };
  auto connecting = [ses, p](const IntVector& x) {
    TateCochain f(-2, p.group().order(), ses.quot.rank(), x);
    return p.inclusion() * connecting_neg2_cochain(ses, ses.lift(f)).data;
  };

  c.add_arrow("incl", Homomorphism{P1, P2, I2}, identity_formula());
  c.add_arrow("d", Homomorphism{P2, P3, DA}, diffA);
  c.add_arrow("inf", Homomorphism{Q1, Q2, I1}, identity_formula());
  c.add_arrow("res", Homomorphism{Q2, Q3, I1}, identity_formula());
  c.add_arrow("r1", Homomorphism{R1, R2, I1}, identity_formula());
  c.add_arrow("r2", Homomorphism{R2, R3, I1}, identity_formula());
  c.add_arrow("delta", Homomorphism{P1, Q1, Dbar}, connecting);
  c.add_arrow("V", Homomorphism{P2, Q2, Dbar}, lift_diff);
  c.add_arrow("eq_top", Homomorphism{P3, Q3, I1}, identity_formula());
  c.add_arrow("eq_left", Homomorphism{Q1, R1, I1}, identity_formula());
  c.add_arrow("pi_mid", Homomorphism{Q2, R2, I1}, identity_formula());
  c.add_arrow("pi_right", Homomorphism{Q3, R3, I1}, identity_formula());

  c.custom("V lift-independent", {"V"}, [&]() -> std::optional<std::string> {
    // two lifts differ by a Y-valued cochain; its differential must vanish modulo IY
    const Homomorphism& V = c.arrow("V");
    for (const auto& x : test_elements(P2))
      for (const auto& g : CA.relations(-2).generators())
        if (!Q2.equal(V.apply(x), V.apply(x + g)))
          return "lifts of " + to_string(x) + " differing by " + to_string(g) + " disagree";
    return std::nullopt;
  });
  c.square("top left", "incl", "V", "delta", "inf");
  c.square("top right", "d", "eq_top", "V", "res");
  c.square("bottom left", "inf", "pi_mid", "eq_left", "r1");
  c.square("bottom right", "res", "pi_right", "pi_mid", "r2");
  c.injective("top row at H^-2", "incl");
  c.exact("top row at C^-2/B^-2", "incl", "d");
  c.injective("middle row at H^-1(Y)", "inf");
  c.exact("middle row at Z^-1/B^-1", "inf", "res");
  c.exact("bottom row at H^-1(Ybar)", "r1", "r2");
  c.exact("middle column at Z^-1/B^-1", "V", "pi_mid");
  c.surjective("middle column onto H^-1(Ybar)", "pi_mid");
  c.surjective("right column onto H^-1(Ybar/Y)", "pi_right");
}

}  // namespace detail

/// Arrow names of a diagram, in certification order.
inline std::vector<std::string> diagram_arrows(DiagramId id) {
  switch (id) {
    case DiagramId::BG: return {"inf", "newton", "incl", "ndiamond", "tn", "bs", "eq"};
    case DiagramId::RI: return {"inf", "res", "incl", "proj", "tn", "riisos", "eq"};
    case DiagramId::BFD_TN:
      return {"incl", "d", "inf", "res", "r1", "r2", "delta", "V", "eq_top", "eq_left", "pi_mid", "pi_right"};
    case DiagramId::ZZ: return {"incl", "d", "proj"};
  }
  return {};
}

inline CertificationReport verify_diagram(DiagramId id, const OverlatticePair& p, const DiagramFault& fault = {}) {
  DiagramCertifier c(std::string(to_string(id)), fault);
  switch (id) {
    case DiagramId::BG: detail::bg_cells(c, p.base()); break;
    case DiagramId::RI: detail::ri_cells(c, p); break;
    case DiagramId::BFD_TN: detail::bfd_tn_cells(c, p); break;
    case DiagramId::ZZ: detail::zz_cells(c, overlattice_quotient(p)); break;
  }
  return c.finish();
}

/// zz for a finite module given directly.
inline CertificationReport verify_zz(const GammaModule& A, const DiagramFault& fault = {}) {
  if (!A.is_finite()) fail(ErrorKind::MalformedInstance, "zz needs finite coefficients");
  DiagramCertifier c("zz", fault);
  detail::zz_cells(c, A);
  return c.finish();
}

/// bgdiag for a lattice given directly.
inline CertificationReport verify_bg(const GammaModule& Y, const DiagramFault& fault = {}) {
  if (!Y.is_lattice()) fail(ErrorKind::MalformedInstance, "bgdiag needs a lattice");
  DiagramCertifier c("bgdiag", fault);
  detail::bg_cells(c, Y);
  return c.finish();
}

}  // namespace gerbecoh
