#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gerbecoh;
using namespace gerbecoh::testing;

namespace {

IntVector random_vector(std::mt19937_64& rng, std::size_t n, long long bound = 5) {
  IntVector v(n);
  for (auto& x : v) x = Integer(static_cast<long long>(rng() % (2 * bound + 1))) - bound;
  return v;
}

/// A random 1-cocycle of the dual, as a random combination of the cocycle basis.
TateCochain random_dual_cocycle(std::mt19937_64& rng, const TateComplex& Cd) {
  const Lattice Z = Cd.cocycles(1);
  IntVector c = random_vector(rng, Z.rank());
  return Cd.cochain(1, Z.basis() * c);
}

OverlatticePair aniso(long long n) { return OverlatticePair::level(anisotropic_c2(), n); }

}  // namespace

// ---------------------------------------------------------------------------
// Characters

TEST(Characters, PairingIsPerfectOnSmallGroups) {
  Subquotient X(Lattice::full(2), diag_lattice({2, 4}));
  CharacterGroup ch(X);
  EXPECT_EQ(ch.group().order(), 8);
  std::size_t zero_rows = 0;
  for (const auto& x : X.elements()) {
    bool all_zero = true;
    for (const auto& chi : ch.group().elements()) all_zero = all_zero && ch.pair(x, chi).is_zero();
    if (all_zero) ++zero_rows;
  }
  EXPECT_EQ(zero_rows, 1u);
}

TEST(Characters, FromValuesRoundTrips) {
  Subquotient X(Lattice::full(2), diag_lattice({3, 6}));
  CharacterGroup ch(X);
  for (const auto& chi : ch.group().elements()) {
    IntVector back = ch.from_values([&](const IntVector& g) { return ch.pair(g, chi); });
    EXPECT_TRUE(ch.group().equal(back, chi)) << to_string(chi);
    EXPECT_TRUE(ch.character(chi).well_defined());
  }
}

TEST(Characters, InfiniteGroupRejected) {
  EXPECT_THROW(CharacterGroup(Subquotient::whole(1)), Error);
}

// ---------------------------------------------------------------------------
// -d on PlusPoints

TEST(PlusPoint, AnisotropicQuarterGivesHalf) {
  // Ybar = (1/2) Z, h(1/2) = 1/4
  PlusPoint h{aniso(2), {QZValue(Integer(1), Integer(4))}};
  ASSERT_TRUE(h.satisfies_plus());
  GammaModule A = overlattice_quotient(h.pair);
  PontryaginDual D(A);
  TateCochain c = minus_d_plus_point(D, h);
  EXPECT_TRUE(D.eval(iv({1}), c.at(0)).is_zero());
  EXPECT_EQ(D.eval(iv({1}), c.at(1)), QZValue(Integer(1), Integer(2)));
  EXPECT_TRUE(TateComplex(D.module()).is_cocycle(c));
}

TEST(PlusPoint, ConditionViolated) {
  PlusPoint h{aniso(2), {QZValue(Integer(1), Integer(8))}};
  EXPECT_FALSE(h.satisfies_plus());
  try {
    minus_d_plus_point(h);
    FAIL() << "expected PlusConditionViolated";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PlusConditionViolated);
  }
}

TEST(PlusPoint, CharacterMatchesFunctionalEverywhere) {
  // oracle: evaluate -(sigma h - h) on every element of Ybar / Y directly
  std::mt19937_64 rng(5);
  for (const auto& [label, p] : overlattices()) {
    RigidH1 R = rigid_h1(p);
    CharacterGroup chars(R.group);
    GammaModule A = overlattice_quotient(p);
    PontryaginDual D(A);
    for (const auto& chi : chars.group().elements()) {
      PlusPoint h = plus_point_from_character(R, chars, chi);
      ASSERT_TRUE(h.satisfies_plus()) << label;
      TateCochain c = minus_d_plus_point(D, h);
      const FiniteGroup& G = p.group();
      for (std::size_t s = 0; s < G.order(); ++s)
        for (const auto& a : A.as_group().elements()) {
          QZValue expect = h(a) - h(p.cover().apply(G.inv(s), a));
          EXPECT_EQ(D.eval(a, c.at(s)), expect) << label;
        }
    }
  }
}

TEST(PlusPoint, ExtensionRestrictsToCharacter) {
  for (const auto& [label, p] : overlattices()) {
    RigidH1 R = rigid_h1(p);
    CharacterGroup chars(R.group);
    for (const auto& chi : chars.group().elements()) {
      PlusPoint h = plus_point_from_character(R, chars, chi);
      for (const auto& x : R.group.elements()) EXPECT_EQ(h(x), chars.pair(x, chi)) << label;
      for (const auto& g : augmentation_in_cover(p).generators()) EXPECT_TRUE(h(g).is_zero()) << label;
    }
  }
}

// ---------------------------------------------------------------------------
// The pairing with H^1(W, Z)

TEST(Pairing, ChangeOfRigidificationAnisotropic) {
  PlusPoint h{aniso(2), {QZValue(Integer(1), Integer(4))}};
  GammaModule A = overlattice_quotient(h.pair);
  CohomologySpace H = tate_group(A, -2);
  ASSERT_EQ(H.order(), 2);
  // the class with value 1 at sigma and 0 at the identity is nontrivial
  TateCochain f(-2, 2, 1, iv({0, 1}));
  ASSERT_TRUE(H.is_cocycle(f));
  EXPECT_EQ(H.classify(f), iv({1}));
  EXPECT_EQ(change_of_rigidification(f, h), QZValue(Integer(1), Integer(2)));
  EXPECT_TRUE(change_of_rigidification(TateCochain(-2, 2, 1), h).is_zero());
  for (const auto& rep : H.representatives()) EXPECT_EQ(change_of_rigidification(rep, h), QZValue(Integer(1), Integer(2)));
}

TEST(Pairing, InvariantUnderBoundaryShifts) {
  std::mt19937_64 rng(17);
  std::vector<NamedPair> pairs = overlattices();
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& [label, p] = pairs[trial % pairs.size()];
    GammaModule A = overlattice_quotient(p);
    PontryaginDual D(A);
    TateComplex CA(A), Cd(D.module());
    Lattice Z = CA.cocycles(-2);
    TateCochain f = CA.cochain(-2, Z.basis() * random_vector(rng, Z.rank()));
    TateCochain c = random_dual_cocycle(rng, Cd);
    QZValue base = pairing_h1w(D, f, c);
    TateCochain f2 = f + CA.differential(CA.cochain(-3, random_vector(rng, CA.dimension(-3))));
    TateCochain c2 = c + Cd.differential(Cd.cochain(0, random_vector(rng, Cd.dimension(0))));
    EXPECT_EQ(pairing_h1w(D, f2, c), base) << label;
    EXPECT_EQ(pairing_h1w(D, f, c2), base) << label;
    EXPECT_EQ(pairing_h1w(D, f2, c2), base) << label;
    ++checked;
  }
  EXPECT_EQ(checked, 50);
}

TEST(Pairing, BiAdditive) {
  std::mt19937_64 rng(23);
  for (const auto& [label, p] : overlattices()) {
    GammaModule A = overlattice_quotient(p);
    PontryaginDual D(A);
    TateComplex CA(A), Cd(D.module());
    Lattice Z = CA.cocycles(-2);
    for (int trial = 0; trial < 5; ++trial) {
      TateCochain f = CA.cochain(-2, Z.basis() * random_vector(rng, Z.rank()));
      TateCochain g = CA.cochain(-2, Z.basis() * random_vector(rng, Z.rank()));
      TateCochain c = random_dual_cocycle(rng, Cd), e = random_dual_cocycle(rng, Cd);
      EXPECT_EQ(pairing_h1w(D, f + g, c), pairing_h1w(D, f, c) + pairing_h1w(D, g, c)) << label;
      EXPECT_EQ(pairing_h1w(D, f, c + e), pairing_h1w(D, f, c) + pairing_h1w(D, f, e)) << label;
    }
  }
}

TEST(Pairing, Errors) {
  GammaModule A = overlattice_quotient(aniso(2));
  PontryaginDual D(A);
  TateCochain f(-2, 2, 1), c(1, 2, 1);
  EXPECT_THROW(pairing_h1w(D, c, f), Error);
  try {
    pairing_h1w(D, TateCochain(-2, 2, 2), c);
    FAIL() << "expected MismatchedCoefficients";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MismatchedCoefficients);
  }
  PlusPoint h{OverlatticePair::level(regular_c2(), 2), {QZValue(Integer(1), Integer(2)), QZValue(Integer(1), Integer(2))}};
  try {
    change_of_rigidification(f, h);
    FAIL() << "expected MismatchedCoefficients";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MismatchedCoefficients);
  }
}

TEST(Pairing, ClassOfMinusDIsTrivialOnImageOfFixedPoints) {
  // a Galois-fixed h has -d h = 0
  for (long long n : {2, 3, 4}) {
    OverlatticePair p = OverlatticePair::level(regular_c2(), n);
    PlusPoint h{p, {QZValue(Integer(1), Integer(n)), QZValue(Integer(1), Integer(n))}};
    ASSERT_TRUE(h.is_fixed());
    TateCochain c = minus_d_plus_point(h);
    EXPECT_TRUE(is_zero(c.data) || TateComplex(pontryagin_dual(overlattice_quotient(p)).module()).is_zero(c));
  }
}

// ---------------------------------------------------------------------------
// Annihilators

TEST(Annihilators, ExactOnStandardModules) {
  for (const auto& [label, A] : standard_finite_modules())
    for (int i : {0, 1})
      for (char which : {'Z', 'B'}) {
        AnnihilatorReport r = annihilator_check(i, A, which);
        EXPECT_TRUE(r.holds()) << label << " i=" << i << " " << which;
      }
}

TEST(Annihilators, OnOverlatticeQuotients) {
  for (const auto& [label, p] : overlattices())
    for (int i : {0, 1})
      for (char which : {'Z', 'B'}) EXPECT_TRUE(annihilator_check(i, overlattice_quotient(p), which).holds()) << label;
}

TEST(Annihilators, BadArguments) {
  GammaModule A = overlattice_quotient(aniso(2));
  EXPECT_THROW(annihilator_check(2, A, 'Z'), Error);
  EXPECT_THROW(annihilator_check(0, A, 'X'), Error);
}

// ---------------------------------------------------------------------------
// The dual diagram

TEST(DualDiagram, CertifiesOnAllOverlattices) {
  for (const auto& [label, p] : overlattices()) {
    DualDiagramReport r = dual_diagram_bfdpd(p);
    for (const auto* f : r.report.failures()) ADD_FAILURE() << label << ": " << f->name << ": " << f->witness;
    EXPECT_TRUE(r.passed()) << label;
    for (const auto& [name, orders] : r.orders) EXPECT_EQ(orders.first, orders.second) << label << " " << name;
    EXPECT_NE(r.report.find("adjoint V / -d"), nullptr);
    EXPECT_NE(r.report.find("adjoint delta / -delta"), nullptr);
  }
}

TEST(DualDiagram, SignFaultIsCaughtAtItsArrow) {
  std::vector<NamedPair> hosts = {{"anisotropic level 4", aniso(4)},
                                  {"C3 rotation level 3", OverlatticePair::level(c3_rotation(), 3)}};
  for (const std::string arrow : {"-d", "-d top", "-delta"}) {
    bool caught = false;
    for (const auto& [label, p] : hosts) {
      DualDiagramReport r = dual_diagram_bfdpd(p, SignFault{arrow});
      auto fails = r.report.failures();
      if (fails.empty()) continue;
      caught = true;
      for (const auto* f : fails) {
        EXPECT_TRUE(f->name.size() > arrow.size() &&
                    f->name.compare(f->name.size() - arrow.size() - 3, std::string::npos, " / " + arrow) == 0)
            << label << ": unexpected failing cell " << f->name;
        EXPECT_FALSE(f->witness.empty());
      }
    }
    EXPECT_TRUE(caught) << "dropping the sign of " << arrow << " went unnoticed";
  }
}

TEST(DualDiagram, UnknownSignFaultRejected) {
  try {
    dual_diagram_bfdpd(aniso(2), SignFault{"inf^"});
    FAIL() << "expected MalformedInstance";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedInstance);
  }
}
