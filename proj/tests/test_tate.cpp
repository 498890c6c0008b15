#include "support.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace gerbecoh;
using namespace gerbecoh::testing;

namespace {

TateCochain random_cochain(const TateComplex& C, int degree, std::mt19937_64& rng) {
  TateCochain f = C.zero(degree);
  for (std::size_t s = 0; s < f.slots(); ++s) f.set(s, random_element(C.coefficients(), rng));
  return f;
}

// Brute-force orders: enumerate every element of A.
struct BruteForce {
  const GammaModule& A;
  std::vector<IntVector> elems;
  explicit BruteForce(const GammaModule& M) : A(M), elems(M.as_group().elements()) {}

  std::size_t count(const std::function<bool(const IntVector&)>& pred) const {
    std::size_t c = 0;
    for (const auto& a : elems) c += pred(a);
    return c;
  }
  std::size_t image_size(const std::function<IntVector(const IntVector&)>& f) const {
    std::set<IntVector> img;
    for (const auto& a : elems) img.insert(A.reduce(f(a)));
    return img.size();
  }
  IntVector norm(const IntVector& a) const {
    IntVector s(A.rank(), 0);
    for (std::size_t g = 0; g < A.group().order(); ++g) s = s + A.apply(g, a);
    return s;
  }
  // |A^G / NA|
  Integer h0() const {
    std::size_t fixed = count([&](const IntVector& a) {
      for (std::size_t g = 0; g < A.group().order(); ++g)
        if (!A.equal(A.apply(g, a), a)) return false;
      return true;
    });
    return Integer(fixed) / Integer(image_size([&](const IntVector& a) { return norm(a); }));
  }
  // |ker N / IA|, IA generated by g a - a
  Integer hm1() const {
    std::size_t ker = count([&](const IntVector& a) { return A.equal(norm(a), IntVector(A.rank(), 0)); });
    std::set<IntVector> ia{A.reduce(IntVector(A.rank(), 0))};
    for (bool grew = true; grew;) {
      grew = false;
      std::vector<IntVector> cur(ia.begin(), ia.end());
      for (const auto& x : cur)
        for (const auto& a : elems)
          for (std::size_t g = 0; g < A.group().order(); ++g) grew |= ia.insert(A.reduce(x + A.apply(g, a) - a)).second;
    }
    return Integer(ker) / Integer(ia.size());
  }
};

// Invariant factors of the abelianization, known for the test groups.
std::vector<long long> abelianization(const std::string& label) {
  if (label.rfind("C2xC2", 0) == 0) return {2, 2};
  if (label.rfind("S3", 0) == 0) return {2};
  if (label.rfind("C2", 0) == 0) return {2};
  if (label.rfind("C3", 0) == 0) return {3};
  if (label.rfind("C4", 0) == 0) return {4};
  if (label.rfind("C6", 0) == 0) return {6};
  return {};
}

bool is_cyclic_label(const std::string& label) { return label[0] == 'C' && label.find('x') == std::string::npos; }

bool trivial_action(const GammaModule& A) {
  for (const auto& m : A.actions())
    for (std::size_t j = 0; j < A.rank(); ++j)
      if (!A.equal(m * unit_vector(A.rank(), j), unit_vector(A.rank(), j))) return false;
  return true;
}

}  // namespace

TEST(Differential, DegreeMinusTwoExample) {
  TateComplex C(zn(FiniteGroup::cyclic(2), 4, -1));
  TateCochain f = C.cochain(-2, iv({0, 1}));
  TateCochain df = C.differential(f);
  EXPECT_EQ(C.reduced(df).data, iv({2}));
}

TEST(Differential, ZeroAndFixedPoints) {
  TateComplex C(swap_module(FiniteGroup::cyclic(2)));
  for (int p = -3; p <= 2; ++p) EXPECT_TRUE(C.is_zero(C.differential(C.zero(p))));
  EXPECT_TRUE(C.is_zero(C.differential(C.cochain(0, iv({1, 1})))));
  EXPECT_FALSE(C.is_zero(C.differential(C.cochain(0, iv({1, 0})))));
  EXPECT_THROW(C.differential(C.zero(3)), Error);
}

TEST(Differential, SquaresToZeroOnRandomCochains) {
  std::mt19937_64 rng(2024);
  std::size_t checked = 0;
  for (const auto& [label, A] : standard_finite_modules()) {
    if (A.group().order() == 6 && label[0] == 'C') continue;
    SCOPED_TRACE(label);
    TateComplex C(A);
    for (int p = -3; p <= 1; ++p)
      for (int k = 0; k < 4; ++k) {
        TateCochain f = random_cochain(C, p, rng);
        EXPECT_TRUE(C.is_zero(C.differential(C.differential(f)))) << "degree " << p;
        ++checked;
      }
  }
  EXPECT_GE(checked, 200u);
}

TEST(TateGroup, ExamplesFromTheLiterature) {
  CohomologySpace H = tate_group(anisotropic_c2(), -1);
  EXPECT_EQ(H.presentation().invariant_factors(), IntVector{2});
  for (int i = -2; i <= 2; ++i) EXPECT_TRUE(tate_group(zn(FiniteGroup::trivial(), 6), i).presentation().is_trivial());
  EXPECT_EQ(tate_group(zn(FiniteGroup::cyclic(2), 2), -2).presentation().invariant_factors(), IntVector{2});
  EXPECT_THROW(tate_group(anisotropic_c2(), -2), Error);
  try {
    tate_group(anisotropic_c2(), -2);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfiniteCoefficientsInDegreeMinus2);
  }
}

TEST(TateGroup, ClassifyIgnoresBoundaries) {
  std::mt19937_64 rng(5);
  for (const auto& [label, A] : standard_finite_modules()) {
    if (A.group().order() > 4) continue;
    SCOPED_TRACE(label);
    TateComplex C(A);
    for (int p = -2; p <= 1; ++p) {
      CohomologySpace H = tate_group(C, p);
      for (const auto& rep : H.representatives()) {
        TateCochain g = random_cochain(C, p - 1, rng);
        EXPECT_EQ(H.classify(rep + C.differential(g)), H.classify(rep));
      }
      for (std::size_t i = 0; i < H.presentation().canonical_rank(); ++i) {
        IntVector e = unit_vector(H.presentation().canonical_rank(), i);
        EXPECT_EQ(H.classify(H.representative(e)), e);
      }
      EXPECT_TRUE(is_zero(H.classify(C.differential(random_cochain(C, p - 1, rng)))));
    }
  }
}

TEST(TateGroup, HomologyOracles) {
  for (const auto& [label, A] : standard_finite_modules()) {
    SCOPED_TRACE(label);
    TateComplex C(A);
    Integer h2 = tate_group(C, -2).order();
    BruteForce bf(A);
    EXPECT_EQ(tate_group(C, -1).order(), bf.hm1());
    EXPECT_EQ(tate_group(C, 0).order(), bf.h0());
    if (is_cyclic_label(label)) {
      // periodicity for cyclic groups
      EXPECT_EQ(h2, bf.h0());
      EXPECT_EQ(tate_group(C, 1).order(), bf.hm1());
    }
    if (trivial_action(A)) {
      // H_1(G, A) = G^ab (x) A
      Integer expected = 1;
      for (auto e : abelianization(label))
        for (const auto& d : A.presentation().invariant_factors()) expected *= gcd(Integer(e), d);
      EXPECT_EQ(h2, expected);
    }
  }
}

TEST(TateGroup, MinusTwoByFullEnumerationOnTinyCases) {
  FiniteGroup C2 = FiniteGroup::cyclic(2);
  for (const auto& A : {zn(C2, 2), zn(C2, 3, -1), zn(C2, 4, -1)}) {
    TateComplex C(A);
    auto cycles = Subquotient(Lattice::full(2), C.relations(-2)).elements();
    std::size_t z = 0;
    for (const auto& c : cycles) z += C.is_zero(C.differential(C.cochain(-2, c)));
    std::set<IntVector> bounds;
    for (const auto& h : Subquotient(Lattice::full(4), C.relations(-3)).elements())
      bounds.insert(C.reduced(C.differential(C.cochain(-3, h))).data);
    EXPECT_EQ(tate_group(C, -2).order(), Integer(z) / Integer(bounds.size()));
  }
}

TEST(TateGroup, DegreeTwoForCyclicGroupsMatchesPeriodicity) {
  for (const auto& A : {zn(FiniteGroup::cyclic(2), 4, -1), zn(FiniteGroup::cyclic(3), 3), zn(FiniteGroup::cyclic(2), 2)}) {
    BruteForce bf(A);
    EXPECT_EQ(tate_group(A, 2).order(), bf.h0());
  }
}

TEST(Coinflation, Examples) {
  TowerSurjection t = TowerSurjection::cyclic(4, 2);
  TateCochain f(-2, 4, 1, iv({0, 5, 0, 0}));
  EXPECT_EQ(coinflation(f, t).data, iv({0, 5}));
  TateCochain c(-2, 4, 1, iv({3, 3, 3, 3}));
  EXPECT_EQ(coinflation(c, t).data, iv({6, 6}));
  TateCochain g(-2, 2, 1, iv({1, 2}));
  EXPECT_EQ(coinflation(g, TowerSurjection::identity(FiniteGroup::cyclic(2))).data, g.data);
  EXPECT_THROW(coinflation(g, t), Error);
}

TEST(Coinflation, SurjectiveAndCompatibleWithDifferentials) {
  std::mt19937_64 rng(9);
  std::vector<std::pair<TowerSurjection, GammaModule>> cases{
      {TowerSurjection::cyclic(4, 2), zn(FiniteGroup::cyclic(2), 4, -1)},
      {TowerSurjection::cyclic(6, 3), zn(FiniteGroup::cyclic(3), 7, 2)},
      {sign_tower(3), zn(FiniteGroup::cyclic(2), 3, -1)},
      {TowerSurjection::to_trivial(FiniteGroup::cyclic(3)), zn(FiniteGroup::trivial(), 4)}};
  for (const auto& [t, A] : cases) {
    TateComplex top(A.inflate(t)), bottom(A);
    Homomorphism co{top.cochain_group(-2), bottom.cochain_group(-2), coinflation_matrix(t, A.rank(), -2)};
    EXPECT_TRUE(co.well_defined());
    EXPECT_TRUE(co.surjective());
    for (int k = 0; k < 10; ++k) {
      TateCochain f = random_cochain(top, -2, rng);
      EXPECT_TRUE(bottom.equal(bottom.differential(coinflation(f, t)),
                               bottom.cochain(-1, top.differential(f).data)));
      TateCochain h = random_cochain(top, -3, rng);
      EXPECT_TRUE(bottom.equal(bottom.differential(coinflation(h, t)), coinflation(top.differential(h), t)));
    }
  }
}

TEST(Connecting, AnisotropicLevelTwoIsBijectiveByBruteForce) {
  auto ses = ShortExactSequence::from_overlattice(OverlatticePair::level(anisotropic_c2(), 2));
  TateComplex Q(ses.quot), Ybar(ses.mid), Y(ses.sub);
  CohomologySpace H2 = tate_group(Q, -2), H1 = tate_group(Y, -1);
  ASSERT_EQ(H2.order(), 2);
  ASSERT_EQ(H1.order(), 2);
  // every cycle, every lift in a box: classes depend on the cycle class only
  std::map<IntVector, std::set<IntVector>> images;
  for (const auto& c : Subquotient(Lattice::full(2), Q.relations(-2)).elements()) {
    TateCochain f = Q.cochain(-2, c);
    if (!Q.is_cocycle(f)) continue;
    for (long long a = -2; a <= 2; ++a)
      for (long long b = -2; b <= 2; ++b) {
        TateCochain lift = ses.lift(f);
        lift.data[0] += ses.inc(0, 0) * a;
        lift.data[1] += ses.inc(0, 0) * b;
        images[H2.classify(f)].insert(H1.classify(connecting_neg2_cochain(ses, lift)));
      }
  }
  ASSERT_EQ(images.size(), 2u);
  std::set<IntVector> all;
  for (const auto& [cls, imgs] : images) {
    EXPECT_EQ(imgs.size(), 1u);
    all.insert(*imgs.begin());
  }
  EXPECT_EQ(all.size(), 2u);
  // f(1) = 0, f(s) = 1/2 lifts to d = -1
  TateCochain f = Q.cochain(-2, iv({0, 1}));
  EXPECT_EQ(connecting_neg2_cochain(ses, ses.lift(f)).data, iv({-1}));
  EXPECT_TRUE(table_is_bijective(H2.presentation(), H1.presentation(), connecting_neg2_table(ses)));
  EXPECT_TRUE(is_zero(connecting_neg2(ses, IntVector{0})));
}

TEST(Connecting, TrivialActionTargetVanishes) {
  auto ses = ShortExactSequence::from_overlattice(OverlatticePair::level(split_gm(FiniteGroup::cyclic(2)), 2));
  EXPECT_EQ(tate_group(TateComplex(ses.quot), -2).order(), 2);
  EXPECT_EQ(tate_group(TateComplex(ses.sub), -1).order(), 1);
  EXPECT_TRUE(is_zero(connecting_neg2(ses, IntVector{1})));
}

TEST(Connecting, RejectsNonCycles) {
  auto ses = ShortExactSequence::from_overlattice(OverlatticePair::level(anisotropic_c2(), 4));
  TateComplex Q(ses.quot);
  TateCochain g = Q.cochain(-2, iv({0, 1}));  // d g = -2, nonzero mod 4
  EXPECT_FALSE(Q.is_cocycle(g));
  EXPECT_THROW(tate_group(Q, -2).classify(g), Error);
}

TEST(CupProduct, DegreeZeroExample) {
  GammaModule A = zn(FiniteGroup::cyclic(2), 2);
  PontryaginDual D(A);
  TateCochain a(-1, 2, 1, iv({1})), b(0, 2, 1, iv({1}));
  EXPECT_EQ(cup_pair(D, a, b), QZValue(Rational(1, 2)));
  EXPECT_TRUE(cup_pair(D, TateCochain(-2, 2, 1), TateCochain(1, 2, 1, iv({1, 1}))).is_zero());
  EXPECT_THROW(cup_pair(D, a, TateCochain(2, 2, 1)), Error);
  EXPECT_THROW(cup_pair(D, a, TateCochain(0, 2, 2)), Error);
}

TEST(CupProduct, MinusTwoByOnePerfectOnC2ByEnumeration) {
  GammaModule A = zn(FiniteGroup::cyclic(2), 2);
  PontryaginDual D(A);
  TateComplex C(A), Cd(D.module());
  // 4 x 4 cochain table; the induced pairing Ĥ^-2 x Ĥ^1 is nondegenerate
  CohomologySpace H2 = tate_group(C, -2), H1 = tate_group(Cd, 1);
  ASSERT_EQ(H2.order(), 2);
  ASSERT_EQ(H1.order(), 2);
  bool nonzero = false;
  for (long long f0 = 0; f0 < 2; ++f0)
    for (long long f1 = 0; f1 < 2; ++f1)
      for (long long c0 = 0; c0 < 2; ++c0)
        for (long long c1 = 0; c1 < 2; ++c1) {
          TateCochain f(-2, 2, 1, iv({f0, f1})), c(1, 2, 1, iv({c0, c1}));
          if (!C.is_cocycle(f) || !Cd.is_cocycle(c)) continue;
          if (is_zero(H2.classify(f)) || is_zero(H1.classify(c))) {
            EXPECT_TRUE(cup_pair(D, f, c).is_zero());
          } else {
            nonzero |= !cup_pair(D, f, c).is_zero();
          }
        }
  EXPECT_TRUE(nonzero);
}

TEST(CupProduct, FormMatchesPointwiseAndCompatibilityWithDifferential) {
  std::mt19937_64 rng(77);
  for (const auto& [label, A] : standard_finite_modules()) {
    if (A.group().order() > 4 && label[0] == 'C') continue;
    SCOPED_TRACE(label);
    PontryaginDual D(A);
    TateComplex C(A), Cd(D.module());
    const Integer n = A.group().order();
    for (int k = 0; k < 6; ++k) {
      for (int i : {0, 1}) {
        TateCochain a = random_cochain(C, -i - 1, rng), b = random_cochain(Cd, i, rng);
        // da u b + (-1)^{i+1} a u db = d(a u b) = |G| (a u b)
        QZValue lhs = cup_pair(D, C.differential(a), b);
        QZValue rhs = cup_pair(D, a, Cd.differential(b));
        lhs = (i % 2 == 0) ? lhs - rhs : lhs + rhs;
        EXPECT_EQ(lhs, n * cup_pair(D, a, b)) << "i = " << i;
      }
      for (auto [p, q] : {std::pair{-1, 0}, {-2, 1}, {0, 0}, {-1, 1}, {-2, 2}}) {
        TateCochain a = random_cochain(C, p, rng), b = random_cochain(Cd, q, rng);
        RatMatrix F = cup_form(D, p, q);
        Rational v = 0;
        for (std::size_t x = 0; x < F.rows(); ++x)
          for (std::size_t y = 0; y < F.cols(); ++y) v += Rational(a.data[x] * b.data[y]) * F(x, y);
        EXPECT_EQ(QZValue(v), cup_pair(D, a, b));
      }
    }
  }
}

TEST(CupProduct, PerfectDualityAndAnnihilators) {
  for (const auto& [label, A] : standard_finite_modules()) {
    SCOPED_TRACE(label);
    PontryaginDual D(A);
    TateComplex C(A), Cd(D.module());
    for (int i : {0, 1}) {
      RatMatrix F = cup_form(D, -i - 1, i);
      Lattice Z = C.cocycles(-i - 1), B = C.coboundaries(-i - 1);
      EXPECT_EQ(right_annihilator(Z, F), Cd.coboundaries(i));
      EXPECT_EQ(right_annihilator(B, F), Cd.cocycles(i));
      EXPECT_EQ(left_annihilator(Cd.cocycles(i), F), B);
      EXPECT_EQ(left_annihilator(Cd.coboundaries(i), F), Z);
      Subquotient Ci = Cd.cochain_group(i);
      EXPECT_EQ(Subquotient(right_annihilator(Z, F), Cd.relations(i)).order() *
                    Subquotient(Z, C.relations(-i - 1)).order(),
                Ci.order());
      CohomologySpace Hl = tate_group(C, -i - 1), Hr = tate_group(Cd, i);
      std::vector<std::vector<QZValue>> table;
      for (const auto& a : Hl.representatives()) {
        table.emplace_back();
        for (const auto& b : Hr.representatives()) table.back().push_back(cup_pair(D, a, b));
      }
      EXPECT_TRUE(pairing_is_perfect(Hl.presentation(), Hr.presentation(), table)) << "i = " << i;
    }
  }
}

TEST(CupProduct, CoinflationAdjunction) {
  std::mt19937_64 rng(31);
  std::vector<std::pair<TowerSurjection, GammaModule>> cases{
      {TowerSurjection::cyclic(4, 2), zn(FiniteGroup::cyclic(2), 4, -1)},
      {TowerSurjection::cyclic(6, 2), swap_module(FiniteGroup::cyclic(2))}};
  for (const auto& [t, A] : cases) {
    GammaModule Atop = A.inflate(t);
    PontryaginDual D(A), Dtop(Atop);
    TateComplex top(Atop), bottom(A), dual(D.module());
    for (int k = 0; k < 100; ++k) {
      int i = k % 2;
      TateCochain a = random_cochain(top, -i - 1, rng);
      TateCochain b = random_cochain(dual, i, rng);
      TateCochain co = i == 0 ? bottom.cochain(-1, a.data) : coinflation(a, t);
      EXPECT_EQ(cup_pair(Dtop, a, inflation(b, t)), cup_pair(D, co, b));
    }
  }
}

TEST(Stabilization, Examples) {
  FiniteGroup C2 = FiniteGroup::cyclic(2);
  auto id = stabilization_check(TowerSurjection::identity(C2), zn(C2, 2), -2, true);
  EXPECT_TRUE(id.isomorphism());
  EXPECT_TRUE(*id.h1w_isomorphism);
  auto c4 = stabilization_check(TowerSurjection::cyclic(4, 2), zn(C2, 2, -1), -2, true);
  EXPECT_TRUE(c4.isomorphism());
  EXPECT_EQ(c4.source_order, 2);
  auto c6 = stabilization_check(TowerSurjection::cyclic(6, 2), zn(C2, 2), -1);
  EXPECT_TRUE(c6.isomorphism());
  // V4 -> C2 changes H_1: not every tower is stable
  FiniteGroup V4 = FiniteGroup::direct_product(C2, C2);
  TowerSurjection v(V4, C2, {0, 1, 0, 1});
  EXPECT_FALSE(stabilization_check(v, zn(C2, 2), -2).isomorphism());
  EXPECT_THROW(stabilization_check(v, GammaModule::trivial_action(V4, 1, diag_lattice({2})), -2), Error);
}
