#pragma once

#include "gerbecoh/gerbecoh.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gerbecoh::testing {

inline Integer I(long long v) { return Integer(v); }

inline IntVector iv(std::initializer_list<long long> xs) {
  IntVector v;
  for (auto x : xs) v.emplace_back(x);
  return v;
}

inline IntMatrix scalar(long long s) { return Integer(s) * IntMatrix::identity(1); }

inline Lattice diag_lattice(std::initializer_list<long long> d) {
  IntMatrix m(d.size(), d.size());
  std::size_t i = 0;
  for (auto x : d) {
    m(i, i) = x;
    ++i;
  }
  return Lattice::span(m);
}

/// Z/n with generator g of a cyclic group acting by s.
inline GammaModule zn(const FiniteGroup& G, long long n, long long s = 1, std::size_t g = 1) {
  if (G.order() == 1) return GammaModule::trivial_action(G, 1, diag_lattice({n}));
  return GammaModule::cyclic_module(G, n, {{g, Integer(s)}});
}

/// Rank-one lattice with the generator acting by s.
inline GammaModule z_lattice(const FiniteGroup& G, long long s = 1, std::size_t g = 1) {
  if (G.order() == 1) return GammaModule::lattice(G, 1, {IntMatrix::identity(1)});
  return GammaModule::from_generators(G, 1, Lattice::zero(1), {{g, scalar(s)}});
}

inline GammaModule anisotropic_c2() { return z_lattice(FiniteGroup::cyclic(2), -1); }
inline GammaModule split_gm(const FiniteGroup& G = FiniteGroup::trivial()) { return z_lattice(G, 1); }
inline GammaModule regular_c2() { return permutation_lattice(FiniteGroup::cyclic(2), {0}).lattice; }

/// (Z/2)^2 with the generator swapping coordinates.
inline GammaModule swap_module(const FiniteGroup& G, std::size_t g = 1) {
  return GammaModule::from_generators(G, 2, diag_lattice({2, 2}), {{g, IntMatrix{{0, 1}, {1, 0}}}});
}

/// The finite modules used throughout the suites: (label, module).
struct NamedModule {
  std::string label;
  GammaModule module;
};

inline std::vector<std::size_t> s3_transposition_and_cycle(const FiniteGroup& S3,
                                                           const std::vector<std::vector<std::size_t>>& perms) {
  std::size_t t = 0, c = 0;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (perms[i] == std::vector<std::size_t>{1, 0, 2}) t = i;
    if (perms[i] == std::vector<std::size_t>{1, 2, 0}) c = i;
  }
  (void)S3;
  return {t, c};
}

inline std::vector<NamedModule> standard_finite_modules() {
  std::vector<NamedModule> out;
  FiniteGroup C2 = FiniteGroup::cyclic(2), C3 = FiniteGroup::cyclic(3), C4 = FiniteGroup::cyclic(4);
  FiniteGroup C6 = FiniteGroup::cyclic(6), V4 = FiniteGroup::direct_product(C2, C2);
  std::vector<std::vector<std::size_t>> perms;
  FiniteGroup S3 = FiniteGroup::symmetric(3, &perms);
  auto tc = s3_transposition_and_cycle(S3, perms);

  out.push_back({"C2 Z/2", zn(C2, 2)});
  out.push_back({"C2 Z/4 by -1", zn(C2, 4, -1)});
  out.push_back({"C2 Z/3 by -1", zn(C2, 3, -1)});
  out.push_back({"C2 (Z/2)^2 swap", swap_module(C2)});
  out.push_back({"C3 Z/3", zn(C3, 3)});
  out.push_back({"C3 Z/7 by 2", zn(C3, 7, 2)});
  out.push_back({"C3 (Z/2)^2 rotation",
                 GammaModule::from_generators(C3, 2, diag_lattice({2, 2}), {{1, IntMatrix{{0, 1}, {1, 1}}}})});
  out.push_back({"C4 Z/2", zn(C4, 2)});
  out.push_back({"C4 Z/5 by 2", zn(C4, 5, 2)});
  out.push_back({"C4 Z/4 by -1", zn(C4, 4, -1)});
  out.push_back({"C2xC2 Z/2", GammaModule::trivial_action(V4, 1, diag_lattice({2}))});
  out.push_back({"C2xC2 (Z/2)^2",
                 GammaModule::from_generators(V4, 2, diag_lattice({2, 2}),
                                              {{1, IntMatrix{{1, 1}, {0, 1}}}, {2, IntMatrix{{1, 0}, {0, 1}}}})});
  out.push_back({"S3 Z/2", GammaModule::trivial_action(S3, 1, diag_lattice({2}))});
  out.push_back({"S3 Z/3 sign", GammaModule::from_generators(S3, 1, diag_lattice({3}),
                                                              {{tc[0], scalar(-1)}, {tc[1], scalar(1)}})});
  out.push_back({"S3 (Z/2)^2 standard",
                 GammaModule::from_generators(S3, 2, diag_lattice({2, 2}),
                                              {{tc[0], IntMatrix{{0, 1}, {1, 0}}}, {tc[1], IntMatrix{{0, 1}, {1, 1}}}})});
  out.push_back({"C6 Z/7 by 3", zn(C6, 7, 3)});
  return out;
}

/// Uniform element of Z^r / relations, given by a reduced representative.
inline IntVector random_element(const GammaModule& A, std::mt19937_64& rng) {
  const auto& P = A.presentation();
  IntVector c(P.canonical_rank());
  for (std::size_t i = 0; i < c.size(); ++i) {
    Integer m = P.modulus(i);
    if (m == 0) {
      c[i] = Integer(static_cast<long long>(rng() % 11)) - 5;
    } else {
      c[i] = Integer(static_cast<unsigned long long>(rng() % static_cast<unsigned long long>(m)));
    }
  }
  return A.as_group().representative(c);
}

/// Rank-2 lattice over C2 with the generator acting by -1.
inline GammaModule minus_identity_rank2() {
  return GammaModule::from_generators(FiniteGroup::cyclic(2), 2, Lattice::zero(2), {{1, IntMatrix{{-1, 0}, {0, -1}}}});
}

/// Z^2 with C3 acting through the rotation of order 3 (the A2 root lattice).
inline GammaModule c3_rotation() {
  return GammaModule::from_generators(FiniteGroup::cyclic(3), 2, Lattice::zero(2), {{1, IntMatrix{{0, -1}, {1, -1}}}});
}

/// Z^2 with C4 acting by a quarter turn.
inline GammaModule c4_rotation() {
  return GammaModule::from_generators(FiniteGroup::cyclic(4), 2, Lattice::zero(2), {{1, IntMatrix{{0, -1}, {1, 0}}}});
}

inline GammaModule s3_permutation() { return permutation_lattice(FiniteGroup::symmetric(3), {0}).lattice; }

/// Dicyclic group of order 4n: a^k x^e with a^{2n} = 1, x^2 = a^n, x a x^-1 = a^-1.
inline FiniteGroup dicyclic(std::size_t n) {
  const std::size_t m = 2 * n, N = 2 * m;
  std::vector<std::vector<std::size_t>> t(N, std::vector<std::size_t>(N));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t e = 0; e < 2; ++e)
      for (std::size_t l = 0; l < m; ++l)
        for (std::size_t f = 0; f < 2; ++f) {
          long long kk = static_cast<long long>(k) + (e ? -1 : 1) * static_cast<long long>(l);
          std::size_t ee = e + f;
          if (ee == 2) {
            kk += static_cast<long long>(n);
            ee = 0;
          }
          std::size_t k2 = static_cast<std::size_t>(((kk % static_cast<long long>(m)) + static_cast<long long>(m)) % static_cast<long long>(m));
          t[k + m * e][l + m * f] = k2 + m * ee;
        }
  return FiniteGroup::from_table(t, "Dic" + std::to_string(n));
}

inline FiniteGroup dihedral(std::size_t n) {
  std::vector<std::size_t> r(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = (i + 1) % n;
    s[i] = (n - i) % n;
  }
  return FiniteGroup::from_permutations({r, s}, "D" + std::to_string(n));
}

/// N x| C_k for N = sum Z/mods[i], the generator of C_k acting by the integer matrix M.
inline FiniteGroup abelian_by_cyclic(const std::vector<long long>& mods, const std::vector<std::vector<long long>>& M,
                                     std::size_t k, std::string name) {
  const std::size_t r = mods.size();
  std::vector<std::vector<long long>> elems{{}};
  for (auto m : mods) {
    std::vector<std::vector<long long>> next;
    for (const auto& e : elems)
      for (long long x = 0; x < m; ++x) {
        next.push_back(e);
        next.back().push_back(x);
      }
    elems = next;
  }
  auto act = [&](std::vector<long long> v, std::size_t j) {
    for (std::size_t t = 0; t < j; ++t) {
      std::vector<long long> w(r, 0);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) w[a] += M[a][b] * v[b];
      for (std::size_t a = 0; a < r; ++a) w[a] = ((w[a] % mods[a]) + mods[a]) % mods[a];
      v = w;
    }
    return v;
  };
  std::map<std::vector<long long>, std::size_t> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;
  const std::size_t n = elems.size(), N = n * k;
  std::vector<std::vector<std::size_t>> t(N, std::vector<std::size_t>(N));
  for (std::size_t j1 = 0; j1 < k; ++j1)
    for (std::size_t i1 = 0; i1 < n; ++i1)
      for (std::size_t j2 = 0; j2 < k; ++j2)
        for (std::size_t i2 = 0; i2 < n; ++i2) {
          std::vector<long long> v = act(elems[i2], j1);
          for (std::size_t a = 0; a < r; ++a) v[a] = (v[a] + elems[i1][a]) % mods[a];
          t[j1 * n + i1][j2 * n + i2] = ((j1 + j2) % k) * n + index[v];
        }
  return FiniteGroup::from_table(t, std::move(name));
}

/// One group of each isomorphism type of order at most n (n <= 16).
inline std::vector<FiniteGroup> groups_up_to(std::size_t n) {
  using G = FiniteGroup;
  std::vector<FiniteGroup> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(G::cyclic(k));
  auto x = [](const G& a, const G& b) { return G::direct_product(a, b); };
  G C2 = G::cyclic(2), C3 = G::cyclic(3), C4 = G::cyclic(4);
  std::vector<FiniteGroup> more{x(C2, C2),
                                G::symmetric(3),
                                x(C4, C2),
                                x(x(C2, C2), C2),
                                dihedral(4),
                                dicyclic(2),
                                x(C3, C3),
                                dihedral(5),
                                x(G::cyclic(6), C2),
                                G::from_permutations({{1, 2, 0, 3}, {0, 2, 3, 1}}, "A4"),
                                dihedral(6),
                                dicyclic(3),
                                dihedral(7),
                                x(C4, C4),
                                abelian_by_cyclic({4, 2}, {{1, 0}, {1, 1}}, 2, "(C4xC2):C2"),
                                abelian_by_cyclic({4}, {{3}}, 4, "C4:C4"),
                                x(G::cyclic(8), C2),
                                abelian_by_cyclic({8}, {{5}}, 2, "M16"),
                                dihedral(8),
                                abelian_by_cyclic({8}, {{3}}, 2, "SD16"),
                                dicyclic(4),
                                x(x(C4, C2), C2),
                                x(C2, dihedral(4)),
                                x(C2, dicyclic(2)),
                                abelian_by_cyclic({4, 2}, {{1, 2}, {0, 1}}, 2, "C4oD8"),
                                x(x(C2, C2), x(C2, C2))};
  for (auto& g : more)
    if (g.order() <= n) out.push_back(std::move(g));
  return out;
}

/// Isomorphism invariants: element order counts, centre and its involutions, commutator subgroup, subgroup count.
inline std::vector<std::size_t> group_fingerprint(const FiniteGroup& G) {
  const std::size_t n = G.order();
  std::vector<std::size_t> f(n + 1, 0);
  for (std::size_t a = 0; a < n; ++a) ++f[G.element_order(a)];
  std::size_t centre = 0, central_involutions = 0;
  for (std::size_t a = 0; a < n; ++a) {
    bool c = true;
    for (std::size_t b = 0; b < n && c; ++b) c = G.mul(a, b) == G.mul(b, a);
    centre += c;
    central_involutions += c && G.element_order(a) == 2;
  }
  std::vector<std::size_t> comm;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) comm.push_back(G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))));
  f.push_back(centre);
  f.push_back(central_involutions);
  f.push_back(G.closure(comm).size());
  f.push_back(G.subgroups().size());
  return f;
}

/// Rank-one lattice on which g acts by -1 exactly off the index-two subgroup H.
inline GammaModule sign_lattice(const FiniteGroup& G, const Subgroup& H) {
  std::vector<IntMatrix> act;
  for (std::size_t g = 0; g < G.order(); ++g)
    act.push_back(scalar(std::binary_search(H.begin(), H.end(), g) ? 1 : -1));
  return GammaModule::lattice(G, 1, std::move(act));
}

/// First subgroup of index two, if any.
inline std::optional<Subgroup> index_two_subgroup(const FiniteGroup& G) {
  for (const auto& H : G.subgroups())
    if (2 * H.size() == G.order()) return H;
  return std::nullopt;
}

struct NamedLattice {
  std::string label;
  GammaModule Y;
};

inline std::vector<NamedLattice> lattices() {
  return {{"split", split_gm()},
          {"split C2", split_gm(FiniteGroup::cyclic(2))},
          {"anisotropic", anisotropic_c2()},
          {"anisotropic rank 2", minus_identity_rank2()},
          {"Z[C2]", regular_c2()},
          {"C3 rotation", c3_rotation()},
          {"C4 rotation", c4_rotation()},
          {"S3 permutation", s3_permutation()}};
}

struct NamedPair {
  std::string label;
  OverlatticePair pair;
};

inline std::vector<NamedPair> overlattices() {
  std::vector<NamedPair> out;
  for (long long n : {1, 2, 3}) out.push_back({"split level " + std::to_string(n), OverlatticePair::level(split_gm(), n)});
  for (long long n : {1, 2, 3, 4})
    out.push_back({"anisotropic level " + std::to_string(n), OverlatticePair::level(anisotropic_c2(), n)});
  out.push_back({"Z[C2] level 2", OverlatticePair::level(regular_c2(), 2)});
  out.push_back({"anisotropic rank 2, half first coordinate",
                 OverlatticePair(minus_identity_rank2(), RatMatrix::from_rows({{Rational(1, 2), Rational(0)}, {Rational(0), Rational(1)}}))});
  out.push_back({"C3 rotation level 3", OverlatticePair::level(c3_rotation(), 3)});
  out.push_back({"C4 rotation level 2", OverlatticePair::level(c4_rotation(), 2)});
  out.push_back({"S3 permutation level 2", OverlatticePair::level(s3_permutation(), 2)});
  return out;
}

}  // namespace gerbecoh::testing
