#pragma once

#include "gerbecoh/tate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gerbecoh {

/// Z -> T with Y = X_*(T) inside Ybar = X_*(T/Z). Ybar carries a permutation witness and a
/// surjection onto A = Ybar / Y, so that two candidates for the same A can be compared.
struct ZEmbeddingCandidate {
  OverlatticePair pair;
  PermutationWitness witness;
  GammaModule module;    // A
  IntMatrix surjection;  // A.rank x Ybar.rank, kernel Y
  std::vector<Subgroup> summands;  // Ybar = sum_i Z[Gamma / H_i] when found by search

  const GammaModule& cover() const { return pair.cover(); }
};

namespace detail {

inline void require_candidate(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::MalformedCandidate, what);
}

}  // namespace detail

/// The candidate with Y = ker(surjection : Ybar -> A).
inline ZEmbeddingCandidate make_z_candidate(const GammaModule& cover, PermutationWitness witness, const GammaModule& A,
                                            const IntMatrix& surjection) {
  detail::require_candidate(cover.is_lattice(), "Ybar must be a lattice");
  detail::require_candidate(A.is_finite(), "A must be finite");
  detail::require_candidate(A.group() == cover.group(), "Ybar and A are over different groups");
  const std::size_t r = cover.rank();
  detail::require_candidate(surjection.rows() == A.rank() && surjection.cols() == r, "surjection has the wrong shape");
  for (std::size_t s = 0; s < cover.group().order(); ++s) {
    IntMatrix diff = surjection * cover.action(s) - A.action(s) * surjection;
    for (std::size_t j = 0; j < r; ++j)
      detail::require_candidate(A.relations().contains(diff.column(j)), "surjection is not equivariant");
  }
  Lattice image = (r ? Lattice::span(surjection) : Lattice::zero(A.rank())) + A.relations();
  detail::require_candidate(image == Lattice::full(A.rank()), "map onto A is not surjective");

  IntMatrix K = Lattice::preimage(surjection, A.relations()).basis();  // Y in Ybar coordinates
  RatMatrix E = *inverse(to_rational(K));
  std::vector<IntMatrix> act;
  for (std::size_t s = 0; s < cover.group().order(); ++s) act.push_back(*to_integer(E * to_rational(cover.action(s) * K)));
  GammaModule Y = GammaModule::lattice(cover.group(), r, std::move(act));
  return ZEmbeddingCandidate{OverlatticePair(Y, E), std::move(witness), A, surjection, {}};
}

/// A candidate from an overlattice pair, with A = Ybar / Y.
inline ZEmbeddingCandidate make_z_candidate(const OverlatticePair& p, PermutationWitness witness) {
  return ZEmbeddingCandidate{p, std::move(witness), overlattice_quotient(p), IntMatrix::identity(p.rank()), {}};
}

struct ZEmbeddingReport {
  bool induced_cokernel = false;        // the witness permutes a basis of Ybar
  bool h1_cokernel_vanishes = false;    // H^-1(Gamma, Ybar) = 0
  bool h1_bijective = false;            // H^-2(Ybar / Y) -> H^-1(Y) bijective
  std::size_t level = 1;                // |Gamma| of the level used
  Integer h2_quotient_order = 1, h1_base_order = 1, h1_cover_order = 1;

  bool passed() const { return induced_cokernel && h1_cokernel_vanishes && h1_bijective; }
  /// Conditions without inducedness.
  bool pseudo_passed() const { return h1_cokernel_vanishes && h1_bijective; }
};

inline ZEmbeddingReport verify_z_embedding(const ZEmbeddingCandidate& c) {
  const GammaModule& bar = c.cover();
  const std::size_t r = bar.rank();
  detail::require_candidate(c.witness.basis.size() == r, "witness must list rank-many basis vectors");
  detail::require_candidate(c.witness.permutation.size() == bar.group().order(), "witness needs one permutation per element");
  for (const auto& b : c.witness.basis) detail::require_candidate(b.size() == r, "witness vector has the wrong length");
  Integer det = determinant(IntMatrix::from_columns(c.witness.basis, r));
  detail::require_candidate(det == 1 || det == -1, "witness vectors are not a basis of Ybar");

  ZEmbeddingReport rep;
  rep.level = bar.group().order();
  rep.induced_cokernel = c.witness.validates(bar);
  CohomologySpace h1bar = tate_group(bar, -1);
  rep.h1_cover_order = h1bar.order();
  rep.h1_cokernel_vanishes = h1bar.group().is_trivial();

  ShortExactSequence ses = ShortExactSequence::from_overlattice(c.pair);
  CohomologySpace H2 = tate_group(ses.quot, -2), H1 = tate_group(ses.sub, -1);
  rep.h2_quotient_order = H2.order();
  rep.h1_base_order = H1.order();
  rep.h1_bijective = table_is_bijective(H2.presentation(), H1.presentation(), connecting_neg2_table(ses));
  return rep;
}

struct ZEmbeddingBounds {
  std::size_t min_summands = 1;
  std::size_t max_summands = 3;
  std::size_t max_subgroups = 0;  // leading conjugacy-class representatives used; 0 for all
};

struct ZEmbeddingSearch {
  std::optional<ZEmbeddingCandidate> candidate;  // empty: NotFound
  std::size_t examined = 0;                      // candidates run through verify
  bool found() const { return candidate.has_value(); }
};

namespace detail {

/// Elements of A fixed by H, in the canonical enumeration order.
inline std::vector<IntVector> fixed_elements(const GammaModule& A, const Subgroup& H) {
  std::vector<IntVector> out;
  for (const auto& a : A.as_group().elements()) {
    bool fixed = true;
    for (auto h : H) fixed = fixed && A.as_group().equal(A.apply(h, a), a);
    if (fixed) out.push_back(a);
  }
  return out;
}

}  // namespace detail

/// First passing candidate Ybar = sum Z[Gamma/H_i] -> A, over nondecreasing tuples of subgroup
/// classes (fewer summands first) and then images of the basis cosets, lexicographically.
inline ZEmbeddingSearch search_z_embedding(const GammaModule& A, const ZEmbeddingBounds& bounds = {}) {
  if (!A.is_finite()) fail(ErrorKind::InfiniteModule, "z-embedding search needs a finite module");
  const FiniteGroup& G = A.group();
  std::vector<Subgroup> subs = G.conjugacy_class_representatives();
  if (bounds.max_subgroups && subs.size() > bounds.max_subgroups) subs.resize(bounds.max_subgroups);
  std::vector<PermutationLattice> perm;
  std::vector<FiniteGroup::Cosets> cosets;
  std::vector<std::vector<IntVector>> fixed;
  for (const auto& H : subs) {
    perm.push_back(permutation_lattice(G, H));
    cosets.push_back(G.left_cosets(H));
    fixed.push_back(detail::fixed_elements(A, H));
  }

  ZEmbeddingSearch out;
  for (std::size_t k = std::max<std::size_t>(bounds.min_summands, 1); k <= bounds.max_summands; ++k) {
    std::vector<std::size_t> tuple(k, 0);
    while (true) {
      GammaModule bar = perm[tuple[0]].lattice;
      PermutationWitness w = perm[tuple[0]].witness;
      for (std::size_t i = 1; i < k; ++i) {
        w = direct_sum(w, bar.rank(), perm[tuple[i]].witness, perm[tuple[i]].lattice.rank());
        bar = direct_sum(bar, perm[tuple[i]].lattice);
      }
      std::vector<std::size_t> choice(k, 0);
      while (true) {
        IntMatrix pi(A.rank(), bar.rank());
        std::size_t col = 0;
        for (std::size_t i = 0; i < k; ++i) {
          const IntVector& a = fixed[tuple[i]][choice[i]];
          for (const auto& coset : cosets[tuple[i]].cosets) {
            IntVector v = A.as_group().normal_form(A.apply(coset.front(), a));
            for (std::size_t j = 0; j < A.rank(); ++j) pi(j, col) = v[j];
            ++col;
          }
        }
        Lattice image = Lattice::span(pi) + A.relations();
        if (image == Lattice::full(A.rank())) {
          ZEmbeddingCandidate c = make_z_candidate(bar, w, A, pi);
          for (auto t : tuple) c.summands.push_back(subs[t]);
          ++out.examined;
          if (verify_z_embedding(c).passed()) {
            out.candidate = std::move(c);
            return out;
          }
        }
        std::size_t i = k;
        while (i > 0 && choice[i - 1] + 1 == fixed[tuple[i - 1]].size()) choice[--i] = 0;
        if (i == 0) break;
        ++choice[i - 1];
      }
      std::size_t i = k;
      while (i > 0 && tuple[i - 1] + 1 == subs.size()) --i;
      if (i == 0) break;
      ++tuple[i - 1];
      for (std::size_t j = i; j < k; ++j) tuple[j] = tuple[i - 1];
    }
  }
  return out;
}

struct ZRefinement {
  ZEmbeddingCandidate candidate;
  IntMatrix inclusion1, inclusion2;  // Y_i -> Y_3 in lattice coordinates
  ZEmbeddingReport report;
};

/// The push-out of T_1 <- Z -> T_2: Ybar_3 = Ybar_1 + Ybar_2 and Y_3 = {(v, w) : pi_1 v + pi_2 w = 0}.
inline ZRefinement refine_embeddings(const ZEmbeddingCandidate& c1, const ZEmbeddingCandidate& c2) {
  const GammaModule &A = c1.module, &B = c2.module;
  if (A.group() != B.group() || A.rank() != B.rank() || A.relations() != B.relations() || A.actions() != B.actions())
    fail(ErrorKind::MismatchedZ, "candidates embed different Z");
  if (!verify_z_embedding(c1).pseudo_passed() || !verify_z_embedding(c2).pseudo_passed())
    fail(ErrorKind::MalformedCandidate, "refinement needs verified candidates");
  const std::size_t r1 = c1.cover().rank(), r2 = c2.cover().rank();
  GammaModule bar = direct_sum(c1.cover(), c2.cover());
  PermutationWitness w = direct_sum(c1.witness, r1, c2.witness, r2);
  IntMatrix pi = c1.surjection.hconcat(c2.surjection);
  ZRefinement out{make_z_candidate(bar, w, A, pi), {}, {}, {}};

  // Y_i -> Y_3: the Ybar-inclusion read in the lattice bases
  const IntMatrix& K3 = out.candidate.pair.inclusion();
  RatMatrix K3inv = *inverse(to_rational(K3));
  auto lattice_map = [&](const ZEmbeddingCandidate& c, std::size_t offset) {
    IntMatrix J(r1 + r2, c.cover().rank());
    for (std::size_t i = 0; i < c.cover().rank(); ++i) J(offset + i, i) = 1;
    auto M = to_integer(K3inv * to_rational(J * c.pair.inclusion()));
    if (!M) fail(ErrorKind::MalformedCandidate, "Y does not land in the refinement");
    return *M;
  };
  out.inclusion1 = lattice_map(c1, 0);
  out.inclusion2 = lattice_map(c2, r1);
  out.report = verify_z_embedding(out.candidate);
  return out;
}

/// The same candidate read at a level Gamma' -> Gamma.
inline ZEmbeddingCandidate inflate_candidate(const ZEmbeddingCandidate& c, const TowerSurjection& t) {
  if (t.target() != c.cover().group()) fail(ErrorKind::IncompatibleTower, "tower does not end at the candidate level");
  PermutationWitness w{c.witness.basis, {}};
  for (std::size_t s = 0; s < t.source().order(); ++s) w.permutation.push_back(c.witness.permutation[t(s)]);
  return make_z_candidate(c.cover().inflate(t), w, c.module.inflate(t), c.surjection);
}

}  // namespace gerbecoh
