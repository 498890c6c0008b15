#pragma once

#include "gerbecoh/abelian.hpp"
#include "gerbecoh/group.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gerbecoh {

/// Z^rank / relations with an action of a finite group. Relations = 0 is a Galois
/// lattice; a full-rank relation lattice is a finite Galois module.
class GammaModule {
 public:
  GammaModule() = default;

  GammaModule(FiniteGroup group, std::size_t rank, Lattice relations, std::vector<IntMatrix> action)
      : group_(std::move(group)), rank_(rank), relations_(std::move(relations)), action_(std::move(action)) {
    validate();
    quotient_ = Subquotient(Lattice::full(rank_), relations_);
  }

  static GammaModule lattice(FiniteGroup group, std::size_t rank, std::vector<IntMatrix> action) {
    return GammaModule(std::move(group), rank, Lattice::zero(rank), std::move(action));
  }
  static GammaModule trivial_action(FiniteGroup group, std::size_t rank, Lattice relations) {
    std::vector<IntMatrix> act(group.order(), IntMatrix::identity(rank));
    return GammaModule(std::move(group), rank, std::move(relations), std::move(act));
  }
  /// Z/n with the generator acting on the chosen group elements by the given scalar
  /// (the remaining elements are filled in multiplicatively).
  static GammaModule cyclic_module(FiniteGroup group, const Integer& n, const std::map<std::size_t, Integer>& scalars) {
    std::map<std::size_t, IntMatrix> gens;
    for (const auto& [g, s] : scalars) gens[g] = s * IntMatrix::identity(1);
    return from_generators(std::move(group), 1, Lattice::span(n * IntMatrix::identity(1)), gens);
  }

  /// Expands matrices given on some elements to the whole group by products.
  static GammaModule from_generators(FiniteGroup group, std::size_t rank, Lattice relations,
                                     const std::map<std::size_t, IntMatrix>& generators) {
    const std::size_t n = group.order();
    std::vector<std::optional<IntMatrix>> act(n);
    act[0] = IntMatrix::identity(rank);
    std::vector<std::size_t> queue{0};
    for (const auto& [g, m] : generators) {
      if (g >= n) fail(ErrorKind::NotAHomomorphism, "action given on an element outside the group");
      if (m.rows() != rank || m.cols() != rank) fail(ErrorKind::NotAHomomorphism, "action matrix has the wrong size");
    }
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto& [g, m] : generators) {
        std::size_t x = group.mul(g, queue[i]);
        IntMatrix v = m * *act[queue[i]];
        if (!act[x]) {
          act[x] = v;
          queue.push_back(x);
        } else if (!agrees(*act[x], v, relations)) {
          fail(ErrorKind::NotAHomomorphism, "action matrices are inconsistent at element " + std::to_string(x));
        }
      }
    if (queue.size() != n) fail(ErrorKind::NotAHomomorphism, "action generators do not generate the group");
    std::vector<IntMatrix> full;
    for (auto& a : act) full.push_back(*a);
    return GammaModule(std::move(group), rank, std::move(relations), std::move(full));
  }

  const FiniteGroup& group() const noexcept { return group_; }
  std::size_t rank() const noexcept { return rank_; }
  const Lattice& relations() const noexcept { return relations_; }
  const IntMatrix& action(std::size_t s) const { return action_[s]; }
  const std::vector<IntMatrix>& actions() const noexcept { return action_; }
  const Subquotient& as_group() const noexcept { return quotient_; }
  const AbelianPresentation& presentation() const noexcept { return quotient_.presentation(); }
  bool is_finite() const noexcept { return quotient_.is_finite(); }
  bool is_lattice() const noexcept { return relations_.rank() == 0; }
  Integer order() const { return quotient_.order(); }

  IntVector apply(std::size_t s, const IntVector& v) const { return action_[s] * v; }
  IntVector reduce(const IntVector& v) const { return quotient_.normal_form(v); }
  bool equal(const IntVector& a, const IntVector& b) const { return relations_.contains(a - b); }

  /// Same module with the action pulled back along a tower surjection.
  GammaModule inflate(const TowerSurjection& t) const {
    if (t.target() != group_) fail(ErrorKind::IncompatibleTower, "tower target is not the acting group");
    std::vector<IntMatrix> act;
    for (std::size_t s = 0; s < t.source().order(); ++s) act.push_back(action_[t(s)]);
    return GammaModule(t.source(), rank_, relations_, std::move(act));
  }

  /// Does the action on the source group factor through the tower?
  bool factors_through(const TowerSurjection& t) const {
    if (t.source() != group_) return false;
    for (std::size_t s = 0; s < group_.order(); ++s)
      if (!agrees(action_[s], action_[t.fiber(t(s)).front()], relations_)) return false;
    return true;
  }
  /// The descended module over the tower target.
  GammaModule descend(const TowerSurjection& t) const {
    if (!factors_through(t)) fail(ErrorKind::IncompatibleTower, "action does not factor through the tower");
    std::vector<IntMatrix> act;
    for (std::size_t s = 0; s < t.target().order(); ++s) act.push_back(action_[t.fiber(s).front()]);
    return GammaModule(t.target(), rank_, relations_, std::move(act));
  }

 private:
  static bool agrees(const IntMatrix& a, const IntMatrix& b, const Lattice& rel) {
    IntMatrix d = a - b;
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (!rel.contains(d.column(j))) return false;
    return true;
  }

  void validate() const {
    const std::size_t n = group_.order();
    if (action_.size() != n) fail(ErrorKind::NotAHomomorphism, "one action matrix per group element is required");
    if (relations_.dim() != rank_) fail(ErrorKind::InvalidArgument, "relation lattice has the wrong dimension");
    for (const auto& m : action_) {
      if (m.rows() != rank_ || m.cols() != rank_) fail(ErrorKind::NotAHomomorphism, "action matrix has the wrong size");
      if (!relations_.contains(relations_.image(m)))
        fail(ErrorKind::NotAHomomorphism, "action does not preserve the relations");
    }
    if (!agrees(action_[0], IntMatrix::identity(rank_), relations_))
      fail(ErrorKind::NotAHomomorphism, "identity does not act trivially");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (!agrees(action_[group_.mul(a, b)], action_[a] * action_[b], relations_))
          fail(ErrorKind::NotAHomomorphism,
               "action(" + std::to_string(a) + "*" + std::to_string(b) + ") != action(a) action(b)");
    if (relations_.rank() == 0)
      for (const auto& m : action_) {
        Integer det = determinant(m);
        if (det != 1 && det != -1) fail(ErrorKind::NotAHomomorphism, "lattice action matrix is not invertible");
      }
  }

  FiniteGroup group_;
  std::size_t rank_ = 0;
  Lattice relations_;
  std::vector<IntMatrix> action_;
  Subquotient quotient_;
};

/// Sum over the group of the action matrices.
inline IntMatrix norm_endomorphism(const GammaModule& M) {
  IntMatrix N(M.rank(), M.rank());
  for (const auto& a : M.actions()) N = N + a;
  return N;
}

/// IA = span{sigma a - a} + relations.
inline Lattice augmentation_lattice(const GammaModule& M) {
  std::vector<IntVector> gens;
  for (std::size_t s = 1; s < M.group().order(); ++s) {
    IntMatrix d = M.action(s) - IntMatrix::identity(M.rank());
    for (std::size_t j = 0; j < M.rank(); ++j) gens.push_back(d.column(j));
  }
  Lattice L = gens.empty() ? Lattice::zero(M.rank()) : Lattice::span(gens, M.rank());
  return L + M.relations();
}

/// Canonical generators of IY (Hermite basis of the augmentation lattice).
inline std::vector<IntVector> augmentation_submodule(const GammaModule& Y) {
  Lattice L = augmentation_lattice(Y);
  std::vector<IntVector> g = L.generators();
  std::sort(g.begin(), g.end());
  return g;
}

/// ker N as a lattice containing the relations.
inline Lattice norm_kernel(const GammaModule& M) { return Lattice::preimage(norm_endomorphism(M), M.relations()); }

/// Invariants {a : sigma a = a mod relations}.
inline Lattice invariant_lattice(const GammaModule& M) {
  Lattice inv = Lattice::full(M.rank());
  for (std::size_t s = 1; s < M.group().order(); ++s)
    inv = inv.intersection(Lattice::preimage(M.action(s) - IntMatrix::identity(M.rank()), M.relations()));
  return inv;
}

/// A Z-basis of a lattice permuted by the group.
struct PermutationWitness {
  std::vector<IntVector> basis;
  std::vector<std::vector<std::size_t>> permutation;  // permutation[s][i]: s * basis[i] = basis[permutation[s][i]]

  /// Exact check against a lattice of the same rank (relations ignored: must be a lattice).
  bool validates(const GammaModule& L) const {
    if (!L.is_lattice() || basis.size() != L.rank() || permutation.size() != L.group().order()) return false;
    for (const auto& b : basis)
      if (b.size() != L.rank()) return false;
    Integer det = determinant(IntMatrix::from_columns(basis, L.rank()));
    if (det != 1 && det != -1) return false;
    for (std::size_t s = 0; s < L.group().order(); ++s) {
      if (permutation[s].size() != basis.size()) return false;
      std::vector<std::size_t> sorted = permutation[s];
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != i) return false;
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (L.apply(s, basis[i]) != basis[permutation[s][i]]) return false;
    }
    return true;
  }
};

struct PermutationLattice {
  GammaModule lattice;
  PermutationWitness witness;
};

/// Z[G/H] with basis the left cosets.
inline PermutationLattice permutation_lattice(const FiniteGroup& G, const Subgroup& H) {
  auto c = G.left_cosets(H);
  const std::size_t k = c.cosets.size();
  PermutationWitness w;
  for (std::size_t i = 0; i < k; ++i) w.basis.push_back(unit_vector(k, i));
  std::vector<IntMatrix> act;
  for (std::size_t s = 0; s < G.order(); ++s) {
    IntMatrix m(k, k);
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = c.coset_of[G.mul(s, c.cosets[i].front())];
      m(j, i) = 1;
      perm[i] = j;
    }
    act.push_back(m);
    w.permutation.push_back(perm);
  }
  return {GammaModule::lattice(G, k, std::move(act)), std::move(w)};
}

/// Block sum of modules over one group.
inline GammaModule direct_sum(const GammaModule& A, const GammaModule& B) {
  if (A.group() != B.group()) fail(ErrorKind::IncompatibleData, "direct sum over different groups");
  const std::size_t a = A.rank(), b = B.rank();
  std::vector<IntMatrix> act;
  for (std::size_t s = 0; s < A.group().order(); ++s) {
    IntMatrix m(a + b, a + b);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < a; ++j) m(i, j) = A.action(s)(i, j);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) m(a + i, a + j) = B.action(s)(i, j);
    act.push_back(m);
  }
  std::vector<IntVector> rel;
  for (auto v : A.relations().generators()) {
    v.resize(a + b, 0);
    rel.push_back(v);
  }
  for (const auto& v : B.relations().generators()) {
    IntVector w(a, 0);
    w.insert(w.end(), v.begin(), v.end());
    rel.push_back(w);
  }
  Lattice R = rel.empty() ? Lattice::zero(a + b) : Lattice::span(rel, a + b);
  return GammaModule(A.group(), a + b, R, std::move(act));
}

inline PermutationWitness direct_sum(const PermutationWitness& A, std::size_t rank_a, const PermutationWitness& B,
                                     std::size_t rank_b) {
  PermutationWitness w;
  for (auto v : A.basis) {
    v.resize(rank_a + rank_b, 0);
    w.basis.push_back(v);
  }
  for (const auto& v : B.basis) {
    IntVector u(rank_a, 0);
    u.insert(u.end(), v.begin(), v.end());
    w.basis.push_back(u);
  }
  for (std::size_t s = 0; s < A.permutation.size(); ++s) {
    std::vector<std::size_t> p = A.permutation[s];
    for (auto j : B.permutation[s]) p.push_back(j + A.basis.size());
    w.permutation.push_back(p);
  }
  return w;
}

/// Y inside an overlattice Ybar of Y (x) Q. The columns of `embedding` are a basis of
/// Ybar written in the basis of Y.
class OverlatticePair {
 public:
  OverlatticePair() = default;
  OverlatticePair(GammaModule base, RatMatrix embedding) : base_(std::move(base)), embedding_(std::move(embedding)) {
    if (!base_.is_lattice()) fail(ErrorKind::InvalidArgument, "overlattice base must be a lattice");
    const std::size_t r = base_.rank();
    if (embedding_.rows() != r || embedding_.cols() != r)
      fail(ErrorKind::NotAnOverlattice, "embedding must be a square matrix of the base rank");
    auto inv = inverse(embedding_);
    if (!inv) fail(ErrorKind::NotAnOverlattice, "embedding is singular");
    auto inv_int = to_integer(*inv);
    if (!inv_int) fail(ErrorKind::NotAnOverlattice, "Y is not contained in Ybar");
    inclusion_ = *inv_int;
    std::vector<IntMatrix> bar;
    for (std::size_t s = 0; s < base_.group().order(); ++s) {
      auto m = to_integer(*inv * to_rational(base_.action(s)) * embedding_);
      if (!m) fail(ErrorKind::NotGammaStable, "Ybar is not stable under element " + std::to_string(s));
      bar.push_back(*m);
    }
    cover_ = GammaModule::lattice(base_.group(), r, std::move(bar));
  }

  /// Ybar = (1/n) Y.
  static OverlatticePair level(const GammaModule& Y, const Integer& n) {
    if (n <= 0) fail(ErrorKind::InvalidArgument, "level must be positive");
    RatMatrix E(Y.rank(), Y.rank());
    for (std::size_t i = 0; i < Y.rank(); ++i) E(i, i) = Rational(1, n);
    return OverlatticePair(Y, E);
  }

  const GammaModule& base() const noexcept { return base_; }
  const GammaModule& cover() const noexcept { return cover_; }
  const RatMatrix& embedding() const noexcept { return embedding_; }
  /// Y coordinates -> Ybar coordinates.
  const IntMatrix& inclusion() const noexcept { return inclusion_; }
  const FiniteGroup& group() const noexcept { return base_.group(); }
  std::size_t rank() const noexcept { return base_.rank(); }
  /// Y as a sublattice of Ybar (in Ybar coordinates).
  Lattice base_in_cover() const { return Lattice::span(inclusion_); }

  /// Ybar coordinates -> Y (x) Q coordinates.
  RatVector to_rational_coordinates(const IntVector& v) const { return embedding_ * to_rational(v); }
  /// Y (x) Q coordinates -> Ybar coordinates, when the vector lies in Ybar.
  std::optional<IntVector> from_rational_coordinates(const RatVector& q) const {
    return to_integer(*inverse(embedding_) * q);
  }

  OverlatticePair inflate(const TowerSurjection& t) const { return OverlatticePair(base_.inflate(t), embedding_); }

 private:
  GammaModule base_;
  RatMatrix embedding_;
  IntMatrix inclusion_;
  GammaModule cover_;
};

/// Ybar / Y in Ybar coordinates.
inline GammaModule overlattice_quotient(const OverlatticePair& p) {
  return GammaModule(p.group(), p.rank(), p.base_in_cover(), p.cover().actions());
}

/// Hom(A, Q/Z) in the canonical coordinates of A: a character chi takes
/// sum_i c_i e_i to sum_i chi_i c_i / d_i.
class PontryaginDual {
 public:
  explicit PontryaginDual(const GammaModule& A) : source_(A) {
    if (!A.is_finite()) fail(ErrorKind::InfiniteModule, "Pontryagin dual of an infinite module");
    const auto& P = A.presentation();
    const std::size_t k = P.torsion_rank();
    const auto& d = P.invariant_factors();
    IntMatrix rel(k, k);
    for (std::size_t i = 0; i < k; ++i) rel(i, i) = d[i];
    const FiniteGroup& G = A.group();
    std::vector<IntMatrix> act;
    for (std::size_t s = 0; s < G.order(); ++s) {
      IntMatrix M = P.to_canonical_matrix() * A.action(G.inv(s)) * P.from_canonical_matrix();
      IntMatrix N(k, k);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i) N(j, i) = M(i, j) * d[j] / d[i];
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i) N(j, i) = mod_floor(N(j, i), d[j]);
      act.push_back(N);
    }
    dual_ = GammaModule(G, k, Lattice::span(rel), std::move(act));
    form_ = RatMatrix(A.rank(), k);
    for (std::size_t a = 0; a < A.rank(); ++a)
      for (std::size_t i = 0; i < k; ++i) form_(a, i) = Rational(P.to_canonical_matrix()(i, a), d[i]);
  }

  const GammaModule& source() const noexcept { return source_; }
  const GammaModule& module() const noexcept { return dual_; }
  /// eval(a, chi) = a^T W chi mod 1, a in source ambient coordinates.
  const RatMatrix& form() const noexcept { return form_; }

  QZValue eval(const IntVector& a, const IntVector& chi) const {
    Rational v = 0;
    for (std::size_t i = 0; i < form_.rows(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < form_.cols(); ++j)
        if (chi[j] != 0) v += Rational(a[i] * chi[j]) * form_(i, j);
    }
    return QZValue(v);
  }

 private:
  GammaModule source_;
  GammaModule dual_;
  RatMatrix form_;
};

inline PontryaginDual pontryagin_dual(const GammaModule& A) { return PontryaginDual(A); }

/// Fiber product of two lattice maps into a common quotient Z^t / R:
/// {(a, b) : f a = g b mod R}, the character lattice of the push-out of
/// diagonalizable groups along Z -> G_1, Z -> G_2.
struct LatticePushout {
  Lattice characters;       // inside Z^{r1 + r2}
  IntMatrix projection1;    // r1 x (r1 + r2)
  IntMatrix projection2;    // r2 x (r1 + r2)
  Integer index1, index2;   // index of the projected images (0 if infinite)
  AbelianPresentation presentation;
};

inline LatticePushout lattice_pushout(const IntMatrix& f, const IntMatrix& g, const Lattice& relations) {
  if (f.rows() != g.rows() || f.rows() != relations.dim())
    fail(ErrorKind::IncompatibleData, "push-out maps must land in the same character group");
  const std::size_t r1 = f.cols(), r2 = g.cols();
  IntMatrix neg_g = Integer(-1) * g;
  LatticePushout out;
  out.characters = Lattice::preimage(f.hconcat(neg_g), relations);
  out.projection1 = IntMatrix(r1, r1 + r2);
  out.projection2 = IntMatrix(r2, r1 + r2);
  for (std::size_t i = 0; i < r1; ++i) out.projection1(i, i) = 1;
  for (std::size_t i = 0; i < r2; ++i) out.projection2(i, r1 + i) = 1;
  auto index = [](const Lattice& L) {
    Subquotient q(Lattice::full(L.dim()), L);
    return q.is_finite() ? q.order() : Integer(0);
  };
  out.index1 = index(out.characters.image(out.projection1));
  out.index2 = index(out.characters.image(out.projection2));
  out.presentation = Subquotient(out.characters, Lattice::zero(r1 + r2)).presentation();
  return out;
}

}  // namespace gerbecoh
