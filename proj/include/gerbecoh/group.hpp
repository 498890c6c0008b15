#pragma once

#include "gerbecoh/integer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gerbecoh {

using Subgroup = std::vector<std::size_t>;  // sorted element indices

/// Finite group given by its multiplication table; element 0 is the identity.
class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(trivial()) {}

  static FiniteGroup from_table(std::vector<std::vector<std::size_t>> table, std::string name = "") {
    const std::size_t n = table.size();
    if (n == 0) fail(ErrorKind::NotAGroup, "empty multiplication table");
    for (const auto& row : table) {
      if (row.size() != n) fail(ErrorKind::NotAGroup, "multiplication table is not square");
      for (auto v : row)
        if (v >= n) fail(ErrorKind::NotAGroup, "table entry out of range");
    }
    for (std::size_t a = 0; a < n; ++a)
      if (table[0][a] != a || table[a][0] != a) fail(ErrorKind::NotAGroup, "element 0 is not the identity");
    std::vector<std::size_t> inv(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b)
        if (table[a][b] == 0) {
          inv[a] = b;
          break;
        }
      if (inv[a] == n || table[inv[a]][a] != 0) fail(ErrorKind::NotAGroup, "element " + std::to_string(a) + " has no inverse");
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table[table[a][b]][c] != table[a][table[b][c]])
            fail(ErrorKind::NotAGroup, "multiplication is not associative at (" + std::to_string(a) + "," +
                                           std::to_string(b) + "," + std::to_string(c) + ")");
    FiniteGroup g(0);
    g.mul_ = std::move(table);
    g.inv_ = std::move(inv);
    g.name_ = name.empty() ? "G" + std::to_string(n) : std::move(name);
    return g;
  }

  static FiniteGroup trivial() { return cyclic(1); }

  static FiniteGroup cyclic(std::size_t n) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "cyclic group of order 0");
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return from_table(std::move(t), "C" + std::to_string(n));
  }

  /// Element (a, b) has index a * |H| + b.
  static FiniteGroup direct_product(const FiniteGroup& G, const FiniteGroup& H) {
    const std::size_t n = G.order(), m = H.order();
    std::vector<std::vector<std::size_t>> t(n * m, std::vector<std::size_t>(n * m));
    for (std::size_t a = 0; a < n * m; ++a)
      for (std::size_t b = 0; b < n * m; ++b) t[a][b] = G.mul(a / m, b / m) * m + H.mul(a % m, b % m);
    return from_table(std::move(t), G.name() + "x" + H.name());
  }

  /// Closure of the given permutations (images of 0..k-1) in breadth-first order.
  /// Composition is (p*q)(x) = p(q(x)).
  static FiniteGroup from_permutations(const std::vector<std::vector<std::size_t>>& generators, std::string name = "",
                                       std::vector<std::vector<std::size_t>>* elements_out = nullptr) {
    const std::size_t k = generators.empty() ? 0 : generators.front().size();
    std::vector<std::size_t> id(k);
    for (std::size_t i = 0; i < k; ++i) id[i] = i;
    auto compose = [&](const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
      std::vector<std::size_t> r(k);
      for (std::size_t i = 0; i < k; ++i) r[i] = p[q[i]];
      return r;
    };
    for (const auto& g : generators) {
      std::vector<std::size_t> s = g;
      std::sort(s.begin(), s.end());
      if (g.size() != k || s != id) fail(ErrorKind::NotAGroup, "generator is not a permutation");
    }
    std::vector<std::vector<std::size_t>> elems{id};
    std::map<std::vector<std::size_t>, std::size_t> index{{id, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (const auto& g : generators) {
        auto p = compose(g, elems[i]);
        if (index.emplace(p, elems.size()).second) elems.push_back(p);
      }
    const std::size_t n = elems.size();
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
    if (elements_out) *elements_out = elems;
    return from_table(std::move(t), std::move(name));
  }

  /// S_n acting on {0..n-1}; generated by a transposition and an n-cycle.
  static FiniteGroup symmetric(std::size_t n, std::vector<std::vector<std::size_t>>* elements_out = nullptr) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "symmetric group on 0 letters");
    if (n == 1) return trivial();
    std::vector<std::size_t> swap(n), cycle(n);
    for (std::size_t i = 0; i < n; ++i) {
      swap[i] = i;
      cycle[i] = (i + 1) % n;
    }
    std::swap(swap[0], swap[1]);
    return from_permutations({swap, cycle}, "S" + std::to_string(n), elements_out);
  }

  std::size_t order() const noexcept { return mul_.size(); }
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::vector<std::size_t>>& table() const noexcept { return mul_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a][b]; }
  std::size_t inv(std::size_t a) const { return inv_[a]; }
  std::size_t identity() const noexcept { return 0; }

  std::size_t element_order(std::size_t a) const {
    std::size_t k = 1;
    for (std::size_t x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }
  bool is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a)
      for (std::size_t b = 0; b < order(); ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  bool is_subgroup(const std::vector<std::size_t>& s) const {
    std::set<std::size_t> set(s.begin(), s.end());
    if (set.empty() || !set.count(0)) return false;
    for (auto a : set) {
      if (a >= order()) return false;
      for (auto b : set)
        if (!set.count(mul(a, inv(b)))) return false;
    }
    return true;
  }

  /// Subgroup generated by the given elements.
  Subgroup closure(const std::vector<std::size_t>& gens) const {
    std::vector<bool> in(order(), false);
    std::vector<std::size_t> out{0};
    in[0] = true;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (auto g : gens) {
        std::size_t x = mul(out[i], g);
        if (!in[x]) {
          in[x] = true;
          out.push_back(x);
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// All subgroups ordered by (order, sorted element list); trivial first, whole group last.
  std::vector<Subgroup> subgroups() const {
    std::set<Subgroup> found{Subgroup{0}};
    std::vector<Subgroup> queue{Subgroup{0}};
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (std::size_t g = 0; g < order(); ++g) {
        if (std::binary_search(queue[i].begin(), queue[i].end(), g)) continue;
        std::vector<std::size_t> gens = queue[i];
        gens.push_back(g);
        Subgroup h = closure(gens);
        if (found.insert(h).second) queue.push_back(h);
      }
    std::vector<Subgroup> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), subgroup_less);
    return out;
  }

  Subgroup conjugate(const Subgroup& H, std::size_t g) const {
    Subgroup out;
    for (auto h : H) out.push_back(mul(mul(g, h), inv(g)));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// One subgroup per conjugacy class, each the least member of its class.
  std::vector<Subgroup> conjugacy_class_representatives() const {
    std::vector<Subgroup> out;
    std::set<Subgroup> seen;
    for (const auto& H : subgroups()) {
      if (seen.count(H)) continue;
      for (std::size_t g = 0; g < order(); ++g) seen.insert(conjugate(H, g));
      out.push_back(H);
    }
    return out;
  }

  /// Left cosets gH, ordered by their least element; coset_of[g] is the index of gH.
  struct Cosets {
    std::vector<Subgroup> cosets;
    std::vector<std::size_t> coset_of;
  };
  Cosets left_cosets(const Subgroup& H) const {
    if (!is_subgroup(H)) fail(ErrorKind::NotASubgroup, "not a subgroup");
    Cosets c{{}, std::vector<std::size_t>(order(), order())};
    for (std::size_t g = 0; g < order(); ++g) {
      if (c.coset_of[g] != order()) continue;
      Subgroup coset;
      for (auto h : H) coset.push_back(mul(g, h));
      std::sort(coset.begin(), coset.end());
      for (auto x : coset) c.coset_of[x] = c.cosets.size();
      c.cosets.push_back(std::move(coset));
    }
    return c;
  }

  bool operator==(const FiniteGroup& o) const { return mul_ == o.mul_; }
  bool operator!=(const FiniteGroup& o) const { return !(*this == o); }

  static bool subgroup_less(const Subgroup& a, const Subgroup& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }

 private:
  explicit FiniteGroup(int) {}

  std::vector<std::vector<std::size_t>> mul_;
  std::vector<std::size_t> inv_;
  std::string name_;
};

/// Surjective homomorphism source -> target between finite Galois-group levels.
class TowerSurjection {
 public:
  TowerSurjection(FiniteGroup source, FiniteGroup target, std::vector<std::size_t> map)
      : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
    if (map_.size() != source_.order()) fail(ErrorKind::IncompatibleTower, "tower map has the wrong length");
    std::vector<bool> hit(target_.order(), false);
    for (auto v : map_) {
      if (v >= target_.order()) fail(ErrorKind::IncompatibleTower, "tower map value out of range");
      hit[v] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end())
      fail(ErrorKind::IncompatibleTower, "tower map is not surjective");
    for (std::size_t a = 0; a < source_.order(); ++a)
      for (std::size_t b = 0; b < source_.order(); ++b)
        if (map_[source_.mul(a, b)] != target_.mul(map_[a], map_[b]))
          fail(ErrorKind::IncompatibleTower, "tower map is not a homomorphism");
  }

  static TowerSurjection identity(const FiniteGroup& G) {
    std::vector<std::size_t> m(G.order());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
    return TowerSurjection(G, G, m);
  }
  /// C_n -> C_m, k -> k mod m.
  static TowerSurjection cyclic(std::size_t n, std::size_t m) {
    if (m == 0 || n % m != 0) fail(ErrorKind::IncompatibleTower, "C" + std::to_string(m) + " is not a quotient of C" + std::to_string(n));
    std::vector<std::size_t> map(n);
    for (std::size_t k = 0; k < n; ++k) map[k] = k % m;
    return TowerSurjection(FiniteGroup::cyclic(n), FiniteGroup::cyclic(m), map);
  }
  /// Any group onto the trivial group.
  static TowerSurjection to_trivial(const FiniteGroup& G) {
    return TowerSurjection(G, FiniteGroup::trivial(), std::vector<std::size_t>(G.order(), 0));
  }

  const FiniteGroup& source() const noexcept { return source_; }
  const FiniteGroup& target() const noexcept { return target_; }
  std::size_t operator()(std::size_t s) const { return map_[s]; }
  const std::vector<std::size_t>& map() const noexcept { return map_; }
  std::vector<std::size_t> fiber(std::size_t t) const {
    std::vector<std::size_t> f;
    for (std::size_t s = 0; s < map_.size(); ++s)
      if (map_[s] == t) f.push_back(s);
    return f;
  }
  std::size_t kernel_order() const { return source_.order() / target_.order(); }

 private:
  FiniteGroup source_, target_;
  std::vector<std::size_t> map_;
};

/// Sign homomorphism S_n -> C_2 for a group built by FiniteGroup::symmetric.
inline TowerSurjection sign_tower(std::size_t n) {
  std::vector<std::vector<std::size_t>> perms;
  FiniteGroup S = FiniteGroup::symmetric(n, &perms);
  std::vector<std::size_t> map;
  for (const auto& p : perms) {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
    map.push_back(inversions % 2);
  }
  return TowerSurjection(S, FiniteGroup::cyclic(2), map);
}

}  // namespace gerbecoh
