#pragma once

// JSON instance documents. Needs nlohmann/json on the include path.

#include "gerbecoh/gerbecoh.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace gerbecoh {

using Json = nlohmann::ordered_json;

struct TowerSpec {
  std::string source, target;
  TowerSurjection tower;
};

struct ModuleSpec {
  std::string group;
  GammaModule module;
};

struct OverlatticeSpec {
  std::string lattice;
  OverlatticePair pair;
};

struct CandidateSpec {
  std::string overlattice;
  PermutationWitness witness;
};

/// A stored fault-injection run: a diagram, the instance it runs on, and the fault.
struct FaultSpec {
  std::string diagram;  // bgdiag, ridiag, bfd_tn, zz or bfdpd
  std::string target;   // name of the lattice, overlattice or finite module
  std::string arrow;    // perturbed arrow, or the dual arrow whose sign is dropped
  Integer delta = 1;
};

struct InstanceDocument {
  std::map<std::string, FiniteGroup> groups;
  std::map<std::string, TowerSpec> towers;
  std::map<std::string, ModuleSpec> lattices;
  std::map<std::string, OverlatticeSpec> overlattices;
  std::map<std::string, ModuleSpec> finite_modules;
  std::map<std::string, CandidateSpec> z_candidates;
  std::map<std::string, FaultSpec> faults;

  const FiniteGroup& group(const std::string& name) const { return lookup(groups, name, "group"); }
  const GammaModule& lattice(const std::string& name) const { return lookup(lattices, name, "lattice").module; }
  const OverlatticePair& overlattice(const std::string& name) const { return lookup(overlattices, name, "overlattice").pair; }
  const GammaModule& finite_module(const std::string& name) const { return lookup(finite_modules, name, "finite module").module; }
  const TowerSurjection& tower(const std::string& name) const { return lookup(towers, name, "tower").tower; }
  const FaultSpec& fault(const std::string& name) const { return lookup(faults, name, "fault"); }
  ZEmbeddingCandidate z_candidate(const std::string& name) const {
    const auto& c = lookup(z_candidates, name, "z-embedding candidate");
    return make_z_candidate(overlattice(c.overlattice), c.witness);
  }

  static InstanceDocument parse(const Json& j);
  static InstanceDocument parse_text(const std::string& text);
  static InstanceDocument load(const std::string& path);
  Json to_json() const;

 private:
  template <class M>
  static const typename M::mapped_type& lookup(const M& m, const std::string& name, const char* what) {
    auto it = m.find(name);
    if (it == m.end()) fail(ErrorKind::ParseError, std::string("no ") + what + " named '" + name + "'");
    return it->second;
  }
};

namespace detail {

/// Rethrows errors met while reading `path` as located parse errors.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError && std::string(e.what()).find(" at ") != std::string::npos) throw;
    fail(ErrorKind::ParseError, std::string(e.what()) + " at " + path);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string(e.what()) + " at " + path);
  }
}

inline Integer json_integer(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    Rational q = parse_rational(j.get<std::string>());
    if (!is_integral(q)) fail(ErrorKind::ParseError, "expected an integer, got " + j.get<std::string>());
    return numerator(q);
  }
  fail(ErrorKind::ParseError, "expected an integer");
}

inline Rational json_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  fail(ErrorKind::ParseError, "expected a rational \"p/q\"");
}

inline Json integer_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return Json(static_cast<long long>(v));
  return Json(v.str());
}

inline IntVector json_int_vector(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "expected an array of integers");
  IntVector v;
  for (const auto& x : j) v.push_back(json_integer(x));
  return v;
}

inline IntMatrix json_int_matrix(const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) fail(ErrorKind::ParseError, "expected " + std::to_string(rows) + " rows");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    IntVector r = json_int_vector(j[i]);
    if (r.size() != cols) fail(ErrorKind::ParseError, "row " + std::to_string(i) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = r[k];
  }
  return m;
}

inline Json int_vector_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(integer_json(x));
  return a;
}

inline Json int_matrix_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    IntVector r;
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    a.push_back(int_vector_json(r));
  }
  return a;
}

inline std::size_t json_index(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    fail(ErrorKind::ParseError, "expected a nonnegative index");
  return j.get<std::size_t>();
}

inline FiniteGroup json_group(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::ParseError, "group must be an object");
  if (j.contains("table")) {
    std::vector<std::vector<std::size_t>> t;
    for (const auto& row : j.at("table")) {
      std::vector<std::size_t> r;
      for (const auto& x : row) r.push_back(json_index(x));
      t.push_back(r);
    }
    return FiniteGroup::from_table(t);
  }
  if (j.contains("cyclic")) return FiniteGroup::cyclic(json_index(j.at("cyclic")));
  if (j.contains("symmetric")) return FiniteGroup::symmetric(json_index(j.at("symmetric")));
  if (j.contains("product")) {
    const Json& f = j.at("product");
    if (!f.is_array() || f.empty()) fail(ErrorKind::ParseError, "product needs a list of groups");
    FiniteGroup G = json_group(f[0]);
    for (std::size_t i = 1; i < f.size(); ++i) G = FiniteGroup::direct_product(G, json_group(f[i]));
    return G;
  }
  if (j.contains("permutations")) {
    std::vector<std::vector<std::size_t>> gens;
    for (const auto& g : j.at("permutations")) {
      std::vector<std::size_t> p;
      for (const auto& x : g) p.push_back(json_index(x));
      gens.push_back(p);
    }
    return FiniteGroup::from_permutations(gens);
  }
  fail(ErrorKind::ParseError, "group needs one of table, cyclic, symmetric, product, permutations");
}

inline Json group_json(const FiniteGroup& G) {
  Json t = Json::array();
  for (const auto& row : G.table()) t.push_back(row);
  return Json{{"table", t}};
}

/// Shared by lattices and finite modules: "actions" on every element or "generators".
inline GammaModule json_module(const Json& j, const FiniteGroup& G, bool lattice) {
  std::size_t r = json_index(j.at("rank"));
  Lattice rel = Lattice::zero(r);
  if (!lattice) {
    std::vector<IntVector> gens;
    for (const auto& v : j.at("relations")) {
      gens.push_back(json_int_vector(v));
      if (gens.back().size() != r) fail(ErrorKind::ParseError, "relation has the wrong length");
    }
    rel = gens.empty() ? Lattice::zero(r) : Lattice::span(gens, r);
  } else if (j.contains("relations")) {
    fail(ErrorKind::ParseError, "lattices carry no relations");
  }
  if (j.contains("actions")) {
    std::vector<IntMatrix> act;
    for (const auto& m : j.at("actions")) act.push_back(json_int_matrix(m, r, r));
    return GammaModule(G, r, rel, act);
  }
  std::map<std::size_t, IntMatrix> gens;
  if (j.contains("generators"))
    for (const auto& g : j.at("generators")) gens[json_index(g.at("element"))] = json_int_matrix(g.at("matrix"), r, r);
  return GammaModule::from_generators(G, r, rel, gens);
}

inline Json module_json(const ModuleSpec& m, bool lattice) {
  Json o;
  o["group"] = m.group;
  o["rank"] = m.module.rank();
  if (!lattice) {
    Json rel = Json::array();
    for (const auto& v : m.module.relations().generators()) rel.push_back(int_vector_json(v));
    o["relations"] = rel;
  }
  Json act = Json::array();
  for (const auto& a : m.module.actions()) act.push_back(int_matrix_json(a));
  o["actions"] = act;
  return o;
}

template <class F>
void each_member(const Json& j, const char* key, F&& f) {
  if (!j.contains(key)) return;
  const Json& obj = j.at(key);
  if (!obj.is_object()) fail(ErrorKind::ParseError, std::string(key) + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    std::string path = std::string(key) + "." + it.key();
    at_path(path, [&] { f(it.key(), it.value()); });
  }
}

inline const std::set<std::string>& fault_diagrams() {
  static const std::set<std::string> d{"bgdiag", "ridiag", "bfd_tn", "zz", "bfdpd"};
  return d;
}

}  // namespace detail

inline InstanceDocument InstanceDocument::parse(const Json& j) {
  using namespace detail;
  if (!j.is_object()) fail(ErrorKind::ParseError, "instance document must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::set<std::string> known{"groups", "towers", "lattices", "overlattices", "finiteModules", "zCandidates", "faults"};
    if (!known.count(it.key())) fail(ErrorKind::ParseError, "unknown section '" + it.key() + "'");
  }
  InstanceDocument d;
  each_member(j, "groups", [&](const std::string& name, const Json& v) { d.groups.emplace(name, json_group(v)); });
  each_member(j, "towers", [&](const std::string& name, const Json& v) {
    std::string s = v.at("source").get<std::string>(), t = v.at("target").get<std::string>();
    std::vector<std::size_t> map;
    for (const auto& x : v.at("map")) map.push_back(json_index(x));
    d.towers.emplace(name, TowerSpec{s, t, TowerSurjection(d.group(s), d.group(t), map)});
  });
  each_member(j, "lattices", [&](const std::string& name, const Json& v) {
    std::string g = v.at("group").get<std::string>();
    d.lattices.emplace(name, ModuleSpec{g, json_module(v, d.group(g), true)});
  });
  each_member(j, "overlattices", [&](const std::string& name, const Json& v) {
    std::string l = v.at("lattice").get<std::string>();
    const GammaModule& Y = d.lattice(l);
    const std::size_t r = Y.rank();
    RatMatrix E(r, r);
    if (v.contains("level")) {
      if (v.contains("basis")) fail(ErrorKind::ParseError, "give either level or basis");
      Integer n = json_integer(v.at("level"));
      if (n <= 0) fail(ErrorKind::ParseError, "level must be positive");
      for (std::size_t i = 0; i < r; ++i) E(i, i) = Rational(1, n);
    } else {
      const Json& b = v.at("basis");
      if (!b.is_array() || b.size() != r) fail(ErrorKind::ParseError, "basis needs " + std::to_string(r) + " rows");
      for (std::size_t i = 0; i < r; ++i) {
        if (!b[i].is_array() || b[i].size() != r) fail(ErrorKind::ParseError, "basis row has the wrong length");
        for (std::size_t k = 0; k < r; ++k) E(i, k) = json_rational(b[i][k]);
      }
    }
    d.overlattices.emplace(name, OverlatticeSpec{l, OverlatticePair(Y, E)});
  });
  each_member(j, "finiteModules", [&](const std::string& name, const Json& v) {
    std::string g = v.at("group").get<std::string>();
    GammaModule M = json_module(v, d.group(g), false);
    if (!M.is_finite()) fail(ErrorKind::InfiniteModule, "finite module has infinite underlying group");
    d.finite_modules.emplace(name, ModuleSpec{g, M});
  });
  each_member(j, "zCandidates", [&](const std::string& name, const Json& v) {
    CandidateSpec c{v.at("overlattice").get<std::string>(), {}};
    const OverlatticePair& p = d.overlattice(c.overlattice);
    for (const auto& b : v.at("witness").at("basis")) c.witness.basis.push_back(json_int_vector(b));
    for (const auto& perm : v.at("witness").at("permutations")) {
      std::vector<std::size_t> q;
      for (const auto& x : perm) q.push_back(json_index(x));
      c.witness.permutation.push_back(q);
    }
    verify_z_embedding(make_z_candidate(p, c.witness));  // structural witness errors
    d.z_candidates.emplace(name, c);
  });
  each_member(j, "faults", [&](const std::string& name, const Json& v) {
    FaultSpec f{v.at("diagram").get<std::string>(), v.at("target").get<std::string>(), v.at("arrow").get<std::string>(), 1};
    if (v.contains("delta")) f.delta = json_integer(v.at("delta"));
    if (!fault_diagrams().count(f.diagram)) fail(ErrorKind::ParseError, "unknown diagram '" + f.diagram + "'");
    if (f.diagram == "zz") d.finite_module(f.target);
    else if (f.diagram == "bgdiag") d.lattice(f.target);
    else d.overlattice(f.target);
    d.faults.emplace(name, f);
  });
  return d;
}

inline InstanceDocument InstanceDocument::parse_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::ParseError, e.what());
  }
  return parse(j);
}

inline InstanceDocument InstanceDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

inline Json InstanceDocument::to_json() const {
  using namespace detail;
  Json j = Json::object();
  Json g = Json::object();
  for (const auto& [name, G] : groups) g[name] = group_json(G);
  j["groups"] = g;
  Json t = Json::object();
  for (const auto& [name, s] : towers) t[name] = Json{{"source", s.source}, {"target", s.target}, {"map", s.tower.map()}};
  j["towers"] = t;
  Json l = Json::object();
  for (const auto& [name, m] : lattices) l[name] = module_json(m, true);
  j["lattices"] = l;
  Json o = Json::object();
  for (const auto& [name, s] : overlattices) {
    Json b = Json::array();
    const RatMatrix& E = s.pair.embedding();
    for (std::size_t i = 0; i < E.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t k = 0; k < E.cols(); ++k) row.push_back(to_string(E(i, k)));
      b.push_back(row);
    }
    o[name] = Json{{"lattice", s.lattice}, {"basis", b}};
  }
  j["overlattices"] = o;
  Json f = Json::object();
  for (const auto& [name, m] : finite_modules) f[name] = module_json(m, false);
  j["finiteModules"] = f;
  Json z = Json::object();
  for (const auto& [name, c] : z_candidates) {
    Json basis = Json::array();
    for (const auto& b : c.witness.basis) basis.push_back(int_vector_json(b));
    z[name] = Json{{"overlattice", c.overlattice}, {"witness", Json{{"basis", basis}, {"permutations", c.witness.permutation}}}};
  }
  j["zCandidates"] = z;
  Json fa = Json::object();
  for (const auto& [name, s] : faults)
    fa[name] = Json{{"diagram", s.diagram}, {"target", s.target}, {"arrow", s.arrow}, {"delta", integer_json(s.delta)}};
  j["faults"] = fa;
  return j;
}

}  // namespace gerbecoh
