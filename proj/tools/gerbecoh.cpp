#include "gerbecoh/instance.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace gerbecoh;

namespace {

struct Output {
  Json json = Json::object();
  std::ostringstream text;
  int code = 0;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '[' && c != ']') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

IntVector parse_int_list(const std::string& s) {
  IntVector v;
  for (const auto& x : split_list(s)) {
    Rational q = parse_rational(x);
    if (!is_integral(q)) fail(ErrorKind::ParseError, "expected integers in '" + s + "'");
    v.push_back(numerator(q));
  }
  return v;
}

std::vector<QZValue> parse_qz_list(const std::string& s) {
  std::vector<QZValue> v;
  for (const auto& x : split_list(s)) v.emplace_back(parse_rational(x));
  return v;
}

std::string vec(const IntVector& v) { return to_string(v); }

Json group_summary(const Subquotient& S) {
  Json j;
  j["structure"] = S.describe();
  j["order"] = S.is_finite() ? Json(S.order().str()) : Json("infinite");
  j["invariantFactors"] = Json::array();
  for (const auto& d : S.invariant_factors()) j["invariantFactors"].push_back(detail::integer_json(d));
  j["freeRank"] = S.free_rank();
  return j;
}

std::string torsion_text(const Subquotient& S) { return S.is_trivial() ? "trivial" : S.describe(); }

/// Images of the canonical generators of `f.source`, in canonical coordinates of the target.
Json hom_table(const Homomorphism& f) {
  Json t = Json::array();
  for (const auto& g : f.source.generators()) t.push_back(Json{{"from", detail::int_vector_json(f.source.canonical(g))},
                                                             {"to", detail::int_vector_json(f.target.canonical(f.apply(g)))}});
  return t;
}

void print_table(std::ostream& os, const std::string& title, const Json& t) {
  os << title << ":\n";
  for (const auto& row : t) os << "  " << row.at("from").dump() << " -> " << row.at("to").dump() << "\n";
}

// ---------------------------------------------------------------------------

void cmd_tate(const InstanceDocument& doc, const std::string& name, int degree, Output& out) {
  GammaModule A = doc.finite_modules.count(name) ? doc.finite_module(name) : doc.lattice(name);
  CohomologySpace H = tate_group(A, degree);
  out.json = Json{{"command", "tate"}, {"module", name}, {"degree", degree}, {"group", group_summary(H.group())}};
  Json gens = Json::array();
  for (const auto& g : H.group().generators()) gens.push_back(detail::int_vector_json(g));
  out.json["generators"] = gens;
  out.text << "H^" << degree << "(" << name << ") = " << H.describe() << "\n";
  out.text << "order " << (H.group().is_finite() ? H.order().str() : "infinite") << "\n";
  for (const auto& g : H.group().generators()) out.text << "  generator " << vec(g) << "\n";
}

void cmd_bg(const InstanceDocument& doc, const std::string& name, Output& out) {
  const GammaModule& Y = doc.lattice(name);
  IsocrystalGroup B = isocrystal_bs(Y);
  out.json = Json{{"command", "bg"}, {"lattice", name}, {"bs", group_summary(B.coinvariants)},
                  {"torsion", group_summary(B.torsion)}};
  Json newton = Json::array();
  out.text << "B(S) = " << B.coinvariants.describe() << ": free rank " << B.coinvariants.free_rank() << ", torsion "
           << torsion_text(B.torsion) << "\n";
  out.text << "Newton map on the basis:\n";
  for (std::size_t i = 0; i < Y.rank(); ++i) {
    RatVector n = B.newton(unit_vector(Y.rank(), i));
    Json row = Json::array();
    for (const auto& q : n) row.push_back(to_string(q));
    newton.push_back(row);
    out.text << "  e" << i << " -> " << to_string(n) << "\n";
  }
  out.json["newton"] = newton;
}

void cmd_rigid(const InstanceDocument& doc, const std::string& name, const std::string& to, Output& out) {
  RigidH1 R = rigid_h1(doc.overlattice(name));
  out.json = Json{{"command", "rigid"},
                  {"overlattice", name},
                  {"h1", group_summary(R.group)},
                  {"h1Base", group_summary(R.h1_base)},
                  {"inflation", hom_table(R.inflation)},
                  {"restriction", hom_table(R.restriction)},
                  {"rowExact", R.row_exact}};
  out.text << "H^1(u -> W, Z -> S) = (Ybar/IY)_tor = " << R.group.describe() << "\n";
  out.text << "H^1(F, S) = " << R.h1_base.describe() << "\n";
  print_table(out.text, "inflation", out.json["inflation"]);
  print_table(out.text, "restriction", out.json["restriction"]);
  out.text << "row exact: " << (R.row_exact ? "yes" : "no") << "\n";
  if (!to.empty()) {
    RigidH1 T = rigid_h1(doc.overlattice(to));
    Homomorphism f = rigid_transition(R, T);
    out.json["transition"] = Json{{"to", to}, {"table", hom_table(f)}, {"injective", f.injective()}};
    print_table(out.text, "transition to " + to, out.json["transition"]["table"]);
    out.text << "transition injective: " << (f.injective() ? "yes" : "no") << "\n";
  }
}

void cmd_h1w(const InstanceDocument& doc, const std::string& name, Output& out) {
  H1WZ H = h1_w(doc.finite_module(name));
  out.json = Json{{"command", "h1w"},
                  {"module", name},
                  {"h1w", group_summary(H.quotient)},
                  {"hMinus2", group_summary(H.h_minus2.group())},
                  {"zMinus1", group_summary(H.z_minus1)},
                  {"hMinus1", group_summary(H.h_minus1.group())},
                  {"exact", H.exact()}};
  out.text << "H^1(W, Z) = C^-2/B^-2 = " << H.quotient.describe() << " (order " << H.order().str() << ")\n";
  out.text << "0 -> H^-2 = " << H.h_minus2.describe() << " -> C^-2/B^-2 -> Z^-1 = " << H.z_minus1.describe()
           << " -> H^-1 = " << H.h_minus1.describe() << " -> 0\n";
  out.text << "exact: " << (H.exact() ? "yes" : "no") << "\n";
}

void cmd_compare(const InstanceDocument& doc, const std::string& lattice, const std::string& vector,
                 const std::string& level, Output& out) {
  const GammaModule& Y = doc.lattice(lattice);
  IntVector y = parse_int_list(vector);
  if (y.size() != Y.rank()) fail(ErrorKind::ParseError, "vector needs " + std::to_string(Y.rank()) + " entries");
  out.json = Json{{"command", "compare"}, {"lattice", lattice}, {"vector", detail::int_vector_json(y)}, {"overlattice", level}};
  try {
    ComparisonClass c = comparison_map(Y, y, doc.overlattice(level));
    out.json["result"] = "class";
    out.json["canonical"] = detail::int_vector_json(c.canonical);
    out.json["representative"] = detail::int_vector_json(c.representative);
    bool zero = is_zero(c.canonical);
    out.json["zero"] = zero;
    out.text << "class " << (zero ? "0" : vec(c.canonical)) << " (representative " << vec(c.representative) << " in Ybar)\n";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotInLevel) throw;
    out.json["result"] = "NotInLevel";
    out.text << "NotInLevel\n";
  }
}

Json report_json(const CertificationReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json j{{"name", c.name}, {"status", std::string(to_string(c.status))}};
    if (!c.witness.empty()) j["witness"] = c.witness;
    cells.push_back(j);
  }
  return Json{{"diagram", r.diagram}, {"passed", r.passed()}, {"cells", cells}};
}

void print_report(std::ostream& os, const std::string& target, const CertificationReport& r) {
  os << r.diagram << " on " << target << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : r.cells) {
    os << "  " << to_string(c.status) << "  " << c.name;
    if (!c.witness.empty()) os << ": " << c.witness;
    os << "\n";
  }
}

CertificationReport run_diagram(const InstanceDocument& doc, const std::string& diagram, const std::string& target,
                                const std::string& arrow, const Integer& delta) {
  if (diagram == "bfdpd") return dual_diagram_bfdpd(doc.overlattice(target), SignFault{arrow}).report;
  DiagramId id = parse_diagram_id(diagram);
  DiagramFault fault{arrow, delta};
  if (id == DiagramId::ZZ && doc.finite_modules.count(target)) return verify_zz(doc.finite_module(target), fault);
  if (id == DiagramId::BG && doc.lattices.count(target)) return verify_bg(doc.lattice(target), fault);
  return verify_diagram(id, doc.overlattice(target), fault);
}

void cmd_verify(const InstanceDocument& doc, std::string diagram, std::vector<std::string> targets, std::string arrow,
                Integer delta, const std::string& fixture, Output& out) {
  if (!fixture.empty()) {
    const FaultSpec& f = doc.fault(fixture);
    diagram = f.diagram;
    targets = {f.target};
    arrow = f.arrow;
    delta = f.delta;
  }
  if (diagram.empty()) fail(ErrorKind::ParseError, "verify needs --diagram or --fixture");
  if (targets.empty()) fail(ErrorKind::ParseError, "verify needs at least one --target");
  Json reports = Json::array();
  bool all = true;
  for (const auto& t : targets) {
    CertificationReport r = run_diagram(doc, diagram, t, arrow, delta);
    all = all && r.passed();
    Json j = report_json(r);
    j["target"] = t;
    reports.push_back(j);
    print_report(out.text, t, r);
  }
  out.json = Json{{"command", "verify"}, {"diagram", diagram}, {"passed", all}, {"reports", reports}};
  if (!arrow.empty()) out.json["fault"] = Json{{"arrow", arrow}, {"delta", detail::integer_json(delta)}};
  out.code = all ? 0 : 1;
}

void cmd_pair(const InstanceDocument& doc, const std::string& overlattice, const std::string& module,
              const std::string& cls, const std::string& plus, const std::string& cocycle, Output& out) {
  IntVector c = parse_int_list(cls);
  QZValue v;
  out.json = Json{{"command", "pair"}};
  if (!overlattice.empty()) {
    if (plus.empty()) fail(ErrorKind::ParseError, "pair with --overlattice needs --plus");
    const OverlatticePair& p = doc.overlattice(overlattice);
    PlusPoint h{p, parse_qz_list(plus)};
    if (h.h.size() != p.rank()) fail(ErrorKind::ParseError, "--plus needs one value per Ybar basis vector");
    std::size_t n = p.group().order();
    v = change_of_rigidification(TateCochain(-2, n, p.rank(), c), h);
    out.json["overlattice"] = overlattice;
  } else {
    if (module.empty() || cocycle.empty()) fail(ErrorKind::ParseError, "pair needs --overlattice/--plus or --module/--cocycle");
    const GammaModule& A = doc.finite_module(module);
    PontryaginDual D(A);
    std::size_t n = A.group().order();
    v = pairing_h1w(D, TateCochain(-2, n, A.rank(), c), TateCochain(1, n, D.module().rank(), parse_int_list(cocycle)));
    out.json["module"] = module;
  }
  out.json["value"] = v.str();
  out.text << v.str() << "\n";
}

Json candidate_json(const ZEmbeddingCandidate& c) {
  Json subs = Json::array();
  for (const auto& H : c.summands) subs.push_back(H);
  return Json{{"coverRank", c.cover().rank()},
              {"summands", subs},
              {"surjection", detail::int_matrix_json(c.surjection)},
              {"yBasis", detail::int_matrix_json(c.pair.inclusion())}};
}

Json zreport_json(const ZEmbeddingReport& r) {
  return Json{{"inducedCokernel", r.induced_cokernel}, {"h1CokernelVanishes", r.h1_cokernel_vanishes},
              {"h1Bijective", r.h1_bijective}, {"level", r.level}, {"passed", r.passed()}};
}

void print_zreport(std::ostream& os, const ZEmbeddingReport& r) {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  os << "induced cokernel: " << yn(r.induced_cokernel) << "\n";
  os << "H^-1(Ybar) = 0: " << yn(r.h1_cokernel_vanishes) << " (order " << r.h1_cover_order.str() << ")\n";
  os << "H^-2(Ybar/Y) -> H^-1(Y) bijective: " << yn(r.h1_bijective) << " (orders " << r.h2_quotient_order.str() << ", "
     << r.h1_base_order.str() << ")\n";
  os << "level |Gamma| = " << r.level << "\n";
  os << (r.passed() ? "z-embedding" : "not a z-embedding") << "\n";
}

void cmd_zembed(const InstanceDocument& doc, const std::string& mode, const std::string& candidate,
                const std::string& module, const ZEmbeddingBounds& bounds, Output& out) {
  if (mode == "verify") {
    if (candidate.empty()) fail(ErrorKind::ParseError, "zembed verify needs --candidate");
    ZEmbeddingReport r = verify_z_embedding(doc.z_candidate(candidate));
    out.json = Json{{"command", "zembed"}, {"mode", "verify"}, {"candidate", candidate}, {"report", zreport_json(r)}};
    print_zreport(out.text, r);
    out.code = r.passed() ? 0 : 1;
    return;
  }
  if (mode != "search") fail(ErrorKind::ParseError, "zembed mode must be verify or search");
  if (module.empty()) fail(ErrorKind::ParseError, "zembed search needs --module");
  ZEmbeddingSearch s = search_z_embedding(doc.finite_module(module), bounds);
  out.json = Json{{"command", "zembed"}, {"mode", "search"}, {"module", module}, {"examined", s.examined},
                  {"bounds", Json{{"minSummands", bounds.min_summands}, {"maxSummands", bounds.max_summands},
                                  {"maxSubgroups", bounds.max_subgroups}}}};
  if (!s.found()) {
    out.json["result"] = "NotFound";
    out.text << "NotFound after " << s.examined << " candidates\n";
    return;
  }
  out.json["result"] = "found";
  out.json["candidate"] = candidate_json(*s.candidate);
  ZEmbeddingReport r = verify_z_embedding(*s.candidate);
  out.json["report"] = zreport_json(r);
  out.text << "found after " << s.examined << " candidates: Ybar = ";
  for (std::size_t i = 0; i < s.candidate->summands.size(); ++i)
  {
    out.text << (i ? " + " : "") << "Z[Gamma/{";
    for (std::size_t k = 0; k < s.candidate->summands[i].size(); ++k) out.text << (k ? "," : "") << s.candidate->summands[i][k];
    out.text << "}]";
  }
  out.text << "\nsurjection onto A: " << detail::int_matrix_json(s.candidate->surjection).dump() << "\n";
  out.text << "Y basis in Ybar: " << detail::int_matrix_json(s.candidate->pair.inclusion()).dump() << "\n";
  print_zreport(out.text, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gerbecoh: Tate cohomology, rigid H^1 and duality for tori at finite level"};
  app.require_subcommand(1);
  std::string instance;
  bool json = false;
  auto common = [&](CLI::App* c) {
    c->add_option("--instance", instance, "instance file (JSON)")->required()->check(CLI::ExistingFile);
    c->add_flag("--json", json, "emit JSON");
  };

  std::string name, to, vector, level, diagram, arrow, fixture, overlattice, module, cls, plus, cocycle, candidate, mode;
  std::vector<std::string> targets;
  int degree = -2;
  long long delta = 1;
  ZEmbeddingBounds bounds;

  auto* tate = app.add_subcommand("tate", "Tate cohomology of a module or lattice");
  common(tate);
  tate->add_option("--module", name, "finite module or lattice")->required();
  tate->add_option("--degree", degree, "degree in [-3, 3]")->required();

  auto* bg = app.add_subcommand("bg", "B(S) and the Newton map");
  common(bg);
  bg->add_option("--lattice", name)->required();

  auto* rigid = app.add_subcommand("rigid", "H^1(u -> W, Z -> S) at one level");
  common(rigid);
  rigid->add_option("--overlattice", name)->required();
  rigid->add_option("--to", to, "another level to map into");

  auto* h1w = app.add_subcommand("h1w", "H^1(W, Z) for a finite module");
  common(h1w);
  h1w->add_option("--module", name)->required();

  auto* compare = app.add_subcommand("compare", "comparison class of y at a level");
  common(compare);
  compare->add_option("--lattice", name)->required();
  compare->add_option("--vector", vector, "comma separated coordinates")->required();
  compare->add_option("--overlattice", level)->required();

  auto* verify = app.add_subcommand("verify", "certify a diagram");
  common(verify);
  verify->add_option("--diagram", diagram, "bgdiag, ridiag, bfd_tn, zz or bfdpd");
  verify->add_option("--target", targets, "instance names");
  verify->add_option("--fault", arrow, "arrow to perturb (for bfdpd: dual arrow whose sign is dropped)");
  verify->add_option("--delta", delta, "perturbation size");
  verify->add_option("--fixture", fixture, "stored fault fixture");

  auto* pair = app.add_subcommand("pair", "Q/Z-valued pairing of a degree -2 class with a cocycle or a PlusPoint");
  common(pair);
  pair->add_option("--overlattice", overlattice);
  pair->add_option("--module", module);
  pair->add_option("--class", cls, "degree -2 cochain data")->required();
  pair->add_option("--plus", plus, "values p/q of h on the Ybar basis");
  pair->add_option("--cocycle", cocycle, "degree 1 cochain of the dual module");

  auto* zembed = app.add_subcommand("zembed", "verify or search z-embeddings");
  common(zembed);
  zembed->add_option("mode", mode, "verify or search")->required();
  zembed->add_option("--candidate", candidate);
  zembed->add_option("--module", module);
  zembed->add_option("--min-summands", bounds.min_summands);
  zembed->add_option("--max-summands", bounds.max_summands);
  zembed->add_option("--max-subgroups", bounds.max_subgroups);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Output out;
  try {
    InstanceDocument doc = InstanceDocument::load(instance);
    if (tate->parsed()) cmd_tate(doc, name, degree, out);
    else if (bg->parsed()) cmd_bg(doc, name, out);
    else if (rigid->parsed()) cmd_rigid(doc, name, to, out);
    else if (h1w->parsed()) cmd_h1w(doc, name, out);
    else if (compare->parsed()) cmd_compare(doc, name, vector, level, out);
    else if (verify->parsed()) cmd_verify(doc, diagram, targets, arrow, Integer(delta), fixture, out);
    else if (pair->parsed()) cmd_pair(doc, overlattice, module, cls, plus, cocycle, out);
    else if (zembed->parsed()) cmd_zembed(doc, mode, candidate, module, bounds, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (json) std::cout << out.json.dump(2) << "\n";
  else std::cout << out.text.str();
  return out.code;
}
