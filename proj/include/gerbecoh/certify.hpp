#pragma once

#include "gerbecoh/abelian.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gerbecoh {

enum class CellStatus { Pass, Fail, Skipped };

inline std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Pass: return "pass";
    case CellStatus::Fail: return "FAIL";
    case CellStatus::Skipped: return "skipped";
  }
  return "?";
}

struct CellResult {
  std::string name;
  CellStatus status = CellStatus::Pass;
  std::string witness;  // empty unless failed or skipped
  std::vector<std::string> arrows;
};

struct CertificationReport {
  std::string diagram;
  std::vector<CellResult> cells;

  bool passed() const {
    for (const auto& c : cells)
      if (c.status != CellStatus::Pass) return false;
    return true;
  }
  std::vector<const CellResult*> failures() const {
    std::vector<const CellResult*> out;
    for (const auto& c : cells)
      if (c.status == CellStatus::Fail) out.push_back(&c);
    return out;
  }
  const CellResult* find(const std::string& name) const {
    for (const auto& c : cells)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// A named arrow perturbed for fault-injection runs: the first matrix entry (row-major) whose
/// change by `delta` alters the induced homomorphism moves by `delta`.
struct DiagramFault {
  std::string arrow;
  Integer delta = 1;
  bool active() const { return !arrow.empty(); }
};

/// Elements on which a homomorphism is tested: every element of a small finite
/// group, otherwise generators of the numerator and the denominator.
inline std::vector<IntVector> test_elements(const Subquotient& S, const Integer& limit = 4096) {
  if (S.is_finite() && S.order() <= limit) return S.elements();
  std::vector<IntVector> out = S.numerator().generators();
  for (const auto& g : S.denominator().generators()) out.push_back(g);
  return out;
}

/// Cells over named arrows. An arrow carries its matrix and an independent pointwise
/// formula; its definition cell compares them, and cells built on an arrow whose
/// definition failed are skipped, so a perturbed arrow is reported exactly once.
class DiagramCertifier {
 public:
  using Formula = std::function<IntVector(const IntVector&)>;

  explicit DiagramCertifier(std::string diagram, DiagramFault fault = {})
      : fault_(std::move(fault)) {
    report_.diagram = std::move(diagram);
  }

  void add_arrow(const std::string& name, Homomorphism hom, Formula formula) {
    if (fault_.arrow == name) {
      perturb(hom);
      fault_used_ = true;
    }
    arrows_.emplace(name, hom);
    run("arrow " + name, {}, [&]() -> std::optional<std::string> {
      if (!hom.source.numerator().contains(hom.source.denominator()) || !hom.well_defined()) {
        for (const auto& g : hom.source.denominator().generators())
          if (!hom.target.denominator().contains(hom.apply(g))) return "relation " + to_string(g) + " is not killed";
        for (const auto& g : hom.source.numerator().generators())
          if (!hom.target.numerator().contains(hom.apply(g))) return "element " + to_string(g) + " leaves the target";
        return std::string("not well defined");
      }
      for (const auto& x : test_elements(hom.source))
        if (!hom.target.equal(hom.apply(x), formula(x)))
          return "at " + to_string(x) + ": matrix gives " + to_string(hom.apply(x)) + ", formula gives " +
                 to_string(formula(x));
      return std::nullopt;
    });
    if (report_.cells.back().status != CellStatus::Pass) failed_.insert(name);
  }

  const Homomorphism& arrow(const std::string& name) const {
    auto it = arrows_.find(name);
    if (it == arrows_.end()) fail(ErrorKind::InvalidArgument, "unknown arrow " + name);
    return it->second;
  }
  bool has_arrow(const std::string& name) const { return arrows_.count(name) > 0; }

  /// The composites along two paths with common source and target agree.
  void commutes(const std::string& name, const std::vector<std::string>& path1, const std::vector<std::string>& path2) {
    std::vector<std::string> uses = path1;
    uses.insert(uses.end(), path2.begin(), path2.end());
    run(name, uses, [&]() -> std::optional<std::string> {
      auto along = [&](const std::vector<std::string>& path, IntVector x) {
        for (const auto& a : path) x = arrow(a).apply(x);
        return x;
      };
      const Subquotient& target = arrow(path1.back()).target;
      for (const auto& x : test_elements(arrow(path1.front()).source)) {
        IntVector a = along(path1, x), b = along(path2, x);
        if (!target.equal(a, b)) return "at " + to_string(x) + ": " + to_string(a) + " versus " + to_string(b);
      }
      return std::nullopt;
    });
  }

  /// top then right versus left then bottom.
  void square(const std::string& name, const std::string& top, const std::string& right, const std::string& left,
              const std::string& bottom) {
    commutes(name, {top, right}, {left, bottom});
  }

  void exact(const std::string& name, const std::string& in, const std::string& out) {
    run(name, {in, out}, [&]() -> std::optional<std::string> {
      const auto &f = arrow(in), &g = arrow(out);
      Lattice im = f.image(), ker = g.kernel();
      for (const auto& v : im.generators())
        if (!ker.contains(v)) return "image element " + to_string(v) + " is not in the kernel";
      for (const auto& v : ker.generators())
        if (!im.contains(v)) return "kernel element " + to_string(v) + " is not in the image";
      return std::nullopt;
    });
  }

  void injective(const std::string& name, const std::string& a) {
    run(name, {a}, [&]() -> std::optional<std::string> {
      const auto& f = arrow(a);
      for (const auto& v : f.kernel().generators())
        if (!f.source.is_zero(v)) return "nonzero kernel element " + to_string(v);
      return std::nullopt;
    });
  }

  void surjective(const std::string& name, const std::string& a) {
    run(name, {a}, [&]() -> std::optional<std::string> {
      const auto& f = arrow(a);
      Lattice im = f.image();
      for (const auto& v : f.target.numerator().generators())
        if (!im.contains(v)) return "element " + to_string(v) + " is not hit";
      return std::nullopt;
    });
  }

  void custom(const std::string& name, std::vector<std::string> uses, const std::function<std::optional<std::string>()>& body) {
    run(name, std::move(uses), body);
  }

  CertificationReport finish() {
    if (fault_.active() && !fault_used_) fail(ErrorKind::MalformedInstance, "no arrow named " + fault_.arrow);
    return report_;
  }

 private:
  void perturb(Homomorphism& hom) const {
    const auto xs = test_elements(hom.source);
    for (std::size_t i = 0; i < hom.matrix.rows(); ++i)
      for (std::size_t j = 0; j < hom.matrix.cols(); ++j) {
        Homomorphism h = hom;
        h.matrix(i, j) += fault_.delta;
        bool effective = !h.well_defined();
        for (std::size_t k = 0; k < xs.size() && !effective; ++k)
          effective = !hom.target.equal(h.apply(xs[k]), hom.apply(xs[k]));
        if (effective) {
          hom = h;
          return;
        }
      }
    fail(ErrorKind::MalformedInstance, "arrow " + fault_.arrow + " admits no effective perturbation here");
  }

  void run(const std::string& name, std::vector<std::string> uses, const std::function<std::optional<std::string>()>& body) {
    CellResult cell{name, CellStatus::Pass, "", uses};
    for (const auto& a : uses)
      if (failed_.count(a)) {
        cell.status = CellStatus::Skipped;
        cell.witness = "depends on failed arrow " + a;
        report_.cells.push_back(std::move(cell));
        return;
      }
    if (auto w = body()) {
      cell.status = CellStatus::Fail;
      cell.witness = *w;
    }
    report_.cells.push_back(std::move(cell));
  }

  DiagramFault fault_;
  bool fault_used_ = false;
  std::map<std::string, Homomorphism> arrows_;
  std::set<std::string> failed_;
  CertificationReport report_;
};

}  // namespace gerbecoh
