#ifndef PARAHYPER_REPORT_HPP
#define PARAHYPER_REPORT_HPP

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "parahyper/errors.hpp"

namespace parahyper {

enum class Verdict { pass, fail, skip };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "skip";
  }
}

// One verified identity: name, max residual over sample points, the tolerance
// it was compared against, and the verdict. Verdict is pass iff residual <=
// tolerance, except for skip lines (reported for information only).
struct Check {
  std::string identity;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string tol_name;
  Verdict verdict = Verdict::pass;
  int samples = 0;
};

inline Check make_check(std::string identity, double residual, double tolerance,
                        std::string tol_name, int samples) {
  Check c;
  c.identity = std::move(identity);
  c.residual = residual;
  c.tolerance = tolerance;
  c.tol_name = std::move(tol_name);
  c.verdict = residual <= tolerance ? Verdict::pass : Verdict::fail;
  c.samples = samples;
  return c;
}

inline Check make_info(std::string identity, double residual, int samples) {
  Check c;
  c.identity = std::move(identity);
  c.residual = residual;
  c.tolerance = 0.0;
  c.tol_name = "info";
  c.verdict = Verdict::skip;
  c.samples = samples;
  return c;
}

// Witness-style check: `value` must be at least `threshold`. Encoded so that
// the pass-iff-residual<=tolerance contract still holds: the residual is the
// shortfall below the threshold.
inline Check make_witness(std::string identity, double value, double threshold, int samples) {
  char label[32];
  std::snprintf(label, sizeof label, "witness>=%g", threshold);
  Check c;
  c.identity = std::move(identity);
  c.residual = value >= threshold ? 0.0 : threshold - value;
  c.tolerance = 0.0;
  c.tol_name = label;
  c.verdict = c.residual <= 0.0 ? Verdict::pass : Verdict::fail;
  c.samples = samples;
  return c;
}

// Default tolerance budget. Each FD nesting loses two to three digits, hence
// the laddered defaults. All values overridable by name.
struct Tolerances {
  double exact = 1e-12;             // constant-coefficient algebra
  double algebra = 1e-9;            // pointwise algebra of smooth fields
  double first_derivative = 1e-6;   // single-FD identities
  double connection = 1e-4;         // Christoffel-level identities
  double curvature = 1e-4;          // single curvature evaluations
  double bracket = 1e-3;            // lifted-field bracket identities
  double nested = 5e-3;             // Ricci and doubly nested FD identities
  double integrability = 1e-5;      // Nijenhuis vanishing on integrable cases
  double sphere_axioms = 1e-6;      // pseudosphere structure equations
  double degeneracy = 1e-10;        // relative eigenvalue cutoff

  double get(const std::string& name) const {
    auto table = const_cast<Tolerances*>(this)->as_map();
    auto it = table.find(name);
    if (it == table.end()) throw InvalidConfig("unknown tolerance name: " + name);
    return *it->second;
  }

  void set(const std::string& name, double value) {
    auto table = as_map();
    auto it = table.find(name);
    if (it == table.end()) throw InvalidConfig("unknown tolerance name: " + name);
    *it->second = value;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (auto& [k, v] : const_cast<Tolerances*>(this)->as_map()) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, double*> as_map() {
    return {{"exact", &exact},
            {"algebra", &algebra},
            {"first_derivative", &first_derivative},
            {"connection", &connection},
            {"curvature", &curvature},
            {"bracket", &bracket},
            {"nested", &nested},
            {"integrability", &integrability},
            {"sphere_axioms", &sphere_axioms},
            {"degeneracy", &degeneracy}};
  }
};

}  // namespace parahyper

#endif
