#ifndef PARAHYPER_RUNNER_HPP
#define PARAHYPER_RUNNER_HPP

// Batch verification runner: selects catalog entries and check suites, runs
// them under one FD/tolerance/sampling configuration in a small work pool,
// and renders deterministic text or JSON reports. Reports are sorted by
// (entry, suite, identity); two runs with the same config and seed are
// byte-identical regardless of the parallelism degree (JSON therefore omits
// wall-clock timings; the text format shows them).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "parahyper/catalog.hpp"
#include "parahyper/constructions.hpp"
#include "parahyper/mixed3.hpp"
#include "parahyper/report.hpp"
#include "parahyper/smooth.hpp"
#include "parahyper/structures.hpp"
#include "parahyper/tangent.hpp"

namespace parahyper {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"axioms",        "averaging", "nijenhuis",
                                                 "lifts",         "constructions", "einstein"};
  return names;
}

struct RunConfig {
  std::vector<std::string> case_globs;  // empty = all non-heavy entries
  std::vector<std::string> suites;      // empty = all applicable
  FDScheme scheme;
  SamplePlan plan;  // plan.seed is the global seed; per-task seeds derive from it
  Tolerances tol;
  int jobs = 1;
  bool heavy = false;
  std::string format = "text";  // text | json
};

struct ReportLine {
  std::string entry;
  std::string suite;
  Check check;
  double suite_millis = 0.0;
};

struct RunResult {
  std::vector<ReportLine> lines;
  int pass = 0, fail = 0, skip = 0;
  int exit_code() const { return fail == 0 ? 0 : 1; }
};

namespace detail {

inline SamplePlan derived_plan(const RunConfig& cfg, const std::string& entry,
                               const std::string& suite) {
  SamplePlan plan = cfg.plan;
  plan.seed = hash_str(entry + "/" + suite, cfg.plan.seed);
  return plan;
}

inline std::uint64_t field_seed(const SamplePlan& plan, int k) {
  return plan.seed * 1315423911ull + static_cast<std::uint64_t>(k) * 2654435761ull + 1ull;
}

inline Check count_check(const std::string& identity, int mismatches, int samples) {
  return make_check(identity, static_cast<double>(mismatches), 0.0, "count", samples);
}

inline int signature_mismatches(const MetricField& g, const Signature& expected,
                                const std::vector<Vec>& points) {
  int bad = 0;
  for (const Vec& x : points) {
    try {
      if (!(signature(g.eval(x)) == expected)) ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }
  return bad;
}

inline Check frame_gram_check(const std::vector<Vec>& frame, const Mat& gx,
                              const std::string& identity, double tolerance,
                              const std::string& tol_name) {
  double res = 0.0;
  for (size_t i = 0; i < frame.size(); ++i)
    for (size_t j = 0; j < frame.size(); ++j) {
      double gij = frame[i].dot(gx * frame[j]);
      res = std::max(res, i == j ? std::abs(std::abs(gij) - 1.0) : std::abs(gij));
    }
  return make_check(identity, res, tolerance, tol_name, 1);
}

// ---- suites ---------------------------------------------------------------

inline std::vector<Check> suite_axioms(const CatalogEntry& e, const RunConfig& cfg) {
  std::vector<Check> out;
  SamplePlan plan = derived_plan(cfg, e.id, "axioms");
  const Tolerances& tol = cfg.tol;
  bool cc = e.constant_coefficients;
  auto points = sample_points(*e.chart, plan);

  // Smooth sphere entries report against the documented pseudosphere budget.
  auto rebudget = [&tol](std::vector<Check>& checks, bool sphere) {
    if (!sphere) return;
    for (Check& c : checks)
      if (c.tol_name == "algebra") {
        c.tolerance = tol.sphere_axioms;
        c.tol_name = "sphere_axioms";
        c.verdict = c.residual <= c.tolerance ? Verdict::pass : Verdict::fail;
      }
  };

  if (e.mixed) {
    bool sphere_budget = e.sphere.has_value();
    for (int a = 1; a <= 3; ++a) {
      auto cs = check_contact(e.mixed->mixed.triple(a), plan, tol, cc,
                              "phi" + std::to_string(a) + ": ");
      rebudget(cs, sphere_budget);
      out.insert(out.end(), cs.begin(), cs.end());
    }
    auto ms = check_mixed_axioms(e.mixed->mixed, plan, tol, cc);
    rebudget(ms, sphere_budget);
    out.insert(out.end(), ms.begin(), ms.end());
    if (e.mixed->metric) {
      MetricMixed mm(e.mixed->mixed, *e.mixed->metric);
      auto gs = check_metric_compatibility(mm, plan, tol, cc);
      rebudget(gs, sphere_budget);
      out.insert(out.end(), gs.begin(), gs.end());
      if (e.expected_signature)
        out.push_back(count_check("signature(g) = (" +
                                      std::to_string(e.expected_signature->positive) + "," +
                                      std::to_string(e.expected_signature->negative) + ")",
                                  signature_mismatches(*e.mixed->metric, *e.expected_signature,
                                                       points),
                                  plan.count));
      out.push_back(frame_gram_check(mixed_frame(mm, points.front(), tol),
                                     e.mixed->metric->eval(points.front()),
                                     "mixed frame Gram = diag(+-1)", cc ? tol.exact : tol.algebra,
                                     cc ? "exact" : "algebra"));
      if (e.mixed->sasakian) {
        auto ss = sasakian_defect(mm, cfg.scheme, plan, tol);
        out.insert(out.end(), ss.begin(), ss.end());
      }
    }
  }

  if (e.phc) {
    const auto& t = e.phc->triple;
    for (int a = 1; a <= 3; ++a) {
      auto cs = check_structure(t.structure(a), plan, tol, cc, "J" + std::to_string(a));
      out.insert(out.end(), cs.begin(), cs.end());
    }
    auto ts = check_triple(t, plan, tol, cc);
    out.insert(out.end(), ts.begin(), ts.end());
    auto ds = compatibility_defect(e.phc->metric, t, plan, tol, cc);
    out.insert(out.end(), ds.begin(), ds.end());
    if (e.expected_signature)
      out.push_back(count_check(
          "signature(g) = (" + std::to_string(e.expected_signature->positive) + "," +
              std::to_string(e.expected_signature->negative) + ")",
          signature_mismatches(e.phc->metric, *e.expected_signature, points), plan.count));
    out.push_back(frame_gram_check(adapted_frame(e.phc->metric, t, points.front(), tol),
                                   e.phc->metric.eval(points.front()),
                                   "adapted frame Gram = diag(+-1)", cc ? tol.exact : tol.algebra,
                                   cc ? "exact" : "algebra"));
  }

  if (e.ph) {
    double r_p = 0.0, r_g = 0.0;
    double witness = std::numeric_limits<double>::infinity();
    for (const Vec& x : points) {
      Mat p = e.ph->P.eval(x);
      Mat gx = e.ph->g.eval(x);
      r_p = std::max(r_p, residual_norm(Mat(p * p), Mat(Mat::Identity(p.rows(), p.cols()))));
      r_g = std::max(r_g, residual_norm(pullback(gx, p), Mat(-gx)));
      witness = std::min(witness, nontriviality(p));
    }
    double tv = cc ? tol.exact : tol.algebra;
    std::string tn = cc ? "exact" : "algebra";
    out.push_back(make_check("P^2 = I", r_p, tv, tn, plan.count));
    out.push_back(make_witness("P != +/-I", witness, 1e-6, plan.count));
    out.push_back(make_check("g(P.,P.) = -g", r_g, tv, tn, plan.count));
    if (e.expected_signature)
      out.push_back(count_check("signature(g) = (" +
                                    std::to_string(e.expected_signature->positive) + "," +
                                    std::to_string(e.expected_signature->negative) + ")",
                                signature_mismatches(e.ph->g, *e.expected_signature, points),
                                plan.count));
  }
  return out;
}

inline std::vector<Check> suite_averaging(const CatalogEntry& e, const RunConfig& cfg) {
  std::vector<Check> out;
  SamplePlan plan = derived_plan(cfg, e.id, "averaging");
  const Tolerances& tol = cfg.tol;
  bool cc = e.constant_coefficients;
  auto points = sample_points(*e.chart, plan);
  double tv = cc ? tol.exact : tol.algebra;
  std::string tn = cc ? "exact" : "algebra";

  if (e.phc) {
    const auto& t = e.phc->triple;
    // attached metric is a fixed point of the averaging
    MetricField avg = average_metric(e.phc->metric, t);
    double r_fix = 0.0;
    for (const Vec& x : points) r_fix = std::max(r_fix, residual_norm(avg.eval(x), e.phc->metric.eval(x)));
    out.push_back(make_check("avg(g) = g on the attached metric", r_fix, tv, tn, plan.count));

    // random constant symmetric seeds
    const int n = e.chart->dim();
    const int seeds = 5;
    double r_compat = 0.0, r_idem = 0.0;
    int bad_signature = 0, degenerate = 0;
    std::uint64_t state = field_seed(plan, 17);
    for (int s = 0; s < seeds; ++s) {
      Mat h(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = 2.0 * unit_double(state) - 1.0;
      h = Mat(0.5 * (h + h.transpose()));
      MetricField avg_h = average_metric(constant_metric(e.chart, h), t);
      try {
        for (const Vec& x : points) {
          Mat gx = avg_h.eval(x);
          for (int a = 1; a <= 3; ++a) {
            Mat jx = t.structure(a).op.eval(x);
            r_compat = std::max(r_compat,
                                residual_norm(pullback(gx, jx), Mat(triple_eps(a) * gx)));
          }
          Signature sig = signature(gx);
          if (sig.positive != sig.negative) ++bad_signature;
          MetricField twice = average_metric(avg_h, t);
          r_idem = std::max(r_idem, residual_norm(twice.eval(x), gx));
        }
      } catch (const DegenerateResult&) {
        ++degenerate;
      }
    }
    out.push_back(make_check("avg(h) is hermitian for random seeds", r_compat, tv, tn, seeds));
    out.push_back(make_check("avg(avg(h)) = avg(h) for random seeds", r_idem, tv, tn, seeds));
    out.push_back(count_check("avg(h) has split signature for random seeds", bad_signature, seeds));
    out.push_back(make_info("degenerate random seeds (count)", degenerate, seeds));
  }

  if (e.mixed && e.mixed->seed) {
    MetricField g4 = compatible_metric(e.mixed->mixed, *e.mixed->seed);
    MetricMixed mm(e.mixed->mixed, g4);
    for (auto& c : check_metric_compatibility(mm, plan, tol, cc)) {
      c.identity = "four-step: " + c.identity;
      out.push_back(c);
    }
    MetricField g8 = compatible_metric(e.mixed->mixed, g4);
    double r_idem = 0.0;
    for (const Vec& x : points) r_idem = std::max(r_idem, residual_norm(g8.eval(x), g4.eval(x)));
    out.push_back(make_check("four-step: idempotent", r_idem, tv, tn, plan.count));
    if (e.expected_signature)
      out.push_back(count_check("four-step: signature = (" +
                                    std::to_string(e.expected_signature->positive) + "," +
                                    std::to_string(e.expected_signature->negative) + ")",
                                signature_mismatches(g4, *e.expected_signature, points),
                                plan.count));
  }
  return out;
}

inline std::vector<Check> suite_nijenhuis(const CatalogEntry& e, const RunConfig& cfg) {
  std::vector<Check> out;
  SamplePlan plan = derived_plan(cfg, e.id, "nijenhuis");
  const Tolerances& tol = cfg.tol;

  if (e.phc) {
    const auto& t = e.phc->triple;
    auto points = sample_points(*e.chart, plan);
    VectorField X = random_polynomial_field(e.chart, field_seed(plan, 1), 0.5);
    VectorField Y = random_polynomial_field(e.chart, field_seed(plan, 2), 0.5);
    ScalarField f{e.chart, [](const Vec& x) { return 1.0 + 0.25 * x[0]; }};

    double r_anti = 0.0, r_tens = 0.0;
    std::array<double, 4> nmax{};
    for (int a = 1; a <= 3; ++a) {
      VectorField nxy = nijenhuis(t.structure(a), X, Y, cfg.scheme);
      VectorField nyx = nijenhuis(t.structure(a), Y, X, cfg.scheme);
      VectorField nfxy = nijenhuis(t.structure(a), scale_field(f, X), Y, cfg.scheme);
      for (const Vec& x : points) {
        Vec v = nxy.eval(x);
        nmax[a] = std::max(nmax[a], max_abs(v));
        r_anti = std::max(r_anti, max_abs(Vec(v + nyx.eval(x))));
        r_tens = std::max(r_tens, residual_norm(nfxy.eval(x), Vec(f.eval(x) * v)));
      }
    }
    for (int a = 1; a <= 3; ++a) {
      if (e.phc->integrable) {
        double tv = tol.get(e.phc->integrability_tol);
        out.push_back(make_check("N_" + std::to_string(a) + " = 0", nmax[a], tv,
                                 e.phc->integrability_tol, plan.count));
      } else {
        out.push_back(make_info("N_" + std::to_string(a) + " magnitude", nmax[a], plan.count));
      }
    }
    out.push_back(make_check("N(X,Y) + N(Y,X) = 0", r_anti, tol.first_derivative,
                             "first_derivative", plan.count));
    out.push_back(make_check("N(fX,Y) = f(p) N(X,Y)", r_tens, tol.first_derivative,
                             "first_derivative", plan.count));
    auto two = check_two_imply_third(t, X, Y, cfg.scheme, plan, tol);
    out.insert(out.end(), two.begin(), two.end());
  }

  if (e.ph) {
    TangentChart tc = make_tangent_chart(e.chart, levi_civita(e.ph->g, cfg.scheme));
    VectorField X = random_polynomial_field(e.chart, field_seed(plan, 3), 0.5);
    VectorField Y = random_polynomial_field(e.chart, field_seed(plan, 4), 0.5);
    ClosedFormReport rep =
        check_nijenhuis_closed_forms(tc, e.ph->P, e.ph->g, X, Y, plan, cfg.scheme, tol);
    out.insert(out.end(), rep.agreement.begin(), rep.agreement.end());
    if (e.ph->flat_para_kahler) {
      out.push_back(make_check("all closed-form sides vanish (flat para-Kahler)", rep.max_side,
                               tol.integrability, "integrability", plan.count));
    } else {
      out.push_back(
          make_witness("non-flat witness: some identity has both sides >= 0.05",
                       rep.max_witness, 5e-2, plan.count));
    }
  }
  return out;
}

inline std::vector<Check> suite_lifts(const CatalogEntry& e, const RunConfig& cfg) {
  std::vector<Check> out;
  if (!e.ph) return out;
  SamplePlan plan = derived_plan(cfg, e.id, "lifts");
  const Tolerances& tol = cfg.tol;
  TangentChart tc = make_tangent_chart(e.chart, levi_civita(e.ph->g, cfg.scheme));
  VectorField X = random_polynomial_field(e.chart, field_seed(plan, 5), 0.5);
  VectorField Y = random_polynomial_field(e.chart, field_seed(plan, 6), 0.5);

  auto ks = check_connection_map(tc, X, plan, tol);
  out.insert(out.end(), ks.begin(), ks.end());

  ParaHypercomplexTriple lifted = lift_structure(tc, e.ph->P, e.ph->g, plan, tol);
  for (int a = 1; a <= 3; ++a) {
    auto cs = check_structure(lifted.structure(a), plan, tol, false, "lifted J" + std::to_string(a));
    out.insert(out.end(), cs.begin(), cs.end());
  }
  for (auto& c : check_triple(lifted, plan, tol, false)) {
    c.identity = "lifted " + c.identity;
    out.push_back(c);
  }
  MetricField G = sasaki_metric(tc, e.ph->g);
  for (auto& c : compatibility_defect(G, lifted, plan, tol, false)) {
    c.identity = "sasaki " + c.identity;
    out.push_back(c);
  }

  // Sasaki block structure on lifted basis vectors
  const int m = e.chart->dim();
  double r_block = 0.0;
  auto points = sample_points(*tc.total, plan);
  int bad_signature = 0;
  for (const Vec& z : points) {
    Mat Gz = G.eval(z);
    Mat gx = e.ph->g.eval(z.head(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Vec eih = lift_vector(tc, z, Vec(Vec::Unit(m, i)), true);
        Vec ejh = lift_vector(tc, z, Vec(Vec::Unit(m, j)), true);
        Vec eiv = lift_vector(tc, z, Vec(Vec::Unit(m, i)), false);
        Vec ejv = lift_vector(tc, z, Vec(Vec::Unit(m, j)), false);
        r_block = std::max(r_block, std::abs(eih.dot(Gz * ejv)));
        r_block = std::max(r_block, std::abs(eih.dot(Gz * ejh) - gx(i, j)));
        r_block = std::max(r_block, std::abs(eiv.dot(Gz * ejv) - gx(i, j)));
      }
    try {
      Signature sig = signature(Gz);
      if (sig.positive != m || sig.negative != m) ++bad_signature;
    } catch (const Error&) {
      ++bad_signature;
    }
  }
  out.push_back(make_check("G(Xh,Yv) = 0, G(Xh,Yh) = G(Xv,Yv) = g(X,Y)", r_block, tol.exact,
                           "exact", plan.count));
  out.push_back(count_check("signature(G) = (m,m)", bad_signature, plan.count));

  auto bs = check_bracket_identities(tc, X, Y, plan, cfg.scheme, tol);
  out.insert(out.end(), bs.begin(), bs.end());
  return out;
}

inline std::vector<Check> suite_constructions(const CatalogEntry& e, const RunConfig& cfg) {
  std::vector<Check> out;
  if (!e.mixed || !e.mixed->metric) return out;
  SamplePlan plan = derived_plan(cfg, e.id, "constructions");
  const Tolerances& tol = cfg.tol;
  bool cc = e.constant_coefficients;
  const MixedTriple& m = e.mixed->mixed;
  const MetricField& g = *e.mixed->metric;

  // warped products with f = 1 and f = 2
  double res_f[2] = {0.0, 0.0};
  int fi = 0;
  for (double fval : {1.0, 2.0}) {
    ProductChart pc = make_product_chart(e.chart, -1.0, 1.0, [fval](double) { return fval; });
    ParaHypercomplexTriple t = product_structure(pc, m);
    SamplePlan pplan = plan;
    for (auto& c : check_triple(t, pplan, tol, cc)) {
      res_f[fi] = std::max(res_f[fi], c.residual);
      c.identity = "product(f=" + std::to_string(static_cast<int>(fval)) + "): " + c.identity;
      out.push_back(c);
    }
    if (fval == 1.0) {
      MetricField h = product_compatible_metric(pc, g);
      for (auto& c : compatibility_defect(h, t, pplan, tol, cc)) {
        c.identity = "product: " + c.identity;
        out.push_back(c);
      }
      auto points = sample_points(*pc.total, pplan);
      int half = (e.chart->dim() + 1) / 2;
      out.push_back(count_check("product: signature = (" + std::to_string(half) + "," +
                                    std::to_string(half) + ")",
                                signature_mismatches(h, Signature{half, half}, points),
                                pplan.count));
    }
    ++fi;
  }
  out.push_back(make_check("product: residual independent of f", std::abs(res_f[0] - res_f[1]),
                           tol.exact, "exact", plan.count));

  // trivial circle bundle
  {
    CircleBundleChart cb = make_circle_bundle_chart(e.chart);
    ParaHypercomplexTriple t = circle_bundle_structure(cb, m);
    for (auto& c : check_triple(t, plan, tol, cc)) {
      c.identity = "circle: " + c.identity;
      out.push_back(c);
    }
    for (auto& c : check_circle_bundle_action(cb, m, t, plan, tol, cc)) {
      c.identity = "circle: " + c.identity;
      out.push_back(c);
    }
    MetricField h = circle_bundle_metric(cb, g);
    for (auto& c : compatibility_defect(h, t, plan, tol, cc)) {
      c.identity = "circle: " + c.identity;
      out.push_back(c);
    }
  }

  // cone over Sasakian bases
  if (e.mixed->sasakian) {
    ConeChart ccn = make_cone_chart(e.chart);
    ParaHypercomplexTriple t = cone_structure(ccn, m);
    for (auto& c : check_triple(t, plan, tol, false)) {
      c.identity = "cone: " + c.identity;
      out.push_back(c);
    }
    MetricField gbar = cone_metric(ccn, g);
    for (auto& c : compatibility_defect(gbar, t, plan, tol, false)) {
      out.push_back(make_check("cone: " + c.identity, c.residual, tol.first_derivative,
                               "first_derivative", plan.count));
    }
    for (auto& c : cone_parallel_defect(ccn, t, g, plan, cfg.scheme, tol)) out.push_back(c);

    VectorField X = random_polynomial_field(ccn.total, field_seed(plan, 7), 0.5);
    VectorField Y = random_polynomial_field(ccn.total, field_seed(plan, 8), 0.5);
    auto cone_points = sample_points(*ccn.total, plan);
    for (int a = 1; a <= 3; ++a) {
      double r = 0.0;
      for (const Vec& z : cone_points)
        r = std::max(r, max_abs(nijenhuis(t.structure(a), X, Y, cfg.scheme).eval(z)));
      out.push_back(make_check("cone: N_" + std::to_string(a) + " = 0", r, tol.nested, "nested",
                               plan.count));
    }

    double r_ric = 0.0;
    for (const Vec& z : cone_points) r_ric = std::max(r_ric, max_abs(ricci(gbar, z, cfg.scheme)));
    out.push_back(make_check("cone: Ric = 0", r_ric, tol.nested, "nested", plan.count));

    MixedTriple rec = cone_inverse(ccn, t, g, cfg.scheme);
    double r_phi = 0.0, r_xi = 0.0, r_eta = 0.0;
    auto base_points = sample_points(*e.chart, plan);
    for (const Vec& y : base_points)
      for (int a = 1; a <= 3; ++a) {
        r_phi = std::max(r_phi, residual_norm(rec.triple(a).phi.eval(y), m.triple(a).phi.eval(y)));
        r_xi = std::max(r_xi, residual_norm(rec.triple(a).xi.eval(y), m.triple(a).xi.eval(y)));
        r_eta = std::max(r_eta, residual_norm(rec.triple(a).eta.eval(y), m.triple(a).eta.eval(y)));
      }
    out.push_back(make_check("cone inverse: phi recovered", r_phi, tol.nested, "nested", plan.count));
    out.push_back(make_check("cone inverse: xi recovered", r_xi, tol.nested, "nested", plan.count));
    out.push_back(make_check("cone inverse: eta recovered", r_eta, tol.nested, "nested", plan.count));
    double r_axioms = 0.0;
    for (const auto& c : check_mixed_axioms(rec, plan, tol, false))
      r_axioms = std::max(r_axioms, c.residual);
    out.push_back(
        make_check("cone inverse: mixed axioms hold", r_axioms, tol.nested, "nested", plan.count));
  }
  return out;
}

inline std::vector<Check> suite_einstein(const CatalogEntry& e, const RunConfig& cfg) {
  std::vector<Check> out;
  if (!e.einstein_constant) return out;
  SamplePlan plan = derived_plan(cfg, e.id, "einstein");
  const Tolerances& tol = cfg.tol;
  const MetricField* g = nullptr;
  if (e.mixed && e.mixed->metric) g = &*e.mixed->metric;
  if (e.phc) g = &e.phc->metric;
  if (!g) return out;
  double lambda = *e.einstein_constant;
  double res = 0.0;
  auto points = sample_points(*e.chart, plan);
  for (const Vec& x : points) {
    Mat ric = ricci(*g, x, cfg.scheme);
    res = std::max(res, residual_norm(ric, Mat(lambda * g->eval(x))));
  }
  std::ostringstream name;
  if (lambda == 0.0)
    name << "Ric = 0";
  else
    name << "Ric = " << lambda << " g";
  out.push_back(make_check(name.str(), res, tol.nested, "nested", plan.count));
  return out;
}

inline std::vector<Check> run_suite(const CatalogEntry& e, const std::string& suite,
                                    const RunConfig& cfg) {
  if (suite == "axioms") return suite_axioms(e, cfg);
  if (suite == "averaging") return suite_averaging(e, cfg);
  if (suite == "nijenhuis") return suite_nijenhuis(e, cfg);
  if (suite == "lifts") return suite_lifts(e, cfg);
  if (suite == "constructions") return suite_constructions(e, cfg);
  if (suite == "einstein") return suite_einstein(e, cfg);
  throw InvalidConfig("unknown suite: " + suite);
}

inline bool suite_applicable(const CatalogEntry& e, const std::string& suite) {
  if (suite == "axioms") return e.mixed || e.phc || e.ph;
  if (suite == "averaging") return e.phc.has_value() || (e.mixed && e.mixed->seed);
  if (suite == "nijenhuis") return e.phc.has_value() || e.ph.has_value();
  if (suite == "lifts") return e.ph.has_value();
  if (suite == "constructions") return e.mixed && e.mixed->metric;
  if (suite == "einstein") return e.einstein_constant.has_value();
  return false;
}

}  // namespace detail

inline RunResult run(const Catalog& catalog, const RunConfig& cfg) {
  for (const std::string& s : cfg.suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
      std::string known;
      for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
      throw InvalidConfig("unknown suite '" + s + "' (known: " + known + ")");
    }

  // resolve cases
  std::vector<const CatalogEntry*> selected;
  if (cfg.case_globs.empty()) {
    for (const auto& e : catalog.entries)
      if (!e.heavy || cfg.heavy) selected.push_back(&e);
  } else {
    std::set<const CatalogEntry*> seen;
    for (const std::string& glob : cfg.case_globs) {
      bool any = false;
      for (const auto& e : catalog.entries) {
        if (glob_match(glob, e.id)) {
          any = true;
          if ((!e.heavy || cfg.heavy) && seen.insert(&e).second) selected.push_back(&e);
        }
      }
      if (!any) {
        std::string ids;
        for (const auto& e : catalog.entries) ids += (ids.empty() ? "" : ", ") + e.id;
        throw CaseNotFound("'" + glob + "' matches no case (available: " + ids + ")");
      }
    }
  }

  std::vector<std::string> suites = cfg.suites.empty() ? suite_names() : cfg.suites;
  struct Task {
    const CatalogEntry* entry;
    std::string suite;
  };
  std::vector<Task> tasks;
  for (const CatalogEntry* e : selected)
    for (const std::string& s : suites)
      if (detail::suite_applicable(*e, s)) tasks.push_back({e, s});

  std::vector<std::vector<ReportLine>> results(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      auto t0 = std::chrono::steady_clock::now();
      std::vector<Check> checks;
      try {
        checks = detail::run_suite(*task.entry, task.suite, cfg);
      } catch (const Error& err) {
        Check c;
        c.identity = std::string("suite error: ") + err.what();
        c.residual = std::numeric_limits<double>::infinity();
        c.tolerance = 0.0;
        c.tol_name = "error";
        c.verdict = Verdict::fail;
        checks.push_back(c);
      }
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
      for (auto& c : checks) results[i].push_back({task.entry->id, task.suite, std::move(c), ms});
    }
  };
  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  RunResult out;
  for (auto& lines : results)
    for (auto& l : lines) out.lines.push_back(std::move(l));
  std::sort(out.lines.begin(), out.lines.end(), [](const ReportLine& a, const ReportLine& b) {
    return std::tie(a.entry, a.suite, a.check.identity) <
           std::tie(b.entry, b.suite, b.check.identity);
  });
  for (const auto& l : out.lines) {
    if (l.check.verdict == Verdict::pass) ++out.pass;
    else if (l.check.verdict == Verdict::fail) ++out.fail;
    else ++out.skip;
  }
  return out;
}

// ---- rendering --------------------------------------------------------------

inline std::string list_cases(const Catalog& catalog) {
  std::ostringstream os;
  for (const auto& e : catalog.entries) {
    os << e.id;
    for (size_t i = e.id.size(); i < 22; ++i) os << ' ';
    os << "dim=" << e.chart->dim();
    if (e.chart->dim() < 10) os << ' ';
    os << (e.constant_coefficients ? "  constant " : "  smooth   ");
    os << (e.heavy ? "[heavy] " : "        ");
    os << e.summary << "\n";
  }
  os << catalog.entries.size() << " cases\n";
  return os.str();
}

inline std::string to_text(const RunResult& result, const RunConfig& cfg) {
  std::ostringstream os;
  os << "seed " << cfg.plan.seed << ", samples " << cfg.plan.count << ", fd step "
     << cfg.scheme.step << " (order " << cfg.scheme.order << ")\n";
  for (const auto& l : result.lines) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-5s %11.4e", to_string(l.check.verdict), l.check.residual);
    os << buf;
    if (l.check.verdict != Verdict::skip) {
      std::snprintf(buf, sizeof buf, " <= %9.3e %-16s", l.check.tolerance, l.check.tol_name.c_str());
      os << buf;
    } else {
      os << "    (informational)          ";
    }
    std::snprintf(buf, sizeof buf, " %7.1fms  ", l.suite_millis);
    os << buf << l.entry << " / " << l.suite << " / " << l.check.identity << "\n";
  }
  os << result.pass << " pass, " << result.fail << " fail, " << result.skip << " informational\n";
  return os.str();
}

inline std::string to_json(const RunResult& result, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["seed"] = cfg.plan.seed;
  nlohmann::ordered_json conf;
  conf["cases"] = cfg.case_globs;
  conf["suites"] = cfg.suites.empty() ? suite_names() : cfg.suites;
  conf["fd_step"] = cfg.scheme.step;
  conf["fd_order"] = cfg.scheme.order;
  conf["samples"] = cfg.plan.count;
  conf["margin"] = cfg.plan.margin;
  conf["heavy"] = cfg.heavy;
  nlohmann::ordered_json tols;
  for (const auto& name : cfg.tol.names()) tols[name] = cfg.tol.get(name);
  conf["tolerances"] = tols;
  j["config"] = conf;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const auto& l : result.lines) {
    nlohmann::ordered_json r;
    r["entry"] = l.entry;
    r["suite"] = l.suite;
    r["identity"] = l.check.identity;
    r["residual"] = l.check.residual;
    r["tolerance"] = l.check.tolerance;
    r["tol_name"] = l.check.tol_name;
    r["verdict"] = to_string(l.check.verdict);
    r["samples"] = l.check.samples;
    reports.push_back(std::move(r));
  }
  j["reports"] = std::move(reports);
  return j.dump(2) + "\n";
}

}  // namespace parahyper

#endif
