#include <catch2/catch.hpp>
#include <cmath>

#include "oracles.hpp"
#include "parahyper/constructions.hpp"

using namespace parahyper;

namespace {

Mat mat3(std::initializer_list<double> vals) {
  Mat m(3, 3);
  int k = 0;
  for (double v : vals) m(k / 3, k % 3) = v, ++k;
  return m;
}

MixedTriple r3_triple(ChartPtr chart) {
  Mat phi1 = mat3({0, 0, 1, 0, 0, 0, -1, 0, 0});
  Mat phi2 = mat3({0, 0, 0, 0, 0, 1, 0, 1, 0});
  Mat phi3 = mat3({0, -1, 0, -1, 0, 0, 0, 0, 0});
  Vec xi1(3), xi2(3), xi3(3), eta1(3), eta2(3), eta3(3);
  xi1 << 0, 1, 0;
  xi2 << 1, 0, 0;
  xi3 << 0, 0, 1;
  eta1 << 0, 1, 0;
  eta2 << -1, 0, 0;
  eta3 << 0, 0, -1;
  return MixedTriple(ContactTriple(constant_operator(chart, phi1), constant_field(chart, xi1),
                                   constant_field(chart, eta1), +1),
                     ContactTriple(constant_operator(chart, phi2), constant_field(chart, xi2),
                                   constant_field(chart, eta2), -1),
                     ContactTriple(constant_operator(chart, phi3), constant_field(chart, xi3),
                                   constant_field(chart, eta3), -1));
}

MetricField r3_metric(ChartPtr chart) {
  Vec d(3);
  d << -1, 1, -1;
  return constant_metric(chart, Mat(d.asDiagonal()));
}

double max_over(const std::vector<Check>& checks) {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.residual);
  return m;
}

}  // namespace

TEST_CASE("product structure satisfies the triple algebra for constant warps", "[constructions]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  MixedTriple m = r3_triple(chart);
  Tolerances tol;
  SamplePlan plan{8, 31, 0.1};

  for (double fval : {1.0, 2.0}) {
    ProductChart pc = make_product_chart(chart, -1.0, 1.0, [fval](double) { return fval; });
    ParaHypercomplexTriple t = product_structure(pc, m);
    for (const auto& c : check_triple(t, plan, tol, true)) {
      INFO("f = " << fval << ": " << c.identity);
      CHECK(c.residual < 1e-15);
    }
    for (const auto& c : check_structure(t.j1, plan, tol, true, "J1")) CHECK(c.residual < 1e-15);
    for (const auto& c : check_structure(t.j2, plan, tol, true, "J2"))
      CHECK(c.verdict == Verdict::pass);
  }
}

TEST_CASE("product algebra is independent of the warp function", "[constructions]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  MixedTriple m = r3_triple(chart);
  Tolerances tol;
  SamplePlan plan{8, 32, 0.1};

  ProductChart pc1 = make_product_chart(chart, -1.0, 1.0, [](double) { return 1.0; });
  ProductChart pc2 = make_product_chart(chart, -1.0, 1.0, [](double) { return 2.0; });
  ProductChart pcs = make_product_chart(chart, -1.0, 1.0, [](double r) { return std::exp(0.5 * r); });
  double r1 = max_over(check_triple(product_structure(pc1, m), plan, tol, true));
  double r2 = max_over(check_triple(product_structure(pc2, m), plan, tol, true));
  double rs = max_over(check_triple(product_structure(pcs, m), plan, tol, false));
  CHECK(std::abs(r1 - r2) < 1e-12);
  CHECK(rs < 1e-14);
}

TEST_CASE("product compatible metric is the averaging fixed point", "[constructions]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  MixedTriple m = r3_triple(chart);
  Tolerances tol;
  SamplePlan plan{6, 33, 0.1};
  ProductChart pc = make_product_chart(chart, -1.0, 1.0, [](double) { return 2.0; });
  ParaHypercomplexTriple t = product_structure(pc, m);
  MetricField h = product_compatible_metric(pc, r3_metric(chart));
  CHECK(max_over(compatibility_defect(h, t, plan, tol, true)) < 1e-14);
  MetricField avg = average_metric(h, t);
  for (const Vec& z : sample_points(*pc.total, plan)) {
    CHECK(residual_norm(avg.eval(z), h.eval(z)) < 1e-14);
    CHECK(signature(h.eval(z)) == Signature{2, 2});
  }
}

TEST_CASE("product chart rejects nonpositive warps", "[constructions]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  CHECK_THROWS_AS(make_product_chart(chart, 0.0, 2.0, [](double r) { return r - 1.0; }),
                  NonpositiveF);
}

TEST_CASE("cone chart must exclude the apex", "[constructions]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  CHECK_THROWS_AS(make_cone_chart(chart, -0.5, 2.0), ApexIncluded);
}

TEST_CASE("cone structure over the pseudosphere is para-hyperhermitian", "[constructions]") {
  MetricMixed mm = make_pseudosphere(0);
  ConeChart cc = make_cone_chart(mm.g.chart);
  ParaHypercomplexTriple t = cone_structure(cc, mm.mixed);
  Tolerances tol;
  SamplePlan plan{8, 34, 0.1};

  for (const auto& c : check_triple(t, plan, tol, false)) {
    INFO(c.identity);
    CHECK(c.residual < 1e-9);
  }
  MetricField gbar = cone_metric(cc, mm.g);
  for (const auto& c : compatibility_defect(gbar, t, plan, tol, false)) {
    INFO(c.identity);
    CHECK(c.residual < 1e-6);
  }
}

TEST_CASE("cone structure is parallel and integrable", "[constructions]") {
  MetricMixed mm = make_pseudosphere(0);
  ConeChart cc = make_cone_chart(mm.g.chart);
  ParaHypercomplexTriple t = cone_structure(cc, mm.mixed);
  Tolerances tol;
  FDScheme fd;
  SamplePlan plan{4, 35, 0.12};

  for (const auto& c : cone_parallel_defect(cc, t, mm.g, plan, fd, tol)) {
    INFO(c.identity);
    CHECK(c.residual < 5e-3);
    CHECK(c.verdict == Verdict::pass);
  }

  VectorField X = random_polynomial_field(cc.total, 101, 0.5);
  VectorField Y = random_polynomial_field(cc.total, 102, 0.5);
  for (int alpha = 1; alpha <= 3; ++alpha) {
    double res = 0.0;
    for (const Vec& z : sample_points(*cc.total, plan))
      res = std::max(res, max_abs(nijenhuis(t.structure(alpha), X, Y, fd).eval(z)));
    INFO("alpha = " << alpha);
    CHECK(res < 5e-3);
  }
}

TEST_CASE("cone over the pseudosphere is ricci flat", "[constructions]") {
  MetricMixed mm = make_pseudosphere(0);
  ConeChart cc = make_cone_chart(mm.g.chart);
  MetricField gbar = cone_metric(cc, mm.g);
  FDScheme fd;
  for (const Vec& z : sample_points(*cc.total, SamplePlan{4, 36, 0.12})) {
    CHECK(max_abs(ricci(gbar, z, fd)) < 5e-3);
  }
}

TEST_CASE("cone inverse recovers the mixed triple on the unit slice", "[constructions]") {
  MetricMixed mm = make_pseudosphere(0);
  ConeChart cc = make_cone_chart(mm.g.chart);
  ParaHypercomplexTriple t = cone_structure(cc, mm.mixed);
  FDScheme fd;
  Tolerances tol;
  MixedTriple rec = cone_inverse(cc, t, mm.g, fd);

  SamplePlan plan{4, 37, 0.12};
  for (const Vec& y : sample_points(*mm.g.chart, plan)) {
    for (int a = 1; a <= 3; ++a) {
      CHECK(residual_norm(rec.triple(a).xi.eval(y), mm.mixed.triple(a).xi.eval(y)) < 5e-3);
      CHECK(residual_norm(rec.triple(a).eta.eval(y), mm.mixed.triple(a).eta.eval(y)) < 5e-3);
      CHECK(residual_norm(rec.triple(a).phi.eval(y), mm.mixed.triple(a).phi.eval(y)) < 5e-3);
      // eta(xi) = eps survives the round trip
      double pairing = rec.triple(a).eta.eval(y).dot(rec.triple(a).xi.eval(y));
      CHECK(pairing == Approx(a == 1 ? 1.0 : -1.0).margin(5e-3));
    }
  }
  // and the recovered triple still satisfies the coupling axioms
  Tolerances loose = tol;
  loose.algebra = 5e-3;
  CHECK(max_over(check_mixed_axioms(rec, plan, loose, false)) < 5e-3);
}

TEST_CASE("circle bundle structures over the constant bases are exact", "[constructions]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  MixedTriple m = r3_triple(chart);
  Tolerances tol;
  SamplePlan plan{8, 38, 0.1};
  CircleBundleChart cb = make_circle_bundle_chart(chart);
  ParaHypercomplexTriple t = circle_bundle_structure(cb, m);

  for (const auto& c : check_triple(t, plan, tol, true)) CHECK(c.residual < 1e-15);
  for (const auto& c : check_circle_bundle_action(cb, m, t, plan, tol, true))
    CHECK(c.residual < 1e-15);

  MetricField h = circle_bundle_metric(cb, r3_metric(chart));
  CHECK(max_over(compatibility_defect(h, t, plan, tol, true)) < 1e-14);
  MetricField avg = average_metric(h, t);
  for (const Vec& z : sample_points(*cb.total, SamplePlan{4, 39, 0.1})) {
    CHECK(residual_norm(avg.eval(z), h.eval(z)) < 1e-14);
    CHECK(signature(h.eval(z)) == Signature{2, 2});
  }
}

TEST_CASE("circle bundle over the pseudosphere", "[constructions]") {
  MetricMixed mm = make_pseudosphere(0);
  CircleBundleChart cb = make_circle_bundle_chart(mm.g.chart);
  ParaHypercomplexTriple t = circle_bundle_structure(cb, mm.mixed);
  Tolerances tol;
  SamplePlan plan{8, 40, 0.1};
  for (const auto& c : check_triple(t, plan, tol, false)) {
    INFO(c.identity);
    CHECK(c.residual < 1e-9);
  }
  MetricField h = circle_bundle_metric(cb, mm.g);
  CHECK(max_over(compatibility_defect(h, t, plan, tol, false)) < 1e-9);
  for (const Vec& z : sample_points(*cb.total, SamplePlan{4, 41, 0.1}))
    CHECK(signature(h.eval(z)) == Signature{2, 2});
}
