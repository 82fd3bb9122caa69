#include <catch2/catch.hpp>
#include <cmath>

#include "oracles.hpp"
#include "parahyper/mixed3.hpp"

using namespace parahyper;

namespace {

Mat mat3(std::initializer_list<double> vals) {
  Mat m(3, 3);
  int k = 0;
  for (double v : vals) m(k / 3, k % 3) = v, ++k;
  return m;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

// The constant 3-dimensional mixed structure, transcribed entry by entry.
struct R3Data {
  Mat phi[4];
  Vec xi[4], eta[4];
  R3Data() {
    phi[1] = mat3({0, 0, 1, 0, 0, 0, -1, 0, 0});
    phi[2] = mat3({0, 0, 0, 0, 0, 1, 0, 1, 0});
    phi[3] = mat3({0, -1, 0, -1, 0, 0, 0, 0, 0});
    xi[1] = vec3(0, 1, 0);
    xi[2] = vec3(1, 0, 0);
    xi[3] = vec3(0, 0, 1);
    eta[1] = vec3(0, 1, 0);
    eta[2] = vec3(-1, 0, 0);
    eta[3] = vec3(0, 0, -1);
  }
};

MixedTriple r3_triple(ChartPtr chart, double phi1_sign = 1.0) {
  R3Data d;
  return MixedTriple(
      ContactTriple(constant_operator(chart, Mat(phi1_sign * d.phi[1])),
                    constant_field(chart, d.xi[1]), constant_field(chart, d.eta[1]), +1),
      ContactTriple(constant_operator(chart, d.phi[2]), constant_field(chart, d.xi[2]),
                    constant_field(chart, d.eta[2]), -1),
      ContactTriple(constant_operator(chart, d.phi[3]), constant_field(chart, d.xi[3]),
                    constant_field(chart, d.eta[3]), -1));
}

// Block extension to dimension 4n+3: phi'_a = diag(phi_a, J_a), xi' = (xi; 0),
// eta' = (eta, 0), with J_a the paraquaternionic structures on R^{4n}.
MixedTriple block_mixed_triple(ChartPtr chart) {
  const int dim = chart->dim();
  const int rest = dim - 3;
  R3Data d;
  auto extend_op = [&](const Mat& small, const Mat& big) {
    Mat m = Mat::Zero(dim, dim);
    m.topLeftCorner(3, 3) = small;
    m.bottomRightCorner(rest, rest) = big;
    return m;
  };
  auto extend_vec = [&](const Vec& small) {
    Vec v = Vec::Zero(dim);
    v.head(3) = small;
    return v;
  };
  Mat j[4] = {Mat(), test::pq_j1(rest), test::pq_j2(rest), test::pq_j3(rest)};
  auto make = [&](int a) {
    return ContactTriple(constant_operator(chart, extend_op(d.phi[a], j[a])),
                         constant_field(chart, extend_vec(d.xi[a])),
                         constant_field(chart, extend_vec(d.eta[a])), a == 1 ? 1 : -1);
  };
  return MixedTriple(make(1), make(2), make(3));
}

double max_over(const std::vector<Check>& checks) {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.residual);
  return m;
}

}  // namespace

TEST_CASE("contact structure equations hold for the constant triple", "[mixed3]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  Tolerances tol;
  SamplePlan plan{5, 2, 0.1};
  R3Data d;

  // phi1^2 = diag(-1, 0, -1) = -I + xi1*eta1
  Vec diag_expect(3);
  diag_expect << -1, 0, -1;
  CHECK(residual_norm(Mat(d.phi[1] * d.phi[1]), Mat(diag_expect.asDiagonal())) == 0.0);

  MixedTriple m = r3_triple(chart);
  for (int a = 1; a <= 3; ++a) {
    auto checks = check_contact(m.triple(a), plan, tol, true);
    for (const auto& c : checks) {
      CHECK(c.residual == 0.0);
      CHECK(c.verdict == Verdict::pass);
    }
  }

  // flipping eps on the first triple fails with residual exactly 2
  ContactTriple wrong(constant_operator(chart, d.phi[1]), constant_field(chart, d.xi[1]),
                      constant_field(chart, d.eta[1]), -1);
  auto checks = check_contact(wrong, plan, tol, true);
  CHECK(checks[0].residual == 2.0);
  CHECK(checks[1].residual == 2.0);
  CHECK(checks[0].verdict == Verdict::fail);
}

TEST_CASE("mixed axioms hold on R^3 with the frozen products", "[mixed3]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  Tolerances tol;
  SamplePlan plan{5, 3, 0.1};
  R3Data d;

  // phi1 xi2 = (0,0,-1) = eps3 xi3 and eta1 o phi2 = (0,0,1) = eps3 eta3
  CHECK(residual_norm(Vec(d.phi[1] * d.xi[2]), vec3(0, 0, -1)) == 0.0);
  CHECK(residual_norm(Vec(d.phi[2].transpose() * d.eta[1]), vec3(0, 0, 1)) == 0.0);

  MixedTriple m = r3_triple(chart);
  for (const auto& c : check_mixed_axioms(m, plan, tol, true)) {
    CHECK(c.residual == 0.0);
    CHECK(c.verdict == Verdict::pass);
  }
}

TEST_CASE("mixed axioms hold exactly for the block structures", "[mixed3]") {
  Tolerances tol;
  SamplePlan plan{3, 4, 0.1};
  for (int dim : {7, 11}) {
    auto chart = make_box_chart("r" + std::to_string(dim), dim, -1.0, 1.0);
    MixedTriple m = block_mixed_triple(chart);
    for (const auto& c : check_mixed_axioms(m, plan, tol, true)) CHECK(c.residual == 0.0);
    for (int a = 1; a <= 3; ++a)
      for (const auto& c : check_contact(m.triple(a), plan, tol, true)) CHECK(c.residual == 0.0);
  }
}

TEST_CASE("sign-flipped phi1 breaks the coupling axioms", "[mixed3]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  Tolerances tol;
  SamplePlan plan{5, 5, 0.1};
  MixedTriple m = r3_triple(chart, -1.0);
  // the flipped triple still satisfies its own contact equations
  CHECK(max_over(check_contact(m.triple(1), plan, tol, true)) == 0.0);
  // but phi_a(xi_b) = eps_c xi_c fails
  auto checks = check_mixed_axioms(m, plan, tol, true);
  CHECK(checks[1].verdict == Verdict::fail);
  CHECK(checks[1].residual == 2.0);
}

TEST_CASE("four-step metric on R^3 reproduces the split diagonal", "[mixed3]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  Tolerances tol;
  SamplePlan plan{5, 6, 0.1};
  MixedTriple m = r3_triple(chart);
  MetricField g = compatible_metric(m, constant_metric(chart, Mat(Mat::Identity(3, 3))));
  Vec p = Vec::Zero(3);
  Vec expect(3);
  expect << -1, 1, -1;
  CHECK(residual_norm(g.eval(p), Mat(expect.asDiagonal())) < 1e-15);
  CHECK(signature(g.eval(p)) == Signature{1, 2});

  MetricMixed mm(m, g);
  for (const auto& c : check_metric_compatibility(mm, plan, tol, true)) {
    CHECK(c.residual < 1e-15);
  }

  // idempotence: feeding the output back returns the same metric
  MetricField g2 = compatible_metric(m, g);
  CHECK(residual_norm(g2.eval(p), g.eval(p)) < 1e-15);
}

TEST_CASE("four-step metric on R^7 and R^11 has the stated signature", "[mixed3]") {
  Tolerances tol;
  SamplePlan plan{4, 7, 0.1};
  struct Case {
    int dim;
    Signature sig;
  };
  for (auto [dim, sig] : {Case{7, {3, 4}}, Case{11, {5, 6}}}) {
    auto chart = make_box_chart("r" + std::to_string(dim), dim, -1.0, 1.0);
    MixedTriple m = block_mixed_triple(chart);
    // seed: Euclidean on the R^3 block, split flat on the R^{4n} block
    Mat seed = Mat::Identity(dim, dim);
    seed.bottomRightCorner(dim - 3, dim - 3) = test::split_metric(dim - 3);
    MetricField g = compatible_metric(m, constant_metric(chart, seed));
    Vec p = Vec::Zero(dim);
    CHECK(signature(g.eval(p)) == sig);
    MetricMixed mm(m, g);
    CHECK(max_over(check_metric_compatibility(mm, plan, tol, true)) < 1e-14);
  }
}

TEST_CASE("four-step metric flags the degenerate Euclidean seed on R^7", "[mixed3]") {
  auto chart = make_box_chart("r7", 7, -1.0, 1.0);
  MixedTriple m = block_mixed_triple(chart);
  // The paraquaternionic block structures are Euclidean-orthogonal, so the
  // final eps-weighted average kills the R^4 block: step 4 degenerates.
  MetricField g = compatible_metric(m, constant_metric(chart, Mat(Mat::Identity(7, 7))));
  try {
    g.eval(Vec::Zero(7));
    FAIL("expected DegenerateIntermediate");
  } catch (const DegenerateIntermediate& e) {
    CHECK(e.step == 4);
  }
}

TEST_CASE("mixed frame on R^3 is exactly the xi frame", "[mixed3]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  Tolerances tol;
  MixedTriple m = r3_triple(chart);
  MetricField g = compatible_metric(m, constant_metric(chart, Mat(Mat::Identity(3, 3))));
  MetricMixed mm(m, g);
  Vec p = Vec::Zero(3);
  auto frame = mixed_frame(mm, p, tol);
  REQUIRE(frame.size() == 3);
  Mat gx = g.eval(p);
  Vec expect_sign(3);
  expect_sign << 1, -1, -1;
  for (int i = 0; i < 3; ++i) {
    CHECK(residual_norm(frame[i], mm.mixed.triple(i + 1).xi.eval(p)) == 0.0);
    CHECK(frame[i].dot(gx * frame[i]) == Approx(expect_sign[i]).margin(1e-12));
  }
}

TEST_CASE("mixed frame on R^7 is pseudo-orthonormal with signature (3,4)", "[mixed3]") {
  auto chart = make_box_chart("r7", 7, -1.0, 1.0);
  Tolerances tol;
  MixedTriple m = block_mixed_triple(chart);
  Mat seed = Mat::Identity(7, 7);
  seed.bottomRightCorner(4, 4) = test::split_metric(4);
  MetricField g = compatible_metric(m, constant_metric(chart, seed));
  MetricMixed mm(m, g);
  Vec p = Vec::Zero(7);
  auto frame = mixed_frame(mm, p, tol);
  REQUIRE(frame.size() == 7);
  Mat gx = g.eval(p);
  int pos = 0, neg = 0;
  for (size_t i = 0; i < frame.size(); ++i)
    for (size_t j = 0; j < frame.size(); ++j) {
      double gij = frame[i].dot(gx * frame[j]);
      if (i == j) {
        CHECK(std::abs(std::abs(gij) - 1.0) < 1e-9);
        (gij > 0 ? pos : neg)++;
      } else {
        CHECK(std::abs(gij) < 1e-9);
      }
    }
  CHECK(pos == 3);
  CHECK(neg == 4);
}

TEST_CASE("pseudosphere S^3_1 satisfies the full axiom suite", "[mixed3]") {
  MetricMixed mm = make_pseudosphere(0);
  Tolerances tol;
  SamplePlan plan{8, 11, 0.1};
  for (int a = 1; a <= 3; ++a)
    CHECK(max_over(check_contact(mm.mixed.triple(a), plan, tol, false)) < 1e-9);
  CHECK(max_over(check_mixed_axioms(mm.mixed, plan, tol, false)) < 1e-9);
  CHECK(max_over(check_metric_compatibility(mm, plan, tol, false)) < 1e-9);

  for (const Vec& p : sample_points(*mm.g.chart, SamplePlan{4, 12, 0.1}))
    CHECK(signature(mm.g.eval(p)) == Signature{1, 2});
}

TEST_CASE("pseudosphere eta agrees with the metric dual of xi", "[mixed3]") {
  MetricMixed mm = make_pseudosphere(0);
  for (const Vec& p : sample_points(*mm.g.chart, SamplePlan{6, 13, 0.1})) {
    Mat gx = mm.g.eval(p);
    for (int a = 1; a <= 3; ++a) {
      Vec xi = mm.mixed.triple(a).xi.eval(p);
      Vec eta = mm.mixed.triple(a).eta.eval(p);
      CHECK(residual_norm(Vec(gx * xi), eta) < 1e-9);
    }
  }
}

TEST_CASE("pseudosphere is mixed Sasakian", "[mixed3]") {
  MetricMixed mm = make_pseudosphere(0);
  Tolerances tol;
  FDScheme fd;
  SamplePlan plan{5, 14, 0.1};
  for (const auto& c : sasakian_defect(mm, fd, plan, tol)) {
    CHECK(c.residual < 5e-3);
    CHECK(c.verdict == Verdict::pass);
  }
}

TEST_CASE("flat R^7 mixed structure is not Sasakian", "[mixed3]") {
  auto chart = make_box_chart("r7", 7, -1.0, 1.0);
  Tolerances tol;
  MixedTriple m = block_mixed_triple(chart);
  Mat seed = Mat::Identity(7, 7);
  seed.bottomRightCorner(4, 4) = test::split_metric(4);
  MetricMixed mm(m, compatible_metric(m, constant_metric(chart, seed)));
  auto checks = sasakian_defect(mm, FDScheme{}, SamplePlan{3, 15, 0.1}, tol);
  // flat connection makes nabla phi = 0, so the defect is the full right side
  for (const auto& c : checks) CHECK(c.residual > 0.1);
}

TEST_CASE("mixed triple constructor rejects bad dimensions and signs", "[mixed3]") {
  auto chart4 = make_box_chart("r4", 4, -1.0, 1.0);
  R3Data d;
  Mat z4 = Mat::Zero(4, 4);
  CHECK_THROWS_AS(
      MixedTriple(ContactTriple(constant_operator(chart4, z4), constant_field(chart4, Vec(Vec::Zero(4))),
                                constant_field(chart4, Vec(Vec::Zero(4))), +1),
                  ContactTriple(constant_operator(chart4, z4), constant_field(chart4, Vec(Vec::Zero(4))),
                                constant_field(chart4, Vec(Vec::Zero(4))), -1),
                  ContactTriple(constant_operator(chart4, z4), constant_field(chart4, Vec(Vec::Zero(4))),
                                constant_field(chart4, Vec(Vec::Zero(4))), -1)),
      IncompatibleInputs);

  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  CHECK_THROWS_AS(
      MixedTriple(ContactTriple(constant_operator(chart, d.phi[1]), constant_field(chart, d.xi[1]),
                                constant_field(chart, d.eta[1]), -1),
                  ContactTriple(constant_operator(chart, d.phi[2]), constant_field(chart, d.xi[2]),
                                constant_field(chart, d.eta[2]), -1),
                  ContactTriple(constant_operator(chart, d.phi[3]), constant_field(chart, d.xi[3]),
                                constant_field(chart, d.eta[3]), -1)),
      IncompatibleInputs);
}
