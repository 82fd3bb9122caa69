#include <catch2/catch.hpp>
#include <cmath>

#include "parahyper/smooth.hpp"

using namespace parahyper;

namespace {

// Round 2-sphere in polar coordinates, g = diag(1, sin^2 theta).
MetricField sphere_polar_metric(ChartPtr chart) {
  return MetricField{chart, [](const Vec& x) -> Mat {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
    return g;
  }};
}

// Graph chart of the unit sphere <x,x> = 1 in flat R^{m+1} with diagonal
// metric signs (+1, s...), solved for the first ambient coordinate. Written
// from the hand-derived closed form, independently of the catalog builder:
//   g_ij = s_i d_ij + s_i s_j y_i y_j / x0^2,  x0^2 = 1 - sum s_i y_i^2.
MetricField graph_sphere_metric(ChartPtr chart, Vec tangent_signs) {
  return MetricField{chart, [signs = std::move(tangent_signs)](const Vec& y) -> Mat {
    const int m = static_cast<int>(y.size());
    double x0sq = 1.0;
    for (int i = 0; i < m; ++i) x0sq -= signs[i] * y[i] * y[i];
    Mat g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        g(i, j) = (i == j ? signs[i] : 0.0) + signs[i] * signs[j] * y[i] * y[j] / x0sq;
    return g;
  }};
}

}  // namespace

TEST_CASE("directional derivative on simple fields", "[smooth]") {
  auto chart = make_box_chart("line", 1, -2.0, 2.0);
  FDScheme fd;
  ScalarField sq{chart, [](const Vec& x) { return x[0] * x[0]; }};
  Vec p(1);
  p << 1.0;
  CHECK(directional_derivative(sq, p, 0, fd) == Approx(2.0).margin(1e-8));

  ScalarField cst{chart, [](const Vec&) { return 3.5; }};
  CHECK(directional_derivative(cst, p, 0, fd) == Approx(0.0).margin(1e-12));

  auto plane = make_box_chart("plane", 2, -3.0, 3.0);
  VectorField f{plane, [](const Vec& x) -> Vec {
    Vec v(2);
    v << x[1], x[0] * x[0];
    return v;
  }};
  Vec q(2);
  q << 1.0, 2.0;
  Vec dx = directional_derivative(f, q, 0, fd);
  CHECK(dx[0] == Approx(0.0).margin(1e-9));
  CHECK(dx[1] == Approx(2.0).margin(1e-8));
}

TEST_CASE("directional derivative stencil orders and domain checks", "[smooth]") {
  auto chart = make_box_chart("line", 1, -2.0, 2.0);
  ScalarField f{chart, [](const Vec& x) { return std::sin(x[0]); }};
  Vec p(1);
  p << 0.7;
  FDScheme fd2{1e-2, 2}, fd4{1e-2, 4};
  double exact = std::cos(0.7);
  double err2 = std::abs(directional_derivative(f, p, 0, fd2) - exact);
  double err4 = std::abs(directional_derivative(f, p, 0, fd4) - exact);
  CHECK(err4 < err2 / 100.0);

  Vec outside(1);
  outside << 5.0;
  CHECK_THROWS_AS(directional_derivative(f, outside, 0, fd2), OutOfDomain);
}

TEST_CASE("halving the step quarters order-2 residuals", "[smooth]") {
  auto chart = make_box_chart("plane", 2, -2.0, 2.0);
  ScalarField f{chart, [](const Vec& x) { return std::sin(1.3 * x[0]) * std::exp(0.2 * x[1]); }};
  Vec p(2);
  p << 0.4, -0.3;
  double exact = 1.3 * std::cos(1.3 * 0.4) * std::exp(0.2 * -0.3);
  double eh = std::abs(directional_derivative(f, p, 0, FDScheme{1e-2, 2}) - exact);
  double eh2 = std::abs(directional_derivative(f, p, 0, FDScheme{5e-3, 2}) - exact);
  double ratio = eh / eh2;
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("lie bracket basics", "[smooth]") {
  auto chart = make_box_chart("plane", 2, -2.0, 2.0);
  FDScheme fd;
  VectorField X{chart, [](const Vec&) -> Vec { return Vec::Constant(2, 1.0); }};
  Vec p(2);
  p << 0.3, 0.4;
  CHECK(max_abs(lie_bracket(X, X, fd).eval(p)) < 1e-12);

  VectorField Y{chart, [](const Vec&) -> Vec {
    Vec v(2);
    v << 2.0, -1.0;
    return v;
  }};
  CHECK(max_abs(lie_bracket(X, Y, fd).eval(p)) < 1e-12);

  // X = (1,0), Y = (0, x1): [X,Y] = (0,1).
  VectorField e1{chart, [](const Vec&) -> Vec {
    Vec v(2);
    v << 1.0, 0.0;
    return v;
  }};
  VectorField Z{chart, [](const Vec& x) -> Vec {
    Vec v(2);
    v << 0.0, x[0];
    return v;
  }};
  Vec expect(2);
  expect << 0.0, 1.0;
  CHECK(residual_norm(lie_bracket(e1, Z, fd).eval(p), expect) < 1e-9);

  auto other = make_box_chart("other", 2, -1.0, 1.0);
  VectorField W{other, [](const Vec&) -> Vec { return Vec::Zero(2); }};
  CHECK_THROWS_AS(lie_bracket(X, W, fd), ChartMismatch);
}

TEST_CASE("lie bracket satisfies the Jacobi identity", "[smooth]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  FDScheme fd;
  SamplePlan plan{5, 77, 0.2};
  VectorField X = random_polynomial_field(chart, 11);
  VectorField Y = random_polynomial_field(chart, 22);
  VectorField Z = random_polynomial_field(chart, 33);
  VectorField a = lie_bracket(X, lie_bracket(Y, Z, fd), fd);
  VectorField b = lie_bracket(Y, lie_bracket(Z, X, fd), fd);
  VectorField c = lie_bracket(Z, lie_bracket(X, Y, fd), fd);
  for (const Vec& p : sample_points(*chart, plan)) {
    Vec sum = a.eval(p) + b.eval(p) + c.eval(p);
    CHECK(max_abs(sum) < 1e-6);
  }
}

TEST_CASE("levi-civita of a flat metric vanishes", "[smooth]") {
  auto chart = make_box_chart("r2", 2, -1.0, 1.0);
  Vec d(2);
  d << 1.0, -1.0;
  MetricField g = constant_metric(chart, Mat(d.asDiagonal()));
  auto conn = levi_civita(g, FDScheme{});
  Vec p(2);
  p << 0.2, -0.4;
  for (const Mat& gk : conn.christoffel(p)) CHECK(max_abs(gk) < 1e-12);
}

TEST_CASE("levi-civita matches the polar sphere oracle", "[smooth]") {
  Vec lo(2), hi(2);
  lo << 0.4, 0.1;
  hi << M_PI - 0.4, 2.0;
  auto chart = make_chart("s2-polar", lo, hi);
  MetricField g = sphere_polar_metric(chart);
  auto conn = levi_civita(g, FDScheme{});
  Vec p(2);
  p << 1.1, 0.7;
  Christoffel gamma = conn.christoffel(p);
  double theta = p[0];
  // Gamma^theta_{phi phi} = -sin cos, Gamma^phi_{theta phi} = cot
  CHECK(gamma[0](1, 1) == Approx(-std::sin(theta) * std::cos(theta)).margin(1e-7));
  CHECK(gamma[1](0, 1) == Approx(std::cos(theta) / std::sin(theta)).margin(1e-7));
  CHECK(std::abs(gamma[0](0, 0)) < 1e-8);

  // torsion-free: symmetric lower indices, exact up to assembly roundoff
  for (int k = 0; k < 2; ++k) CHECK(residual_norm(gamma[k], Mat(gamma[k].transpose())) < 1e-14);
}

TEST_CASE("levi-civita matches the conformal oracle", "[smooth]") {
  auto chart = make_box_chart("conf2", 2, -1.0, 1.0);
  MetricField g{chart, [](const Vec& x) -> Mat {
    return Mat(std::exp(2.0 * x[0]) * Mat::Identity(2, 2));
  }};
  auto conn = levi_civita(g, FDScheme{});
  Vec p(2);
  p << 0.1, -0.2;
  Christoffel gamma = conn.christoffel(p);
  // From the Koszul formula with f = x1: G^1_11 = 1, G^1_22 = -1, G^2_12 = 1.
  CHECK(gamma[0](0, 0) == Approx(1.0).margin(1e-7));
  CHECK(gamma[0](1, 1) == Approx(-1.0).margin(1e-7));
  CHECK(gamma[1](0, 1) == Approx(1.0).margin(1e-7));
  CHECK(std::abs(gamma[1](0, 0)) < 1e-8);
}

TEST_CASE("levi-civita is metric compatible", "[smooth]") {
  Vec lo(2), hi(2);
  lo << 0.4, 0.1;
  hi << M_PI - 0.4, 2.0;
  auto chart = make_chart("s2-polar", lo, hi);
  MetricField g = sphere_polar_metric(chart);
  FDScheme fd;
  auto conn = levi_civita(g, fd);
  OperatorField gop{chart, g.eval};
  for (const Vec& p : sample_points(*chart, SamplePlan{8, 5, 0.1})) {
    Christoffel gamma = conn.christoffel(p);
    Mat gx = g.eval(p);
    for (int i = 0; i < 2; ++i) {
      Mat dgi = directional_derivative(gop, p, i, fd);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double resid = dgi(j, k);
          for (int l = 0; l < 2; ++l)
            resid -= gamma[l](i, j) * gx(l, k) + gamma[l](i, k) * gx(j, l);
          CHECK(std::abs(resid) < 1e-6);
        }
    }
  }
}

TEST_CASE("levi-civita rejects degenerate metrics", "[smooth]") {
  auto chart = make_box_chart("r2", 2, -1.0, 1.0);
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  MetricField g = constant_metric(chart, z);
  auto conn = levi_civita(g, FDScheme{});
  Vec p = Vec::Zero(2);
  CHECK_THROWS_AS(conn.christoffel(p), DegenerateMetric);
}

TEST_CASE("curvature of a flat connection vanishes", "[smooth]") {
  auto chart = make_box_chart("r2", 2, -1.0, 1.0);
  MetricField g = constant_metric(chart, Mat(Mat::Identity(2, 2)));
  FDScheme fd;
  auto conn = levi_civita(g, fd);
  VectorField X = random_polynomial_field(chart, 3);
  VectorField Y = random_polynomial_field(chart, 4);
  VectorField Z = random_polynomial_field(chart, 5);
  Vec p(2);
  p << 0.1, 0.2;
  CHECK(max_abs(curvature(conn, X, Y, Z, fd).eval(p)) < 1e-6);
  CHECK(max_abs(curvature(conn, X, X, Z, fd).eval(p)) < 1e-6);
}

TEST_CASE("sectional curvature of the unit 2-sphere is one", "[smooth]") {
  Vec lo(2), hi(2);
  lo << 0.5, 0.2;
  hi << M_PI - 0.5, 1.8;
  auto chart = make_chart("s2-polar", lo, hi);
  MetricField g = sphere_polar_metric(chart);
  FDScheme fd;
  auto conn = levi_civita(g, fd);
  VectorField X = constant_field(chart, Vec::Unit(2, 0));
  VectorField Y = constant_field(chart, Vec::Unit(2, 1));
  Vec p(2);
  p << 1.2, 0.8;
  // g(R(X,Y)Y, X) = sin^2(theta) for coordinate fields on the unit sphere;
  // dividing by the area element squared gives sectional curvature 1.
  Vec r = curvature(conn, X, Y, Y, fd).eval(p);
  double sec = r.dot(g.eval(p) * Vec::Unit(2, 0));
  CHECK(sec == Approx(std::sin(p[0]) * std::sin(p[0])).margin(5e-4));

  // antisymmetry in X,Y via the nested-derivative route
  Vec rsym = curvature(conn, X, Y, Y, fd).eval(p) + curvature(conn, Y, X, Y, fd).eval(p);
  CHECK(max_abs(rsym) < 1e-4);
}

TEST_CASE("operator and coordinate curvature routes agree", "[smooth]") {
  Vec lo(2), hi(2);
  lo << 0.5, 0.2;
  hi << M_PI - 0.5, 1.8;
  auto chart = make_chart("s2-polar", lo, hi);
  MetricField g = sphere_polar_metric(chart);
  FDScheme fd;
  auto conn = levi_civita(g, fd);
  VectorField X = random_polynomial_field(chart, 8, 0.5);
  VectorField Y = random_polynomial_field(chart, 9, 0.5);
  VectorField Z = random_polynomial_field(chart, 10, 0.5);
  Vec p(2);
  p << 1.0, 0.9;
  Vec via_operator = curvature(conn, X, Y, Z, fd).eval(p);
  Vec via_tensor = riemann_tensor(conn, p, fd).apply(X.eval(p), Y.eval(p), Z.eval(p));
  CHECK(residual_norm(via_operator, via_tensor) < 1e-3);
}

TEST_CASE("ricci of flat space vanishes", "[smooth]") {
  auto chart = make_box_chart("r3", 3, -1.0, 1.0);
  Vec d(3);
  d << 1.0, -1.0, 1.0;
  MetricField g = constant_metric(chart, Mat(d.asDiagonal()));
  Vec p(3);
  p << 0.1, -0.2, 0.3;
  CHECK(max_abs(ricci(g, p, FDScheme{})) < 1e-10);
}

TEST_CASE("ricci of the unit round 3-sphere is 2g", "[smooth]") {
  auto chart = make_box_chart("s3-graph", 3, -0.4, 0.4);
  MetricField g = graph_sphere_metric(chart, Vec::Constant(3, 1.0));
  FDScheme fd;
  for (const Vec& p : sample_points(*chart, SamplePlan{4, 9, 0.15})) {
    Mat ric = ricci(g, p, fd);
    CHECK(residual_norm(ric, Mat(ric.transpose())) < 5e-3);
    CHECK(residual_norm(ric, Mat(2.0 * g.eval(p))) < 5e-3);
  }
}

TEST_CASE("ricci of the unit pseudosphere S^3_1 is 2g", "[smooth]") {
  auto chart = make_box_chart("s31-graph", 3, -0.4, 0.4);
  Vec signs(3);
  signs << 1.0, -1.0, -1.0;
  MetricField g = graph_sphere_metric(chart, signs);
  FDScheme fd;
  for (const Vec& p : sample_points(*chart, SamplePlan{4, 10, 0.15})) {
    CHECK(residual_norm(ricci(g, p, fd), Mat(2.0 * g.eval(p))) < 5e-3);
  }
  CHECK(signature(g.eval(Vec::Zero(3))) == Signature{1, 2});
}

TEST_CASE("sampling is deterministic and margin aware", "[smooth]") {
  auto chart = make_box_chart("r2", 2, -1.0, 1.0);
  SamplePlan plan{10, 42, 0.1};
  auto a = sample_points(*chart, plan);
  auto b = sample_points(*chart, plan);
  REQUIRE(a.size() == 10);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(residual_norm(a[i], b[i]) == 0.0);
    CHECK(chart->contains(a[i]));
    CHECK(a[i].cwiseAbs().maxCoeff() <= 0.8 + 1e-12);
  }
  SamplePlan other{10, 43, 0.1};
  CHECK(residual_norm(a[0], sample_points(*chart, other)[0]) > 0.0);
}
