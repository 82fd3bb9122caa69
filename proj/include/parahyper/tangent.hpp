#ifndef PARAHYPER_TANGENT_HPP
#define PARAHYPER_TANGENT_HPP

// Tangent-bundle machinery over a chart: induced coordinates (x, u),
// horizontal/vertical lifts, the connection map, the Sasaki metric, the
// lifted almost para-hypercomplex triple of an almost para-hermitian base,
// and the closed-form bracket / Nijenhuis identities it satisfies.
//
// Coordinate conventions on the 2m-dimensional total chart:
//   X^h = (X, -C X)   with  C(x,u)^k_i = G^k_{ij}(x) u^j,
//   X^v = (0, X),
//   K(a, b) = b + C a,   pi_*(a, b) = a.
// These are the unique formulas satisfying pi_* X^h = X, pi_* X^v = 0,
// K X^h = 0, K X^v = X.

#include <array>
#include <string>
#include <vector>

#include "parahyper/report.hpp"
#include "parahyper/smooth.hpp"
#include "parahyper/structures.hpp"

namespace parahyper {

struct TangentChart {
  ChartPtr base;
  ChartPtr total;  // (x, u), fiber box symmetric about 0
  AffineConnection conn;
  double fiber_half_width;
};

inline TangentChart make_tangent_chart(ChartPtr base, AffineConnection conn,
                                       double fiber_half_width = 1.0) {
  detail::require_same_chart(base, conn.chart);
  const int m = base->dim();
  Vec lo(2 * m), hi(2 * m);
  lo.head(m) = base->lo;
  hi.head(m) = base->hi;
  lo.tail(m) = Vec::Constant(m, -fiber_half_width);
  hi.tail(m) = Vec::Constant(m, fiber_half_width);
  ChartPtr total = make_chart(base->name + "|T", lo, hi);
  return TangentChart{base, total, std::move(conn), fiber_half_width};
}

namespace detail {

// C(x,u) a = Gamma(x)(u, a); as a matrix C^k_i = G^k_{ij} u^j.
inline Mat gamma_fiber_matrix(const Christoffel& gamma, const Vec& u) {
  const int m = static_cast<int>(gamma.size());
  Mat c(m, m);
  for (int k = 0; k < m; ++k) c.row(k) = (gamma[k] * u).transpose();
  return c;
}

}  // namespace detail

inline Mat tangent_fiber_matrix(const TangentChart& tc, const Vec& z) {
  const int m = tc.base->dim();
  return detail::gamma_fiber_matrix(tc.conn.christoffel(z.head(m)), z.tail(m));
}

// K(z, V) = b + C a for V = (a, b) at z = (x, u).
inline Vec connection_map(const TangentChart& tc, const Vec& z, const Vec& v) {
  const int m = tc.base->dim();
  if (z.size() != 2 * m || v.size() != 2 * m)
    throw DimensionMismatch("connection_map expects total-chart points and vectors");
  Mat c = tangent_fiber_matrix(tc, z);
  return v.tail(m) + c * v.head(m);
}

inline Vec tangent_projection(const TangentChart& tc, const Vec& v) {
  return v.head(tc.base->dim());
}

inline VectorField horizontal_lift(const TangentChart& tc, const VectorField& X) {
  detail::require_same_chart(tc.base, X.chart);
  auto xe = X.eval;
  auto gammae = tc.conn.christoffel;
  const int m = tc.base->dim();
  return VectorField{tc.total, [xe, gammae, m](const Vec& z) -> Vec {
    Vec x = z.head(m), u = z.tail(m);
    Vec xv = xe(x);
    Mat c = detail::gamma_fiber_matrix(gammae(x), u);
    Vec out(2 * m);
    out.head(m) = xv;
    out.tail(m) = -c * xv;
    return out;
  }};
}

inline VectorField vertical_lift(const TangentChart& tc, const VectorField& X) {
  detail::require_same_chart(tc.base, X.chart);
  auto xe = X.eval;
  const int m = tc.base->dim();
  return VectorField{tc.total, [xe, m](const Vec& z) -> Vec {
    Vec out = Vec::Zero(2 * m);
    out.tail(m) = xe(z.head(m));
    return out;
  }};
}

// Lift a base-point vector to the horizontal/vertical subspace at z.
inline Vec lift_vector(const TangentChart& tc, const Vec& z, const Vec& w, bool horizontal) {
  const int m = tc.base->dim();
  Vec out = Vec::Zero(2 * m);
  if (horizontal) {
    out.head(m) = w;
    out.tail(m) = -tangent_fiber_matrix(tc, z) * w;
  } else {
    out.tail(m) = w;
  }
  return out;
}

// G(V, W) = g(KV, KW) + g(pi_* V, pi_* W); in block form
//   [[ g + C^T g C,  C^T g ], [ g C,  g ]].
inline MetricField sasaki_metric(const TangentChart& tc, const MetricField& g) {
  detail::require_same_chart(tc.base, g.chart);
  auto ge = g.eval;
  auto gammae = tc.conn.christoffel;
  const int m = tc.base->dim();
  return MetricField{tc.total, [ge, gammae, m](const Vec& z) -> Mat {
    Vec x = z.head(m), u = z.tail(m);
    Mat gx = ge(x);
    Mat c = detail::gamma_fiber_matrix(gammae(x), u);
    Mat out(2 * m, 2 * m);
    out.topLeftCorner(m, m) = gx + c.transpose() * gx * c;
    out.topRightCorner(m, m) = c.transpose() * gx;
    out.bottomLeftCorner(m, m) = gx * c;
    out.bottomRightCorner(m, m) = gx;
    return out;
  }};
}

// The lifted almost para-hypercomplex structure of an almost para-hermitian
// base (P, g):
//   J1 X^h = X^v,      J1 X^v = -X^h,
//   J2 X^h = (PX)^v,   J2 X^v = (PX)^h,
//   J3 X^h = (PX)^h,   J3 X^v = -(PX)^v.
// In block coordinates: J1 = [[-C, -I], [I + C^2, C]],
//   J2 = [[PC, P], [P - CPC, -CP]],  J3 = [[P, 0], [-(CP + PC), -P]].
inline ParaHypercomplexTriple lift_structure(const TangentChart& tc, const OperatorField& P,
                                             const MetricField& g, const SamplePlan& plan,
                                             const Tolerances& tol) {
  detail::require_same_chart(tc.base, P.chart);
  detail::require_same_chart(tc.base, g.chart);
  // Pre: (P, g) almost para-hermitian, g(PX, PY) = -g(X, Y).
  double defect = 0.0;
  for (const Vec& x : sample_points(*tc.base, plan)) {
    Mat px = P.eval(x), gx = g.eval(x);
    defect = std::max(defect, residual_norm(pullback(gx, px), Mat(-gx)));
    defect = std::max(defect, residual_norm(Mat(px * px), Mat(Mat::Identity(px.rows(), px.cols()))));
  }
  if (defect > tol.algebra * 1e3)
    throw IncompatibleInputs("base pair is not almost para-hermitian (defect " +
                             std::to_string(defect) + ")");

  auto pe = P.eval;
  auto gammae = tc.conn.christoffel;
  const int m = tc.base->dim();
  auto blocks = [pe, gammae, m](const Vec& z, int which) -> Mat {
    Vec x = z.head(m), u = z.tail(m);
    Mat c = detail::gamma_fiber_matrix(gammae(x), u);
    Mat id = Mat::Identity(m, m);
    Mat out(2 * m, 2 * m);
    if (which == 1) {
      out.topLeftCorner(m, m) = -c;
      out.topRightCorner(m, m) = -id;
      out.bottomLeftCorner(m, m) = id + c * c;
      out.bottomRightCorner(m, m) = c;
    } else if (which == 2) {
      Mat p = pe(x);
      out.topLeftCorner(m, m) = p * c;
      out.topRightCorner(m, m) = p;
      out.bottomLeftCorner(m, m) = p - c * p * c;
      out.bottomRightCorner(m, m) = -c * p;
    } else {
      Mat p = pe(x);
      out.topLeftCorner(m, m) = p;
      out.topRightCorner(m, m).setZero();
      out.bottomLeftCorner(m, m) = -(c * p + p * c);
      out.bottomRightCorner(m, m) = -p;
    }
    return out;
  };
  OperatorField j1{tc.total, [blocks](const Vec& z) { return blocks(z, 1); }};
  OperatorField j2{tc.total, [blocks](const Vec& z) { return blocks(z, 2); }};
  OperatorField j3{tc.total, [blocks](const Vec& z) { return blocks(z, 3); }};
  return ParaHypercomplexTriple(std::move(j1), std::move(j2), std::move(j3));
}

// Connection-map identities: K(X^v) = X, K(X^h) = 0, pi_*(X^h) = X.
inline std::vector<Check> check_connection_map(const TangentChart& tc, const VectorField& X,
                                               const SamplePlan& plan, const Tolerances& tol) {
  auto points = sample_points(*tc.total, plan);
  VectorField xh = horizontal_lift(tc, X), xv = vertical_lift(tc, X);
  double r_v = 0.0, r_h = 0.0, r_pi = 0.0;
  const int m = tc.base->dim();
  for (const Vec& z : points) {
    Vec xval = X.eval(z.head(m));
    r_v = std::max(r_v, residual_norm(connection_map(tc, z, xv.eval(z)), xval));
    r_h = std::max(r_h, max_abs(connection_map(tc, z, xh.eval(z))));
    r_pi = std::max(r_pi, residual_norm(tangent_projection(tc, xh.eval(z)), xval));
  }
  return {make_check("K(Xv) = X", r_v, tol.algebra, "algebra", plan.count),
          make_check("K(Xh) = 0", r_h, tol.algebra, "algebra", plan.count),
          make_check("pi_*(Xh) = X", r_pi, tol.algebra, "algebra", plan.count)};
}

// The four bracket identities relating lifted fields to base-level data:
//   [Xh,Yh] = [X,Y]h - (R(X,Y)u)v,   [Xv,Yv] = 0,
//   [Xh,Yv] = (nabla_X Y)v,          [Xv,Yh] = -(nabla_Y X)v.
inline std::vector<Check> check_bracket_identities(const TangentChart& tc, const VectorField& X,
                                                   const VectorField& Y, const SamplePlan& plan,
                                                   FDScheme scheme, const Tolerances& tol) {
  detail::require_same_chart(tc.base, X.chart);
  detail::require_same_chart(tc.base, Y.chart);
  const int m = tc.base->dim();
  auto points = sample_points(*tc.total, plan);

  VectorField xh = horizontal_lift(tc, X), yh = horizontal_lift(tc, Y);
  VectorField xv = vertical_lift(tc, X), yv = vertical_lift(tc, Y);
  VectorField bhh = lie_bracket(xh, yh, scheme);
  VectorField bvv = lie_bracket(xv, yv, scheme);
  VectorField bhv = lie_bracket(xh, yv, scheme);
  VectorField bvh = lie_bracket(xv, yh, scheme);
  VectorField bxy = lie_bracket(X, Y, scheme);
  VectorField nxy = covariant_derivative(tc.conn, X, Y, scheme);
  VectorField nyx = covariant_derivative(tc.conn, Y, X, scheme);

  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  for (const Vec& z : points) {
    Vec x = z.head(m), u = z.tail(m);
    RiemannTensor R = riemann_tensor(tc.conn, x, scheme);
    Vec rxyu = R.apply(X.eval(x), Y.eval(x), u);
    Vec rhs1 = lift_vector(tc, z, bxy.eval(x), true) - lift_vector(tc, z, rxyu, false);
    r1 = std::max(r1, residual_norm(bhh.eval(z), rhs1));
    r2 = std::max(r2, max_abs(bvv.eval(z)));
    r3 = std::max(r3, residual_norm(bhv.eval(z), lift_vector(tc, z, nxy.eval(x), false)));
    r4 = std::max(r4, residual_norm(bvh.eval(z), Vec(-lift_vector(tc, z, nyx.eval(x), false))));
  }
  return {make_check("[Xh,Yh] = [X,Y]h - (R(X,Y)u)v", r1, tol.bracket, "bracket", plan.count),
          make_check("[Xv,Yv] = 0", r2, tol.bracket, "bracket", plan.count),
          make_check("[Xh,Yv] = (nabla_X Y)v", r3, tol.bracket, "bracket", plan.count),
          make_check("[Xv,Yh] = -(nabla_Y X)v", r4, tol.bracket, "bracket", plan.count)};
}

struct ClosedFormReport {
  std::vector<Check> agreement;  // one line per identity: |generic - closed form|
  double max_side = 0.0;         // max over identities and samples of max(|lhs|, |rhs|)
  double max_witness = 0.0;      // max over identities and samples of min(|lhs|, |rhs|)
};

// The twelve closed forms of the Nijenhuis tensors of the lifted triple,
// each compared against the generic bracket-based evaluation on the total
// chart. dP below is the covariant derivative of P on the base.
inline ClosedFormReport check_nijenhuis_closed_forms(const TangentChart& tc,
                                                     const OperatorField& P, const MetricField& g,
                                                     const VectorField& X, const VectorField& Y,
                                                     const SamplePlan& plan, FDScheme scheme,
                                                     const Tolerances& tol) {
  const int m = tc.base->dim();
  ParaHypercomplexTriple lifted = lift_structure(tc, P, g, plan, tol);
  VectorField xh = horizontal_lift(tc, X), yh = horizontal_lift(tc, Y);
  VectorField xv = vertical_lift(tc, X), yv = vertical_lift(tc, Y);

  // generic side: N_a on the four lift combinations
  struct Item {
    std::string name;
    int alpha;
    const VectorField *first, *second;
  };
  std::array<Item, 12> items = {{{"N1(Xh,Yh) = (R(X,Y)u)v", 1, &xh, &yh},
                                 {"N1(Xv,Yv) = -(R(X,Y)u)v", 1, &xv, &yv},
                                 {"N1(Xh,Yv) = (R(X,Y)u)h", 1, &xh, &yv},
                                 {"N1(Xv,Yh) = (R(X,Y)u)h", 1, &xv, &yh},
                                 {"N2(Xh,Yh) = (P(dP_Y)X - P(dP_X)Y)h - (R(X,Y)u)v", 2, &xh, &yh},
                                 {"N2(Xv,Yv) = ((dP_PX)Y - (dP_PY)X)h - (R(PX,PY)u)v", 2, &xv, &yv},
                                 {"N2(Xh,Yv) = -(P(dP_X)Y + (dP_PY)X)v + (PR(X,PY)u)h", 2, &xh, &yv},
                                 {"N2(Xv,Yh) = ((dP_PX)Y + P(dP_Y)X)v + (PR(PX,Y)u)h", 2, &xv, &yh},
                                 {"N3(Xh,Yh) = (4 dP terms)h - (4 R terms)v", 3, &xh, &yh},
                                 {"N3(Xv,Yv) = 0", 3, &xv, &yv},
                                 {"N3(Xh,Yv) = (-(dP_PX)Y + (dP_X)PY)v", 3, &xh, &yv},
                                 {"N3(Xv,Yh) = ((dP_PY)X - (dP_Y)PX)v", 3, &xv, &yh}}};

  std::array<double, 12> residual{}, side{}, witness{};
  auto points = sample_points(*tc.total, plan);
  for (const Vec& z : points) {
    Vec x = z.head(m), u = z.tail(m);
    Mat p = P.eval(x);
    Vec xb = X.eval(x), yb = Y.eval(x);
    Vec pxb = p * xb, pyb = p * yb;
    RiemannTensor R = riemann_tensor(tc.conn, x, scheme);
    std::vector<Mat> dp = covariant_derivative_operator(tc.conn, P, x, scheme);
    auto dP = [&](const Vec& along, const Vec& arg) -> Vec {
      Vec out = Vec::Zero(m);
      for (int i = 0; i < m; ++i)
        if (along[i] != 0.0) out += along[i] * (dp[i] * arg);
      return out;
    };
    auto h = [&](const Vec& w) { return lift_vector(tc, z, w, true); };
    auto v = [&](const Vec& w) { return lift_vector(tc, z, w, false); };

    std::array<Vec, 12> rhs;
    Vec rxy_u = R.apply(xb, yb, u);
    rhs[0] = v(rxy_u);
    rhs[1] = Vec(-v(rxy_u));
    rhs[2] = h(rxy_u);
    rhs[3] = h(rxy_u);
    rhs[4] = h(Vec(p * dP(yb, xb) - p * dP(xb, yb))) - v(rxy_u);
    rhs[5] = h(Vec(dP(pxb, yb) - dP(pyb, xb))) - v(R.apply(pxb, pyb, u));
    rhs[6] = Vec(-v(Vec(p * dP(xb, yb) + dP(pyb, xb)))) + h(Vec(p * R.apply(xb, pyb, u)));
    rhs[7] = v(Vec(dP(pxb, yb) + p * dP(yb, xb))) + h(Vec(p * R.apply(pxb, yb, u)));
    rhs[8] = h(Vec(dP(xb, pyb) - dP(pyb, xb) + dP(pxb, yb) + p * dP(yb, xb))) -
             v(Vec(rxy_u + R.apply(pxb, pyb, u) + p * R.apply(pxb, yb, u) +
                   p * R.apply(xb, pyb, u)));
    rhs[9] = Vec(Vec::Zero(2 * m));
    rhs[10] = v(Vec(-dP(pxb, yb) + dP(xb, pyb)));
    rhs[11] = v(Vec(dP(pyb, xb) - dP(yb, pxb)));

    for (int i = 0; i < 12; ++i) {
      const Item& it = items[i];
      Vec lhs = nijenhuis(lifted.structure(it.alpha), *it.first, *it.second, scheme).eval(z);
      residual[i] = std::max(residual[i], residual_norm(lhs, rhs[i]));
      side[i] = std::max(side[i], std::max(max_abs(lhs), max_abs(rhs[i])));
      witness[i] = std::max(witness[i], std::min(max_abs(lhs), max_abs(rhs[i])));
    }
  }
  ClosedFormReport report;
  for (int i = 0; i < 12; ++i) {
    report.agreement.push_back(
        make_check(items[i].name, residual[i], tol.nested, "nested", plan.count));
    report.max_side = std::max(report.max_side, side[i]);
    report.max_witness = std::max(report.max_witness, witness[i]);
  }
  return report;
}

}  // namespace parahyper

#endif
