#ifndef PARAHYPER_STRUCTURES_HPP
#define PARAHYPER_STRUCTURES_HPP

// Almost product / complex / para-hypercomplex structure algebra: structure
// equation checks, metric compatibility and averaging, adapted frames, the
// Nijenhuis tensor, and the two-imply-third integrability identity.
//
// Sign bookkeeping: a StructureField carries eps with
//   eps = +1  for an almost complex structure  (J^2 = -Id),
//   eps = -1  for an almost product structure  (P^2 = +Id),
// so the structure equation is uniformly s^2 = -eps * Id, and a triple
// (J1, J2, J3) has eps = (+1, -1, -1) with J2 J1 = -J1 J2 = J3.

#include <cmath>
#include <string>
#include <vector>

#include "parahyper/report.hpp"
#include "parahyper/smooth.hpp"

namespace parahyper {

struct StructureField {
  OperatorField op;
  int eps = 1;  // +1 complex, -1 product

  StructureField(OperatorField op_, int eps_) : op(std::move(op_)), eps(eps_) {
    if (eps != 1 && eps != -1) throw IncompatibleInputs("structure sign must be +1 or -1");
  }
};

struct ParaHypercomplexTriple {
  StructureField j1, j2, j3;

  ParaHypercomplexTriple(OperatorField j1_, OperatorField j2_, OperatorField j3_)
      : j1(std::move(j1_), +1), j2(std::move(j2_), -1), j3(std::move(j3_), -1) {
    detail::require_same_chart(j1.op.chart, j2.op.chart);
    detail::require_same_chart(j2.op.chart, j3.op.chart);
    if (j1.op.chart->dim() % 4 != 0)
      throw IncompatibleInputs("para-hypercomplex structures need dimension 4n, got " +
                               std::to_string(j1.op.chart->dim()));
  }

  ChartPtr chart() const { return j1.op.chart; }
  const StructureField& structure(int alpha) const {
    switch (alpha) {
      case 1: return j1;
      case 2: return j2;
      default: return j3;
    }
  }
};

// Distance of `m` from the nearer of +Id / -Id; positive means nontrivial.
inline double nontriviality(const Mat& m) {
  Mat id = Mat::Identity(m.rows(), m.cols());
  return std::min(residual_norm(m, id), residual_norm(m, Mat(-id)));
}

// s(x)^2 + eps * Id residual over the sample plan; product structures must
// additionally stay away from +-Id (witnessed pointwise).
inline std::vector<Check> check_structure(const StructureField& s, const SamplePlan& plan,
                                          const Tolerances& tol, bool constant_coefficients,
                                          const std::string& label = "s") {
  auto points = sample_points(*s.op.chart, plan);
  const int n = s.op.chart->dim();
  Mat id = Mat::Identity(n, n);
  double res = 0.0;
  double witness = std::numeric_limits<double>::infinity();
  for (const Vec& x : points) {
    Mat v = s.op.eval(x);
    res = std::max(res, residual_norm(Mat(v * v), Mat(-s.eps * id)));
    if (s.eps == -1) witness = std::min(witness, nontriviality(v));
  }
  double t = constant_coefficients ? tol.exact : tol.algebra;
  std::string tname = constant_coefficients ? "exact" : "algebra";
  std::vector<Check> out;
  std::string sq = s.eps == 1 ? "^2 = -I" : "^2 = I";
  out.push_back(make_check(label + sq, res, t, tname, plan.count));
  if (s.eps == -1)
    out.push_back(make_witness(label + " != +/-I", witness, 1e-6, plan.count));
  return out;
}

// J2 J1 = J3 and J1 J2 = -J3 residuals.
inline std::vector<Check> check_triple(const ParaHypercomplexTriple& t, const SamplePlan& plan,
                                       const Tolerances& tol, bool constant_coefficients) {
  auto points = sample_points(*t.chart(), plan);
  double res21 = 0.0, res12 = 0.0;
  for (const Vec& x : points) {
    Mat a = t.j1.op.eval(x), b = t.j2.op.eval(x), c = t.j3.op.eval(x);
    res21 = std::max(res21, residual_norm(Mat(b * a), c));
    res12 = std::max(res12, residual_norm(Mat(a * b), Mat(-c)));
  }
  double tv = constant_coefficients ? tol.exact : tol.algebra;
  std::string tname = constant_coefficients ? "exact" : "algebra";
  return {make_check("J2*J1 = J3", res21, tv, tname, plan.count),
          make_check("J1*J2 = -J3", res12, tv, tname, plan.count)};
}

inline double triple_eps(int alpha) { return alpha == 1 ? 1.0 : -1.0; }

// max over samples and alpha of | g(J_a ., J_a .) - eps_a g |.
inline std::vector<Check> compatibility_defect(const MetricField& g,
                                               const ParaHypercomplexTriple& t,
                                               const SamplePlan& plan, const Tolerances& tol,
                                               bool constant_coefficients) {
  detail::require_same_chart(g.chart, t.chart());
  auto points = sample_points(*g.chart, plan);
  double res = 0.0;
  for (const Vec& x : points) {
    Mat gx = g.eval(x);
    if (is_degenerate(gx, tol.degeneracy)) throw DegenerateMetric("compatibility_defect at sample");
    for (int alpha = 1; alpha <= 3; ++alpha) {
      Mat jx = t.structure(alpha).op.eval(x);
      res = std::max(res, residual_norm(pullback(gx, jx), Mat(triple_eps(alpha) * gx)));
    }
  }
  double tv = constant_coefficients ? tol.exact : tol.algebra;
  std::string tname = constant_coefficients ? "exact" : "algebra";
  return {make_check("g(Ja.,Ja.) = eps_a*g", res, tv, tname, plan.count)};
}

// g = 1/4 [ h + sum_a eps_a h(J_a ., J_a .) ]. The averaged form can be
// degenerate for special seeds; evaluation raises DegenerateResult there.
inline MetricField average_metric(const MetricField& h, const ParaHypercomplexTriple& t,
                                  double degeneracy_threshold = kDegeneracyThreshold) {
  detail::require_same_chart(h.chart, t.chart());
  auto he = h.eval;
  auto j1 = t.j1.op.eval, j2 = t.j2.op.eval, j3 = t.j3.op.eval;
  ChartPtr chart = h.chart;
  return MetricField{chart, [he, j1, j2, j3, chart, degeneracy_threshold](const Vec& x) -> Mat {
    Mat hx = he(x);
    Mat g = 0.25 * (hx + pullback(hx, j1(x)) - pullback(hx, j2(x)) - pullback(hx, j3(x)));
    if (is_degenerate(g, degeneracy_threshold))
      throw DegenerateResult("averaging on chart " + chart->name);
    return g;
  }};
}

// Pseudo-orthonormal frame {E_i, J1 E_i, J2 E_i, J3 E_i} at a point. The Gram
// matrix comes out diagonal +-1 with split signature (2n, 2n).
inline std::vector<Vec> adapted_frame(const MetricField& g, const ParaHypercomplexTriple& t,
                                      const Vec& point, const Tolerances& tol) {
  detail::require_same_chart(g.chart, t.chart());
  const int n = g.chart->dim();
  Mat gx = g.eval(point);
  if (is_degenerate(gx, tol.degeneracy)) throw DegenerateMetric("adapted_frame");
  Mat j[3] = {t.j1.op.eval(point), t.j2.op.eval(point), t.j3.op.eval(point)};
  for (int a = 0; a < 3; ++a) {
    double eps = a == 0 ? 1.0 : -1.0;
    if (residual_norm(pullback(gx, j[a]), Mat(eps * gx)) > 1e3 * tol.algebra * std::max(1.0, max_abs(gx)))
      throw IncompatibleInputs("metric not compatible with the triple at the frame point");
  }
  std::vector<Vec> frame;
  std::vector<double> signs;
  std::uint64_t state = 0x51ed2701u;
  int candidate = 0;
  while (static_cast<int>(frame.size()) < n) {
    Vec c(n);
    if (candidate < n) {
      c = Vec::Unit(n, candidate);
    } else {
      if (candidate > n + 200) throw DegenerateMetric("adapted_frame could not complete a frame");
      for (int i = 0; i < n; ++i) c[i] = 2.0 * detail::unit_double(state) - 1.0;
    }
    ++candidate;
    Vec e = detail::project_off(c, gx, frame, signs);
    double q = e.dot(gx * e);
    if (std::abs(q) < 1e-6 * std::max(1.0, e.squaredNorm())) continue;
    e /= std::sqrt(std::abs(q));
    for (const Mat& m : {Mat::Identity(n, n).eval(), j[0], j[1], j[2]}) {
      Vec f = m * e;
      frame.push_back(f);
      signs.push_back(f.dot(gx * f));
    }
  }
  return frame;
}

// N(X,Y) = [sX, sY] - s[X, sY] - s[sX, Y] - eps [X, Y].
inline VectorField nijenhuis(const StructureField& s, const VectorField& X, const VectorField& Y,
                             FDScheme scheme) {
  detail::require_same_chart(s.op.chart, X.chart);
  detail::require_same_chart(X.chart, Y.chart);
  VectorField sX = apply_operator(s.op, X);
  VectorField sY = apply_operator(s.op, Y);
  VectorField b1 = lie_bracket(sX, sY, scheme);
  VectorField b2 = apply_operator(s.op, lie_bracket(X, sY, scheme));
  VectorField b3 = apply_operator(s.op, lie_bracket(sX, Y, scheme));
  VectorField b4 = lie_bracket(X, Y, scheme);
  double eps = s.eps;
  return VectorField{X.chart, [b1, b2, b3, b4, eps](const Vec& p) -> Vec {
    return b1.eval(p) - b2.eval(p) - b3.eval(p) - eps * b4.eval(p);
  }};
}

// 2 N_a(X,Y) expressed through N_b and N_c for every even permutation
// (a, b, c) of (1, 2, 3); the identity behind "two integrable imply the
// third". Returns one residual line per permutation.
inline std::vector<Check> check_two_imply_third(const ParaHypercomplexTriple& t,
                                                const VectorField& X, const VectorField& Y,
                                                FDScheme scheme, const SamplePlan& plan,
                                                const Tolerances& tol) {
  detail::require_same_chart(t.chart(), X.chart);
  auto points = sample_points(*X.chart, plan);
  const int perms[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
  std::vector<Check> out;
  for (auto& p : perms) {
    const StructureField& sa = t.structure(p[0]);
    const StructureField& sb = t.structure(p[1]);
    const StructureField& sc = t.structure(p[2]);
    double ea = sa.eps, eb = sb.eps, ec = sc.eps;

    VectorField jbX = apply_operator(sb.op, X), jbY = apply_operator(sb.op, Y);
    VectorField jcX = apply_operator(sc.op, X), jcY = apply_operator(sc.op, Y);

    VectorField lhs = nijenhuis(sa, X, Y, scheme);
    VectorField r1 = nijenhuis(sb, jcX, jcY, scheme);
    VectorField r2 = nijenhuis(sc, jbX, jbY, scheme);
    VectorField r3 = apply_operator(sb.op, nijenhuis(sc, jbX, Y, scheme));
    VectorField r4 = apply_operator(sb.op, nijenhuis(sc, X, jbY, scheme));
    VectorField r5 = apply_operator(sc.op, nijenhuis(sb, jcX, Y, scheme));
    VectorField r6 = apply_operator(sc.op, nijenhuis(sb, X, jcY, scheme));
    VectorField r7 = nijenhuis(sb, X, Y, scheme);
    VectorField r8 = nijenhuis(sc, X, Y, scheme);

    double res = 0.0;
    for (const Vec& x : points) {
      Vec rhs = r1.eval(x) + r2.eval(x) - r3.eval(x) - r4.eval(x) - r5.eval(x) - r6.eval(x) +
                ea * eb * r7.eval(x) + ea * ec * r8.eval(x);
      res = std::max(res, residual_norm(Vec(2.0 * lhs.eval(x)), rhs));
    }
    out.push_back(make_check("2N_" + std::to_string(p[0]) + " = N_" + std::to_string(p[1]) +
                                 ",N_" + std::to_string(p[2]) + " combination",
                             res, tol.integrability, "integrability", plan.count));
  }
  return out;
}

}  // namespace parahyper

#endif
