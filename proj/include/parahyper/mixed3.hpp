#ifndef PARAHYPER_MIXED3_HPP
#define PARAHYPER_MIXED3_HPP

// Mixed 3-structures: one almost contact structure (eps = +1) coupled with
// two Lorentzian almost paracontact structures (eps = -1), their axiom suite,
// the four-step compatible-metric construction, pseudo-orthonormal frames,
// and Sasakian-type defect measurement. Also hosts the pseudosphere
// S^{4n+3}_{2n+1} realized on graph charts with extrinsically induced fields.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "parahyper/report.hpp"
#include "parahyper/smooth.hpp"

namespace parahyper {

// (phi, xi, eta) with phi^2 = -eps I + xi (x) eta and eta(xi) = eps.
// phi(xi) = 0 and eta o phi = 0 follow and are checked, not assumed.
struct ContactTriple {
  OperatorField phi;
  VectorField xi;
  VectorField eta;  // covector components
  int eps;

  ContactTriple(OperatorField phi_, VectorField xi_, VectorField eta_, int eps_)
      : phi(std::move(phi_)), xi(std::move(xi_)), eta(std::move(eta_)), eps(eps_) {
    detail::require_same_chart(phi.chart, xi.chart);
    detail::require_same_chart(xi.chart, eta.chart);
    if (eps != 1 && eps != -1) throw IncompatibleInputs("contact sign must be +1 or -1");
  }
};

struct MixedTriple {
  ContactTriple c1, c2, c3;  // eps = (+1, -1, -1)

  MixedTriple(ContactTriple c1_, ContactTriple c2_, ContactTriple c3_)
      : c1(std::move(c1_)), c2(std::move(c2_)), c3(std::move(c3_)) {
    detail::require_same_chart(c1.phi.chart, c2.phi.chart);
    detail::require_same_chart(c2.phi.chart, c3.phi.chart);
    if (c1.eps != 1 || c2.eps != -1 || c3.eps != -1)
      throw IncompatibleInputs("mixed triple signs must be (+1, -1, -1)");
    if (c1.phi.chart->dim() % 4 != 3)
      throw IncompatibleInputs("mixed 3-structures need dimension 4n+3, got " +
                               std::to_string(c1.phi.chart->dim()));
  }

  ChartPtr chart() const { return c1.phi.chart; }
  const ContactTriple& triple(int alpha) const {
    switch (alpha) {
      case 1: return c1;
      case 2: return c2;
      default: return c3;
    }
  }
};

struct MetricMixed {
  MixedTriple mixed;
  MetricField g;

  MetricMixed(MixedTriple mixed_, MetricField g_) : mixed(std::move(mixed_)), g(std::move(g_)) {
    detail::require_same_chart(mixed.chart(), g.chart);
  }
};

// Structure equation residuals for a single contact triple.
inline std::vector<Check> check_contact(const ContactTriple& t, const SamplePlan& plan,
                                        const Tolerances& tol, bool constant_coefficients,
                                        const std::string& label = "") {
  auto points = sample_points(*t.phi.chart, plan);
  const int n = t.phi.chart->dim();
  Mat id = Mat::Identity(n, n);
  double r_sq = 0.0, r_exi = 0.0, r_pxi = 0.0, r_ephi = 0.0;
  for (const Vec& x : points) {
    Mat p = t.phi.eval(x);
    Vec xi = t.xi.eval(x);
    Vec eta = t.eta.eval(x);
    r_sq = std::max(r_sq, residual_norm(Mat(p * p), Mat(-t.eps * id + outer(xi, eta))));
    r_exi = std::max(r_exi, std::abs(eta.dot(xi) - t.eps));
    r_pxi = std::max(r_pxi, max_abs(Vec(p * xi)));
    r_ephi = std::max(r_ephi, max_abs(Vec(p.transpose() * eta)));
  }
  double tv = constant_coefficients ? tol.exact : tol.algebra;
  std::string tn = constant_coefficients ? "exact" : "algebra";
  return {make_check(label + "phi^2 = -eps*I + xi*eta", r_sq, tv, tn, plan.count),
          make_check(label + "eta(xi) = eps", r_exi, tv, tn, plan.count),
          make_check(label + "phi(xi) = 0 (deduced)", r_pxi, tv, tn, plan.count),
          make_check(label + "eta o phi = 0 (deduced)", r_ephi, tv, tn, plan.count)};
}

// The coupling axioms over all even permutations (a, b, c) of (1, 2, 3):
//   eta_a(xi_b) = 0                       for a != b
//   phi_a(xi_b) = -phi_b(xi_a) = eps_c xi_c
//   eta_a o phi_b = -eta_b o phi_a = eps_c eta_c
//   phi_a phi_b - xi_a*eta_b = -phi_b phi_a + xi_b*eta_a = eps_c phi_c
inline std::vector<Check> check_mixed_axioms(const MixedTriple& m, const SamplePlan& plan,
                                             const Tolerances& tol, bool constant_coefficients) {
  auto points = sample_points(*m.chart(), plan);
  const int perms[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
  double r_exi = 0.0, r_pxi = 0.0, r_ephi = 0.0, r_pp = 0.0;
  for (const Vec& x : points) {
    Mat phi[4];
    Vec xi[4], eta[4];
    for (int a = 1; a <= 3; ++a) {
      phi[a] = m.triple(a).phi.eval(x);
      xi[a] = m.triple(a).xi.eval(x);
      eta[a] = m.triple(a).eta.eval(x);
    }
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b)
        if (a != b) r_exi = std::max(r_exi, std::abs(eta[a].dot(xi[b])));
    for (auto& p : perms) {
      int a = p[0], b = p[1], c = p[2];
      double ec = c == 1 ? 1.0 : -1.0;
      r_pxi = std::max(r_pxi, residual_norm(Vec(phi[a] * xi[b]), Vec(ec * xi[c])));
      r_pxi = std::max(r_pxi, residual_norm(Vec(-phi[b] * xi[a]), Vec(ec * xi[c])));
      r_ephi = std::max(r_ephi, residual_norm(Vec(phi[b].transpose() * eta[a]), Vec(ec * eta[c])));
      r_ephi = std::max(r_ephi, residual_norm(Vec(-phi[a].transpose() * eta[b]), Vec(ec * eta[c])));
      r_pp = std::max(r_pp, residual_norm(Mat(phi[a] * phi[b] - outer(xi[a], eta[b])),
                                          Mat(ec * phi[c])));
      r_pp = std::max(r_pp, residual_norm(Mat(-phi[b] * phi[a] + outer(xi[b], eta[a])),
                                          Mat(ec * phi[c])));
    }
  }
  double tv = constant_coefficients ? tol.exact : tol.algebra;
  std::string tn = constant_coefficients ? "exact" : "algebra";
  return {make_check("eta_a(xi_b) = 0 (a != b)", r_exi, tv, tn, plan.count),
          make_check("phi_a(xi_b) = -phi_b(xi_a) = eps_c*xi_c", r_pxi, tv, tn, plan.count),
          make_check("eta_a o phi_b = -eta_b o phi_a = eps_c*eta_c", r_ephi, tv, tn, plan.count),
          make_check("phi_a phi_b - xi_a*eta_b = -phi_b phi_a + xi_b*eta_a = eps_c*phi_c", r_pp,
                     tv, tn, plan.count)};
}

// Compatibility of a metric with the triple:
//   g(phi_a X, phi_a Y) = eps_a g(X,Y) - eta_a(X) eta_a(Y),  g(., xi_a) = eta_a.
inline std::vector<Check> check_metric_compatibility(const MetricMixed& mm, const SamplePlan& plan,
                                                     const Tolerances& tol,
                                                     bool constant_coefficients) {
  auto points = sample_points(*mm.g.chart, plan);
  double r_phi = 0.0, r_xi = 0.0, r_gram = 0.0;
  for (const Vec& x : points) {
    Mat gx = mm.g.eval(x);
    for (int a = 1; a <= 3; ++a) {
      double eps = a == 1 ? 1.0 : -1.0;
      const ContactTriple& t = mm.mixed.triple(a);
      Mat p = t.phi.eval(x);
      Vec xi = t.xi.eval(x);
      Vec eta = t.eta.eval(x);
      r_phi = std::max(r_phi, residual_norm(pullback(gx, p), Mat(eps * gx - outer(eta, eta))));
      r_xi = std::max(r_xi, residual_norm(Vec(gx * xi), eta));
      for (int b = 1; b <= 3; ++b) {
        double expect = a == b ? eps : 0.0;
        r_gram = std::max(r_gram, std::abs(xi.dot(gx * mm.mixed.triple(b).xi.eval(x)) - expect));
      }
    }
  }
  double tv = constant_coefficients ? tol.exact : tol.algebra;
  std::string tn = constant_coefficients ? "exact" : "algebra";
  return {make_check("g(phi_a.,phi_a.) = eps_a*g - eta_a*eta_a", r_phi, tv, tn, plan.count),
          make_check("g(.,xi_a) = eta_a", r_xi, tv, tn, plan.count),
          make_check("g(xi_a,xi_b) = eps_a*delta_ab", r_gram, tv, tn, plan.count)};
}

// Four-step compatible metric from an arbitrary symmetric seed:
//   u = f(phi1^2 ., phi1^2 .) + eta1*eta1
//   v = u(phi2^2 ., phi2^2 .) - eta2*eta2
//   h = v(phi3^2 ., phi3^2 .) - eta3*eta3
//   g = 1/4 [ h + sum_a eps_a ( h(phi_a ., phi_a .) + eta_a*eta_a ) ]
// Degeneracy of any stage is raised with its step index.
inline MetricField compatible_metric(const MixedTriple& m, const MetricField& f,
                                     double degeneracy_threshold = kDegeneracyThreshold) {
  detail::require_same_chart(m.chart(), f.chart);
  auto fe = f.eval;
  auto p1 = m.c1.phi.eval, p2 = m.c2.phi.eval, p3 = m.c3.phi.eval;
  auto e1 = m.c1.eta.eval, e2 = m.c2.eta.eval, e3 = m.c3.eta.eval;
  ChartPtr chart = m.chart();
  return MetricField{chart, [=](const Vec& x) -> Mat {
    Mat f0 = fe(x);
    Mat q1 = p1(x) * p1(x), q2 = p2(x) * p2(x), q3 = p3(x) * p3(x);
    Vec n1 = e1(x), n2 = e2(x), n3 = e3(x);
    Mat u = pullback(f0, q1) + outer(n1, n1);
    if (is_degenerate(u, degeneracy_threshold)) throw DegenerateIntermediate(1, chart->name);
    Mat v = pullback(u, q2) - outer(n2, n2);
    if (is_degenerate(v, degeneracy_threshold)) throw DegenerateIntermediate(2, chart->name);
    Mat h = pullback(v, q3) - outer(n3, n3);
    if (is_degenerate(h, degeneracy_threshold)) throw DegenerateIntermediate(3, chart->name);
    Mat g = 0.25 * (h + (pullback(h, p1(x)) + outer(n1, n1)) - (pullback(h, p2(x)) + outer(n2, n2)) -
                    (pullback(h, p3(x)) + outer(n3, n3)));
    if (is_degenerate(g, degeneracy_threshold)) throw DegenerateIntermediate(4, chart->name);
    return g;
  }};
}

// Pseudo-orthonormal frame {(E_i, phi1 E_i, phi2 E_i, phi3 E_i)_{i<=n},
// xi_1, xi_2, xi_3}; Gram diagonal +-1 with signature (2n+1, 2n+2).
inline std::vector<Vec> mixed_frame(const MetricMixed& mm, const Vec& point,
                                    const Tolerances& tol) {
  const int n = mm.g.chart->dim();
  Mat gx = mm.g.eval(point);
  if (is_degenerate(gx, tol.degeneracy)) throw DegenerateMetric("mixed_frame");
  std::vector<Vec> frame;
  std::vector<double> signs;
  Mat phi[4];
  for (int a = 1; a <= 3; ++a) {
    phi[a] = mm.mixed.triple(a).phi.eval(point);
    Vec xi = mm.mixed.triple(a).xi.eval(point);
    frame.push_back(xi);
    signs.push_back(xi.dot(gx * xi));
  }
  std::uint64_t state = 0x7731995u;
  int candidate = 0;
  while (static_cast<int>(frame.size()) < n) {
    Vec c(n);
    if (candidate < n) {
      c = Vec::Unit(n, candidate);
    } else {
      if (candidate > n + 200) throw DegenerateMetric("mixed_frame could not complete a frame");
      for (int i = 0; i < n; ++i) c[i] = 2.0 * detail::unit_double(state) - 1.0;
    }
    ++candidate;
    Vec e = detail::project_off(c, gx, frame, signs);
    double q = e.dot(gx * e);
    if (std::abs(q) < 1e-6 * std::max(1.0, e.squaredNorm())) continue;
    e /= std::sqrt(std::abs(q));
    frame.push_back(e);
    signs.push_back(e.dot(gx * e));
    for (int a = 1; a <= 3; ++a) {
      Vec fa = phi[a] * e;
      frame.push_back(fa);
      signs.push_back(fa.dot(gx * fa));
    }
  }
  return frame;
}

// Covariant-derivative defects of the Sasakian-type identities. With the sign
// conventions fixed by the pseudosphere (the canonical example), all three
// reduce to (nabla_X phi_a) Y = g(X,Y) xi_a - eta_a(Y) X; the alpha = 2, 3
// lines carry the eps_a-weighted paracontact right-hand side explicitly.
inline std::vector<Check> sasakian_defect(const MetricMixed& mm, FDScheme scheme,
                                          const SamplePlan& plan, const Tolerances& tol) {
  auto points = sample_points(*mm.g.chart, plan);
  const int n = mm.g.chart->dim();
  AffineConnection conn = levi_civita(mm.g, scheme);
  std::array<double, 4> res{0.0, 0.0, 0.0, 0.0};
  for (const Vec& x : points) {
    Mat gx = mm.g.eval(x);
    for (int a = 1; a <= 3; ++a) {
      double eps = a == 1 ? 1.0 : -1.0;
      const ContactTriple& t = mm.mixed.triple(a);
      Mat p = t.phi.eval(x);
      Mat psq = p * p;
      Vec xi = t.xi.eval(x);
      Vec eta = t.eta.eval(x);
      Mat gphi = pullback(gx, p);  // g(phi X, phi Y)
      std::vector<Mat> dphi = covariant_derivative_operator(conn, t.phi, x, scheme);
      double r = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          // rhs of (nabla_{e_i} phi)(e_j), eps-weighted paracontact form
          Vec rhs = eps * (gphi(i, j) * xi + eta[j] * psq.col(i));
          for (int k = 0; k < n; ++k) r = std::max(r, std::abs(dphi[i](k, j) - rhs[k]));
        }
      res[a] = std::max(res[a], r);
    }
  }
  std::vector<Check> out;
  out.push_back(make_check("(nabla_X phi_1)Y = g(X,Y)xi_1 - eta_1(Y)X", res[1], tol.nested,
                           "nested", plan.count));
  for (int a = 2; a <= 3; ++a)
    out.push_back(make_check("(nabla_X phi_" + std::to_string(a) + ")Y = -[g(phi_" +
                                 std::to_string(a) + "X,phi_" + std::to_string(a) + "Y)xi_" +
                                 std::to_string(a) + " + eta_" + std::to_string(a) + "(Y)phi_" +
                                 std::to_string(a) + "^2X]",
                             res[a], tol.nested, "nested", plan.count));
  return out;
}

// ---- pseudosphere S^{4n+3}_{2n+1} on a graph chart -------------------------

// Extrinsic data of the pseudosphere <x,x> = 1 inside flat R^{4n+4} with
// metric diag(+1 x (2n+2), -1 x (2n+2)). The chart solves for the first
// ambient coordinate around the center e_1; the fields are induced by
// tangential projection:
//   xi_a = -J_a N,   J_a X = phi_a X + eta_a(X) N,   N = position vector.
struct PseudosphereData {
  ChartPtr chart;       // graph coordinates y in R^{4n+3}
  Vec ambient_signs;    // diagonal of the flat ambient metric
  std::array<Mat, 3> ambient_j;
  std::function<Vec(const Vec&)> embed;

  int ambient_dim() const { return static_cast<int>(ambient_signs.size()); }
};

namespace detail {

inline Mat pq_structure(int dim, int alpha) {
  Mat m = Mat::Zero(dim, dim);
  if (alpha == 1) {
    for (int k = 0; 2 * k < dim; ++k) {
      m(2 * k, 2 * k + 1) = -1.0;
      m(2 * k + 1, 2 * k) = 1.0;
    }
  } else if (alpha == 2) {
    for (int k = 1; 2 * k <= dim; ++k) {
      m(2 * k - 2, dim - 2 * k) = -1.0;
      m(2 * k - 1, dim - 2 * k + 1) = 1.0;
    }
  } else {
    for (int i = 0; i < dim; ++i) m(i, dim - 1 - i) = 1.0;
  }
  return m;
}

}  // namespace detail

inline PseudosphereData make_pseudosphere_data(int n, double box_half_width = 0.4) {
  const int ambient = 4 * n + 4;
  const int m = ambient - 1;
  PseudosphereData data;
  data.chart = make_box_chart("s" + std::to_string(m) + "-" + std::to_string(2 * n + 1) + "-graph",
                              m, -box_half_width, box_half_width);
  data.ambient_signs = Vec(ambient);
  for (int i = 0; i < ambient; ++i) data.ambient_signs[i] = i < ambient / 2 ? 1.0 : -1.0;
  for (int a = 1; a <= 3; ++a) data.ambient_j[a - 1] = detail::pq_structure(ambient, a);
  Vec signs = data.ambient_signs;
  data.embed = [signs, ambient](const Vec& y) -> Vec {
    double x0sq = 1.0;
    for (int i = 1; i < ambient; ++i) x0sq -= signs[i] * y[i - 1] * y[i - 1];
    if (x0sq <= 0.0) throw OutOfDomain("pseudosphere graph chart");
    Vec x(ambient);
    x[0] = std::sqrt(x0sq);
    for (int i = 1; i < ambient; ++i) x[i] = y[i - 1];
    return x;
  };
  return data;
}

namespace detail {

// Ambient tangent basis T_i = e_{i+1} + (d x0 / d y_i) e_0 at y.
inline Mat pseudosphere_tangent_basis(const PseudosphereData& d, const Vec& y) {
  const int ambient = d.ambient_dim();
  const int m = ambient - 1;
  Vec x = d.embed(y);
  Mat T(ambient, m);
  T.setZero();
  for (int i = 0; i < m; ++i) {
    T(i + 1, i) = 1.0;
    T(0, i) = -d.ambient_signs[i + 1] * y[i] / x[0];
  }
  return T;
}

inline double flat_inner(const Vec& signs, const Vec& a, const Vec& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < signs.size(); ++i) s += signs[i] * a[i] * b[i];
  return s;
}

}  // namespace detail

// Induced metric g_ij = <T_i, T_j> of the graph chart.
inline MetricField pseudosphere_metric(const PseudosphereData& d) {
  return MetricField{d.chart, [d](const Vec& y) -> Mat {
    Mat T = detail::pseudosphere_tangent_basis(d, y);
    const int m = d.ambient_dim() - 1;
    Mat g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        g(i, j) = detail::flat_inner(d.ambient_signs, T.col(i), T.col(j));
        g(j, i) = g(i, j);
      }
    return g;
  }};
}

// The induced mixed 3-structure. Chart components of an ambient tangent
// vector are its ambient components 2..(4n+4); the first component is
// determined by tangency.
inline MixedTriple pseudosphere_mixed_triple(const PseudosphereData& d) {
  auto make_triple = [&d](int alpha) {
    Mat J = d.ambient_j[alpha - 1];
    OperatorField phi{d.chart, [d, J](const Vec& y) -> Mat {
      const int ambient = d.ambient_dim();
      const int m = ambient - 1;
      Vec x = d.embed(y);
      Mat T = detail::pseudosphere_tangent_basis(d, y);
      Mat out(m, m);
      for (int j = 0; j < m; ++j) {
        Vec jt = J * T.col(j);
        double etaj = detail::flat_inner(d.ambient_signs, jt, x);
        Vec tangential = jt - etaj * x;
        for (int k = 0; k < m; ++k) out(k, j) = tangential[k + 1];
      }
      return out;
    }};
    VectorField xi{d.chart, [d, J](const Vec& y) -> Vec {
      Vec x = d.embed(y);
      Vec amb = -(J * x);
      return amb.tail(d.ambient_dim() - 1);
    }};
    VectorField eta{d.chart, [d, J](const Vec& y) -> Vec {
      const int m = d.ambient_dim() - 1;
      Vec x = d.embed(y);
      Mat T = detail::pseudosphere_tangent_basis(d, y);
      Vec out(m);
      for (int j = 0; j < m; ++j)
        out[j] = detail::flat_inner(d.ambient_signs, Vec(J * T.col(j)), x);
      return out;
    }};
    return ContactTriple(std::move(phi), std::move(xi), std::move(eta), alpha == 1 ? 1 : -1);
  };
  return MixedTriple(make_triple(1), make_triple(2), make_triple(3));
}

inline MetricMixed make_pseudosphere(int n, double box_half_width = 0.4) {
  PseudosphereData d = make_pseudosphere_data(n, box_half_width);
  return MetricMixed(pseudosphere_mixed_triple(d), pseudosphere_metric(d));
}

}  // namespace parahyper

#endif
