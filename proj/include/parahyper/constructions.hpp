#ifndef PARAHYPER_CONSTRUCTIONS_HPP
#define PARAHYPER_CONSTRUCTIONS_HPP

// Constructions that dress a mixed 3-structure up to an almost
// para-hypercomplex one: the warped product M x I, the metric cone over a
// mixed Sasakian base, and the trivial circle bundle M x S^1. All derived
// charts append the extra coordinate (r or t) after the base coordinates.

#include <array>
#include <string>
#include <vector>

#include "parahyper/mixed3.hpp"
#include "parahyper/report.hpp"
#include "parahyper/smooth.hpp"
#include "parahyper/structures.hpp"

namespace parahyper {

struct ProductChart {
  ChartPtr base;
  ChartPtr total;  // (y, r)
  std::function<double(double)> warp;  // f > 0 on the interval
};

inline ProductChart make_product_chart(ChartPtr base, double r_lo, double r_hi,
                                       std::function<double(double)> warp,
                                       const std::string& label = "xI") {
  const int m = base->dim();
  for (int i = 0; i <= 64; ++i) {
    double r = r_lo + (r_hi - r_lo) * i / 64.0;
    if (!(warp(r) > 0.0)) throw NonpositiveF("f(" + std::to_string(r) + ") <= 0");
  }
  Vec lo(m + 1), hi(m + 1);
  lo.head(m) = base->lo;
  hi.head(m) = base->hi;
  lo[m] = r_lo;
  hi[m] = r_hi;
  return ProductChart{base, make_chart(base->name + label, lo, hi), std::move(warp)};
}

namespace detail {

// Block operator [[phi, s1 * xi], [s2 * eta^T, 0]] on the (m+1)-chart, with
// the scalar factors functions of the last coordinate.
inline OperatorField extended_block_operator(ChartPtr total, const ContactTriple& t,
                                             std::function<double(double)> xi_scale,
                                             std::function<double(double)> eta_scale) {
  auto pe = t.phi.eval;
  auto xe = t.xi.eval;
  auto ee = t.eta.eval;
  const int m = t.phi.chart->dim();
  return OperatorField{total, [pe, xe, ee, xi_scale, eta_scale, m](const Vec& z) -> Mat {
    Vec y = z.head(m);
    double r = z[m];
    Mat out = Mat::Zero(m + 1, m + 1);
    out.topLeftCorner(m, m) = pe(y);
    out.topRightCorner(m, 1) = xi_scale(r) * xe(y);
    out.bottomLeftCorner(1, m) = eta_scale(r) * ee(y).transpose();
    return out;
  }};
}

}  // namespace detail

// J_a = [[phi_a, xi_a / f], [-f eta_a, 0]] on M x I.
inline ParaHypercomplexTriple product_structure(const ProductChart& pc, const MixedTriple& m) {
  detail::require_same_chart(pc.base, m.chart());
  auto f = pc.warp;
  auto make = [&](int alpha) {
    return detail::extended_block_operator(
        pc.total, m.triple(alpha), [f](double r) { return 1.0 / f(r); },
        [f](double r) { return -f(r); });
  };
  return ParaHypercomplexTriple(make(1), make(2), make(3));
}

// g + dr^2 / f^2: para-hyperhermitian for the product structure above.
inline MetricField product_compatible_metric(const ProductChart& pc, const MetricField& g) {
  detail::require_same_chart(pc.base, g.chart);
  auto ge = g.eval;
  auto f = pc.warp;
  const int m = pc.base->dim();
  return MetricField{pc.total, [ge, f, m](const Vec& z) -> Mat {
    Mat out = Mat::Zero(m + 1, m + 1);
    out.topLeftCorner(m, m) = ge(z.head(m));
    double fr = f(z[m]);
    out(m, m) = 1.0 / (fr * fr);
    return out;
  }};
}

struct ConeChart {
  ChartPtr base;
  ChartPtr total;  // (y, r), r bounded away from 0
};

inline ConeChart make_cone_chart(ChartPtr base, double r_lo = 0.5, double r_hi = 2.0) {
  if (r_lo <= 0.0) throw ApexIncluded("r_lo = " + std::to_string(r_lo));
  const int m = base->dim();
  Vec lo(m + 1), hi(m + 1);
  lo.head(m) = base->lo;
  hi.head(m) = base->hi;
  lo[m] = r_lo;
  hi[m] = r_hi;
  return ConeChart{base, make_chart(base->name + "xR+", lo, hi)};
}

// dr^2 + r^2 g.
inline MetricField cone_metric(const ConeChart& cc, const MetricField& g) {
  detail::require_same_chart(cc.base, g.chart);
  auto ge = g.eval;
  const int m = cc.base->dim();
  return MetricField{cc.total, [ge, m](const Vec& z) -> Mat {
    Mat out = Mat::Zero(m + 1, m + 1);
    out.topLeftCorner(m, m) = z[m] * z[m] * ge(z.head(m));
    out(m, m) = 1.0;
    return out;
  }};
}

// The parallel structure on the cone over a mixed Sasakian base, in terms of
// the Euler field Phi = r d_r:
//   J_a X = phi_a X + eta_a(X) Phi,   J_a Phi = -xi_a.
// In chart blocks: [[phi_a, -xi_a / r], [r eta_a, 0]]. With the conventions
// fixed by the pseudosphere (nabla_X xi_a = -phi_a X), this is the unique
// orientation that nabla-annihilates all three structures; it differs from
// the naive dressing by the sign of the Phi-column.
inline ParaHypercomplexTriple cone_structure(const ConeChart& cc, const MixedTriple& m) {
  detail::require_same_chart(cc.base, m.chart());
  auto make = [&](int alpha) {
    return detail::extended_block_operator(
        cc.total, m.triple(alpha), [](double r) { return -1.0 / r; },
        [](double r) { return r; });
  };
  return ParaHypercomplexTriple(make(1), make(2), make(3));
}

// Covariant-derivative defect of the cone structures with respect to the
// Levi-Civita connection of dr^2 + r^2 g.
inline std::vector<Check> cone_parallel_defect(const ConeChart& cc,
                                               const ParaHypercomplexTriple& triple,
                                               const MetricField& base_g, const SamplePlan& plan,
                                               FDScheme scheme, const Tolerances& tol) {
  MetricField gbar = cone_metric(cc, base_g);
  AffineConnection conn = levi_civita(gbar, scheme);
  std::vector<Check> out;
  for (int alpha = 1; alpha <= 3; ++alpha) {
    double res = 0.0;
    for (const Vec& z : sample_points(*cc.total, plan)) {
      for (const Mat& dj :
           covariant_derivative_operator(conn, triple.structure(alpha).op, z, scheme))
        res = std::max(res, max_abs(dj));
    }
    out.push_back(make_check("cone nabla J_" + std::to_string(alpha) + " = 0", res, tol.nested,
                             "nested", plan.count));
  }
  return out;
}

// Recover the mixed triple on the r = 1 slice from a parallel cone triple:
//   xi_a = -J_a(d_r),  phi_a X = tangential part of nabla_X (J_a d_r),
//   eta_a = g(xi_a, .).
inline MixedTriple cone_inverse(const ConeChart& cc, const ParaHypercomplexTriple& triple,
                                const MetricField& base_g, FDScheme scheme) {
  const int m = cc.base->dim();
  if (!(cc.total->lo[m] < 1.0 && 1.0 < cc.total->hi[m]))
    throw OutOfDomain("cone r-box must contain the r = 1 slice for recovery");
  MetricField gbar = cone_metric(cc, base_g);
  AffineConnection conn = levi_civita(gbar, scheme);

  auto make = [&](int alpha) {
    auto je = triple.structure(alpha).op.eval;
    auto at_slice = [m](const Vec& y) {
      Vec z(m + 1);
      z.head(m) = y;
      z[m] = 1.0;
      return z;
    };
    VectorField xi{cc.base, [je, at_slice, m](const Vec& y) -> Vec {
      Vec z = at_slice(y);
      Vec jr = je(z) * Vec::Unit(m + 1, m);
      return Vec(-jr.head(m));
    }};
    VectorField eta{cc.base, [je, at_slice, gbar, m](const Vec& y) -> Vec {
      Vec z = at_slice(y);
      Vec jr = je(z) * Vec::Unit(m + 1, m);
      Vec xihat = Vec::Zero(m + 1);
      xihat.head(m) = -jr.head(m);
      return Vec((gbar.eval(z) * xihat).head(m));
    }};
    // W_a = J_a d_r as a field on the cone; phi_a X = base part of nabla_X W_a.
    VectorField w{cc.total, [je, m](const Vec& z) -> Vec { return je(z) * Vec::Unit(m + 1, m); }};
    OperatorField phi{cc.base, [conn, w, at_slice, scheme, m](const Vec& y) -> Mat {
      Vec z = at_slice(y);
      Mat out(m, m);
      for (int j = 0; j < m; ++j) {
        VectorField xj = constant_field(w.chart, Vec(Vec::Unit(m + 1, j)));
        Vec nw = covariant_derivative(conn, xj, w, scheme).eval(z);
        out.col(j) = nw.head(m);
      }
      return out;
    }};
    return ContactTriple(std::move(phi), std::move(xi), std::move(eta), alpha == 1 ? 1 : -1);
  };
  return MixedTriple(make(1), make(2), make(3));
}

struct CircleBundleChart {
  ChartPtr base;
  ChartPtr total;  // (y, t), t a periodic fiber coordinate on the trivial bundle
};

inline CircleBundleChart make_circle_bundle_chart(ChartPtr base) {
  const int m = base->dim();
  Vec lo(m + 1), hi(m + 1);
  lo.head(m) = base->lo;
  hi.head(m) = base->hi;
  lo[m] = -3.2;
  hi[m] = 3.2;
  return CircleBundleChart{base, make_chart(base->name + "xS1", lo, hi)};
}

// J_a X^h = (phi_a X)^h + eta_a(X) Theta,  J_a Theta = -(xi_a)^h, with Theta
// the unit vertical field of the trivial bundle:
//   blocks [[phi_a, -xi_a], [eta_a, 0]].
inline ParaHypercomplexTriple circle_bundle_structure(const CircleBundleChart& cb,
                                                      const MixedTriple& m) {
  detail::require_same_chart(cb.base, m.chart());
  auto make = [&](int alpha) {
    return detail::extended_block_operator(
        cb.total, m.triple(alpha), [](double) { return -1.0; }, [](double) { return 1.0; });
  };
  return ParaHypercomplexTriple(make(1), make(2), make(3));
}

// pi^* g + dt^2: already para-hyperhermitian for the bundle structure.
inline MetricField circle_bundle_metric(const CircleBundleChart& cb, const MetricField& g) {
  detail::require_same_chart(cb.base, g.chart);
  auto ge = g.eval;
  const int m = cb.base->dim();
  return MetricField{cb.total, [ge, m](const Vec& z) -> Mat {
    Mat out = Mat::Zero(m + 1, m + 1);
    out.topLeftCorner(m, m) = ge(z.head(m));
    out(m, m) = 1.0;
    return out;
  }};
}

// Horizontal action contract: the bundle structure acts on horizontal lifts
// exactly through (phi_a, eta_a), and sends Theta to -(xi_a)^h.
inline std::vector<Check> check_circle_bundle_action(const CircleBundleChart& cb,
                                                     const MixedTriple& m,
                                                     const ParaHypercomplexTriple& triple,
                                                     const SamplePlan& plan,
                                                     const Tolerances& tol,
                                                     bool constant_coefficients) {
  const int dim = cb.base->dim();
  double r_h = 0.0, r_theta = 0.0;
  for (const Vec& z : sample_points(*cb.total, plan)) {
    Vec y = z.head(dim);
    for (int alpha = 1; alpha <= 3; ++alpha) {
      Mat j = triple.structure(alpha).op.eval(z);
      Mat phi = m.triple(alpha).phi.eval(y);
      Vec xi = m.triple(alpha).xi.eval(y);
      Vec eta = m.triple(alpha).eta.eval(y);
      for (int i = 0; i < dim; ++i) {
        Vec jei = j * Vec::Unit(dim + 1, i);
        r_h = std::max(r_h, residual_norm(Vec(jei.head(dim)), Vec(phi.col(i))));
        r_h = std::max(r_h, std::abs(jei[dim] - eta[i]));
      }
      Vec jtheta = j * Vec::Unit(dim + 1, dim);
      r_theta = std::max(r_theta, residual_norm(Vec(jtheta.head(dim)), Vec(-xi)));
      r_theta = std::max(r_theta, std::abs(jtheta[dim]));
    }
  }
  double tv = constant_coefficients ? tol.exact : tol.algebra;
  std::string tn = constant_coefficients ? "exact" : "algebra";
  return {make_check("J_a Xh = (phi_a X)h + eta_a(X) Theta", r_h, tv, tn, plan.count),
          make_check("J_a Theta = -(xi_a)h", r_theta, tv, tn, plan.count)};
}

}  // namespace parahyper

#endif
