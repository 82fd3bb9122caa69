#ifndef PARAHYPER_SMOOTH_HPP
#define PARAHYPER_SMOOTH_HPP

// Charts, smooth fields, and the finite-difference tensor calculus engine:
// directional derivatives, Lie brackets, Levi-Civita connections, curvature
// and Ricci. Fields are immutable closures over chart coordinates; every
// operation is pure and safe to evaluate concurrently.
//
// Curvature sign convention used throughout:
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
// in coordinates R^l_{kij} = d_i G^l_{jk} - d_j G^l_{ik}
//                          + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik},
// and Ric_{jk} = R^i_{kij}. On the unit round sphere S^m this yields
// Ric = (m-1) g.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "parahyper/algebra.hpp"
#include "parahyper/errors.hpp"

namespace parahyper {

struct Chart {
  std::string name;
  Vec lo, hi;  // axis-aligned coordinate box

  Chart(std::string name_, Vec lo_, Vec hi_)
      : name(std::move(name_)), lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() == 0 || lo.size() != hi.size())
      throw DimensionMismatch("chart box bounds for " + name);
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i]))
        throw IncompatibleInputs("chart " + name + " has empty box on axis " + std::to_string(i));
  }

  int dim() const { return static_cast<int>(lo.size()); }

  // Registered fields must stay evaluable on the box expanded by `collar`.
  bool contains(const Vec& x, double collar = 0.0) const {
    if (x.size() != lo.size()) return false;
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] - collar || x[i] > hi[i] + collar) return false;
    return true;
  }
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(std::string name, Vec lo, Vec hi) {
  return std::make_shared<const Chart>(std::move(name), std::move(lo), std::move(hi));
}

inline ChartPtr make_box_chart(std::string name, int dim, double lo, double hi) {
  return make_chart(std::move(name), Vec::Constant(dim, lo), Vec::Constant(dim, hi));
}

struct FDScheme {
  double step = 1e-4;  // first derivatives of registered fields
  int order = 2;       // central stencil order, 2 or 4

  // Outer step for differentiating quantities that are themselves FD results
  // (Christoffel symbols inside curvature and Ricci).
  double nested_step() const { return 10.0 * step; }
  double collar() const { return 2.0 * std::max(step, nested_step()); }
};

struct SamplePlan {
  int count = 20;
  std::uint64_t seed = 1;
  double margin = 0.1;  // fraction of each box edge excluded on both sides
};

namespace detail {

// splitmix64; used instead of std::uniform_real_distribution so that sample
// streams are identical across standard libraries.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d49bb133111ebull;
  return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

inline std::uint64_t hash_str(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

inline std::vector<Vec> sample_points(const Chart& chart, const SamplePlan& plan) {
  if (plan.count < 1) throw InvalidConfig("sample count must be >= 1");
  if (plan.margin < 0.0 || plan.margin >= 0.5) throw InvalidConfig("sample margin must be in [0, 0.5)");
  std::uint64_t state = plan.seed;
  std::vector<Vec> points;
  points.reserve(plan.count);
  for (int n = 0; n < plan.count; ++n) {
    Vec x(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) {
      double a = chart.lo[i] + plan.margin * (chart.hi[i] - chart.lo[i]);
      double b = chart.hi[i] - plan.margin * (chart.hi[i] - chart.lo[i]);
      x[i] = a + (b - a) * detail::unit_double(state);
    }
    points.push_back(std::move(x));
  }
  return points;
}

struct ScalarField {
  ChartPtr chart;
  std::function<double(const Vec&)> eval;
};

// Also used for covector component fields (eta stored as component rows).
struct VectorField {
  ChartPtr chart;
  std::function<Vec(const Vec&)> eval;
};

struct OperatorField {
  ChartPtr chart;
  std::function<Mat(const Vec&)> eval;
};

struct MetricField {
  ChartPtr chart;
  std::function<Mat(const Vec&)> eval;
};

// Christoffel symbols at a point: gamma[k](i,j) = G^k_{ij}.
using Christoffel = std::vector<Mat>;

struct AffineConnection {
  ChartPtr chart;
  std::function<Christoffel(const Vec&)> christoffel;
};

namespace detail {

inline void require_inside(const Chart& chart, const Vec& x, const FDScheme& scheme) {
  if (!chart.contains(x, scheme.collar()))
    throw OutOfDomain("chart " + chart.name);
}

// Indefinite Gram-Schmidt step: project v g-orthogonally off the span of
// `frame` (whose Gram matrix is diagonal with entries `signs`).
inline Vec project_off(const Vec& v, const Mat& g, const std::vector<Vec>& frame,
                       const std::vector<double>& signs) {
  Vec out = v;
  for (size_t i = 0; i < frame.size(); ++i)
    out -= (frame[i].dot(g * v) / signs[i]) * frame[i];
  return out;
}

inline void require_same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (a.get() != b.get())
    throw ChartMismatch((a ? a->name : "?") + " vs " + (b ? b->name : "?"));
}

// Central difference of f along axis i, for Vec- or Mat-valued f. Operands
// are materialized before combining so no Eigen expression outlives them.
template <class F>
auto fd_partial(F&& f, const Vec& x, int i, double h, int order) {
  Vec xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  auto vp = f(xp);
  auto vm = f(xm);
  if (order == 2) return ((vp - vm) * (1.0 / (2.0 * h))).eval();
  if (order != 4) throw InvalidConfig("FD stencil order must be 2 or 4");
  Vec xpp = x, xmm = x;
  xpp[i] += 2.0 * h;
  xmm[i] -= 2.0 * h;
  auto vpp = f(xpp);
  auto vmm = f(xmm);
  return ((8.0 * (vp - vm) - (vpp - vmm)) * (1.0 / (12.0 * h))).eval();
}

// double does not have .eval(); wrap scalar results separately.
template <class F>
double fd_partial_scalar(F&& f, const Vec& x, int i, double h, int order) {
  Vec xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  if (order == 2) return (f(xp) - f(xm)) / (2.0 * h);
  if (order != 4) throw InvalidConfig("FD stencil order must be 2 or 4");
  Vec xpp = x, xmm = x;
  xpp[i] += 2.0 * h;
  xmm[i] -= 2.0 * h;
  return (8.0 * (f(xp) - f(xm)) - (f(xpp) - f(xmm))) / (12.0 * h);
}

}  // namespace detail

inline double directional_derivative(const ScalarField& f, const Vec& x, int axis,
                                     const FDScheme& scheme) {
  detail::require_inside(*f.chart, x, scheme);
  return detail::fd_partial_scalar(f.eval, x, axis, scheme.step, scheme.order);
}

inline Vec directional_derivative(const VectorField& f, const Vec& x, int axis,
                                  const FDScheme& scheme) {
  detail::require_inside(*f.chart, x, scheme);
  return detail::fd_partial(f.eval, x, axis, scheme.step, scheme.order);
}

inline Mat directional_derivative(const OperatorField& f, const Vec& x, int axis,
                                  const FDScheme& scheme) {
  detail::require_inside(*f.chart, x, scheme);
  return detail::fd_partial(f.eval, x, axis, scheme.step, scheme.order);
}

// [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k.
inline VectorField lie_bracket(const VectorField& X, const VectorField& Y, FDScheme scheme) {
  detail::require_same_chart(X.chart, Y.chart);
  ChartPtr chart = X.chart;
  auto xe = X.eval;
  auto ye = Y.eval;
  return VectorField{chart, [chart, xe, ye, scheme](const Vec& p) -> Vec {
    detail::require_inside(*chart, p, scheme);
    const int n = chart->dim();
    Vec xv = xe(p), yv = ye(p);
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (xv[i] != 0.0) out += xv[i] * detail::fd_partial(ye, p, i, scheme.step, scheme.order);
      if (yv[i] != 0.0) out -= yv[i] * detail::fd_partial(xe, p, i, scheme.step, scheme.order);
    }
    return out;
  }};
}

// G^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}).
inline AffineConnection levi_civita(const MetricField& g, FDScheme scheme) {
  ChartPtr chart = g.chart;
  auto ge = g.eval;
  return AffineConnection{chart, [chart, ge, scheme](const Vec& x) -> Christoffel {
    detail::require_inside(*chart, x, scheme);
    const int n = chart->dim();
    Mat gx = ge(x);
    if (is_degenerate(gx))
      throw DegenerateMetric("levi_civita on chart " + chart->name);
    Mat ginv = gx.inverse();
    std::vector<Mat> dg(n);
    for (int i = 0; i < n; ++i) dg[i] = detail::fd_partial(ge, x, i, scheme.step, scheme.order);
    Christoffel gamma(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double sum = 0.0;
          for (int l = 0; l < n; ++l)
            sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
          gamma[k](i, j) = 0.5 * sum;
          gamma[k](j, i) = gamma[k](i, j);
        }
    return gamma;
  }};
}

// (nabla_X Y)^k = X^i d_i Y^k + G^k_{ij} X^i Y^j.
inline VectorField covariant_derivative(const AffineConnection& conn, const VectorField& X,
                                        const VectorField& Y, FDScheme scheme) {
  detail::require_same_chart(conn.chart, X.chart);
  detail::require_same_chart(X.chart, Y.chart);
  ChartPtr chart = X.chart;
  auto gammae = conn.christoffel;
  auto xe = X.eval;
  auto ye = Y.eval;
  return VectorField{chart, [chart, gammae, xe, ye, scheme](const Vec& p) -> Vec {
    detail::require_inside(*chart, p, scheme);
    const int n = chart->dim();
    Vec xv = xe(p), yv = ye(p);
    Christoffel gamma = gammae(p);
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
      if (xv[i] != 0.0) out += xv[i] * detail::fd_partial(ye, p, i, scheme.step, scheme.order);
    for (int k = 0; k < n; ++k) out[k] += xv.dot(gamma[k] * yv);
    return out;
  }};
}

// Covariant derivative of a (1,1)-tensor field along each coordinate axis:
// (nabla_i P)^k_j = d_i P^k_j + G^k_{il} P^l_j - G^l_{ij} P^k_l.
inline std::vector<Mat> covariant_derivative_operator(const AffineConnection& conn,
                                                      const OperatorField& P, const Vec& x,
                                                      FDScheme scheme) {
  detail::require_same_chart(conn.chart, P.chart);
  detail::require_inside(*P.chart, x, scheme);
  const int n = P.chart->dim();
  Mat pv = P.eval(x);
  Christoffel gamma = conn.christoffel(x);
  std::vector<Mat> out(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    Mat dp = detail::fd_partial(P.eval, x, i, scheme.step, scheme.order);
    Mat gi(n, n);  // gi(k,l) = G^k_{il}
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) gi(k, l) = gamma[k](i, l);
    out[i] = dp + gi * pv - pv * gi;
  }
  return out;
}

// Coordinate curvature tensor. riemann(x)[l] is the matrix R^l_{k..} packed as
// a vector of n x n x n entries; access through the helper below.
struct RiemannTensor {
  int dim;
  // component(l, k, i, j) = R^l_{kij}
  std::vector<double> data;
  double component(int l, int k, int i, int j) const {
    return data[((l * dim + k) * dim + i) * dim + j];
  }
  // R(X,Y)Z with value vectors.
  Vec apply(const Vec& X, const Vec& Y, const Vec& Z) const {
    Vec out = Vec::Zero(dim);
    for (int l = 0; l < dim; ++l) {
      double sum = 0.0;
      for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            sum += component(l, k, i, j) * Z[k] * X[i] * Y[j];
      out[l] = sum;
    }
    return out;
  }
};

inline RiemannTensor riemann_tensor(const AffineConnection& conn, const Vec& x, FDScheme scheme) {
  detail::require_inside(*conn.chart, x, scheme);
  const int n = conn.chart->dim();
  Christoffel gamma = conn.christoffel(x);
  const double h = scheme.nested_step();
  std::vector<Christoffel> dgamma(n);
  for (int i = 0; i < n; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    if (scheme.order == 2) {
      Christoffel gp = conn.christoffel(xp), gm = conn.christoffel(xm);
      dgamma[i].resize(n);
      for (int k = 0; k < n; ++k) dgamma[i][k] = (gp[k] - gm[k]) / (2.0 * h);
    } else {
      Vec xpp = x, xmm = x;
      xpp[i] += 2.0 * h;
      xmm[i] -= 2.0 * h;
      Christoffel gp = conn.christoffel(xp), gm = conn.christoffel(xm);
      Christoffel gpp = conn.christoffel(xpp), gmm = conn.christoffel(xmm);
      dgamma[i].resize(n);
      for (int k = 0; k < n; ++k)
        dgamma[i][k] = (8.0 * (gp[k] - gm[k]) - (gpp[k] - gmm[k])) / (12.0 * h);
    }
  }
  RiemannTensor R{n, std::vector<double>(static_cast<size_t>(n) * n * n * n, 0.0)};
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double val = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int m = 0; m < n; ++m)
            val += gamma[l](i, m) * gamma[m](j, k) - gamma[l](j, m) * gamma[m](i, k);
          R.data[((l * n + k) * n + i) * n + j] = val;
        }
  return R;
}

// R(X,Y)Z as nested covariant derivatives (the defining formula). The
// coordinate-tensor route above serves as the second, independent evaluation.
inline VectorField curvature(const AffineConnection& conn, const VectorField& X,
                             const VectorField& Y, const VectorField& Z, FDScheme scheme) {
  detail::require_same_chart(X.chart, Y.chart);
  detail::require_same_chart(Y.chart, Z.chart);
  FDScheme outer = scheme;
  outer.step = scheme.nested_step();
  VectorField nyz = covariant_derivative(conn, Y, Z, scheme);
  VectorField nxz = covariant_derivative(conn, X, Z, scheme);
  VectorField nxnyz = covariant_derivative(conn, X, nyz, outer);
  VectorField nynxz = covariant_derivative(conn, Y, nxz, outer);
  VectorField br = lie_bracket(X, Y, scheme);
  VectorField nbrz = covariant_derivative(conn, br, Z, outer);
  ChartPtr chart = X.chart;
  return VectorField{chart, [nxnyz, nynxz, nbrz](const Vec& p) -> Vec {
    return nxnyz.eval(p) - nynxz.eval(p) - nbrz.eval(p);
  }};
}

// Ric_{jk} = R^i_{kij}, from the coordinate curvature tensor.
inline Mat ricci(const MetricField& g, const Vec& x, FDScheme scheme) {
  AffineConnection conn = levi_civita(g, scheme);
  RiemannTensor R = riemann_tensor(conn, x, scheme);
  const int n = R.dim;
  Mat ric = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += R.component(i, k, i, j);
      ric(j, k) = sum;
    }
  return ric;
}

inline Mat ricci(const AffineConnection& conn, const Vec& x, FDScheme scheme) {
  RiemannTensor R = riemann_tensor(conn, x, scheme);
  const int n = R.dim;
  Mat ric = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += R.component(i, k, i, j);
      ric(j, k) = sum;
    }
  return ric;
}

// ---- field combinators ----------------------------------------------------

inline VectorField constant_field(ChartPtr chart, Vec v) {
  return VectorField{std::move(chart), [v = std::move(v)](const Vec&) { return v; }};
}

inline OperatorField constant_operator(ChartPtr chart, Mat m) {
  return OperatorField{std::move(chart), [m = std::move(m)](const Vec&) { return m; }};
}

inline MetricField constant_metric(ChartPtr chart, Mat m) {
  return MetricField{std::move(chart), [m = std::move(m)](const Vec&) { return m; }};
}

// x -> A(x) X(x)
inline VectorField apply_operator(const OperatorField& A, const VectorField& X) {
  detail::require_same_chart(A.chart, X.chart);
  auto ae = A.eval;
  auto xe = X.eval;
  return VectorField{A.chart, [ae, xe](const Vec& p) -> Vec { return ae(p) * xe(p); }};
}

inline VectorField scale_field(const ScalarField& f, const VectorField& X) {
  detail::require_same_chart(f.chart, X.chart);
  auto fe = f.eval;
  auto xe = X.eval;
  return VectorField{X.chart, [fe, xe](const Vec& p) -> Vec { return fe(p) * xe(p); }};
}

inline VectorField add_fields(const VectorField& X, const VectorField& Y, double c = 1.0) {
  detail::require_same_chart(X.chart, Y.chart);
  auto xe = X.eval;
  auto ye = Y.eval;
  return VectorField{X.chart, [xe, ye, c](const Vec& p) -> Vec { return xe(p) + c * ye(p); }};
}

// Deterministic polynomial vector field of degree <= 2; used as generic test
// input for bracket and Nijenhuis identities.
inline VectorField random_polynomial_field(ChartPtr chart, std::uint64_t seed, double scale = 1.0) {
  const int n = chart->dim();
  std::uint64_t state = seed;
  Mat lin(n, n);
  Vec cst(n);
  std::vector<Mat> quad(n, Mat(n, n));
  for (int k = 0; k < n; ++k) {
    cst[k] = scale * (2.0 * detail::unit_double(state) - 1.0);
    for (int i = 0; i < n; ++i) {
      lin(k, i) = scale * (2.0 * detail::unit_double(state) - 1.0);
      for (int j = 0; j < n; ++j) quad[k](i, j) = 0.5 * scale * (2.0 * detail::unit_double(state) - 1.0);
    }
  }
  return VectorField{chart, [n, cst, lin, quad](const Vec& p) -> Vec {
    Vec out = cst + lin * p;
    for (int k = 0; k < n; ++k) out[k] += p.dot(quad[k] * p);
    return out;
  }};
}

}  // namespace parahyper

#endif
