#ifndef PARAHYPER_ALGEBRA_HPP
#define PARAHYPER_ALGEBRA_HPP

// Pointwise dense linear algebra on small matrices: signatures of symmetric
// bilinear forms, pullbacks, and max-abs residual norms. Everything here is
// value-semantic and reentrant.

#include <utility>

#include <Eigen/Dense>

#include "parahyper/errors.hpp"

namespace parahyper {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Relative eigenvalue threshold below which a symmetric form counts as
// degenerate (measured against the largest eigenvalue magnitude).
inline constexpr double kDegeneracyThreshold = 1e-10;

struct Signature {
  int positive = 0;
  int negative = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

inline double residual_norm(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("residual_norm on " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

inline double residual_norm(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("residual_norm on vectors of length " + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()));
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vec& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool is_symmetric(const Mat& b, double tol = 1e-9) {
  double scale = std::max(1.0, max_abs(b));
  return residual_norm(b, Mat(b.transpose())) <= tol * scale;
}

// b(a., a.): the congruence transform a^T b a.
inline Mat pullback(const Mat& b, const Mat& a) {
  if (b.rows() != b.cols() || a.rows() != a.cols() || b.rows() != a.rows())
    throw DimensionMismatch("pullback of " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()) + " form by " + std::to_string(a.rows()) +
                            "x" + std::to_string(a.cols()) + " map");
  return a.transpose() * b * a;
}

inline Eigen::SelfAdjointEigenSolver<Mat> symmetric_eigs(const Mat& b) {
  Mat sym = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) throw DegenerateForm("eigendecomposition failed");
  return solver;
}

// Sylvester inertia (p, q) of a symmetric nondegenerate form.
inline Signature signature(const Mat& b, double degeneracy_threshold = kDegeneracyThreshold) {
  if (b.rows() != b.cols()) throw DimensionMismatch("signature of non-square matrix");
  if (!is_symmetric(b)) throw DegenerateForm("signature of non-symmetric matrix");
  auto solver = symmetric_eigs(b);
  const Vec& ev = solver.eigenvalues();
  double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw DegenerateForm("zero form");
  Signature sig;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) < degeneracy_threshold * scale)
      throw DegenerateForm("eigenvalue " + std::to_string(ev[i]) + " below threshold");
    (ev[i] > 0 ? sig.positive : sig.negative)++;
  }
  return sig;
}

inline bool is_degenerate(const Mat& b, double degeneracy_threshold = kDegeneracyThreshold) {
  auto solver = symmetric_eigs(b);
  const Vec& ev = solver.eigenvalues();
  double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return ev.cwiseAbs().minCoeff() < degeneracy_threshold * scale;
}

// Column-times-row outer product xi * eta^T, the matrix of X -> eta(X) xi.
inline Mat outer(const Vec& xi, const Vec& eta) {
  if (xi.size() != eta.size())
    throw DimensionMismatch("outer product of lengths " + std::to_string(xi.size()) + " and " +
                            std::to_string(eta.size()));
  return xi * eta.transpose();
}

}  // namespace parahyper

#endif
