#include "rhpg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rhpg/errors.hpp"

namespace rhpg::linalg {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Vector symmetric_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve failed");
  return es.eigenvalues();
}

namespace {

// Eigen-decomposes m and clamps eigenvalues in [-kPsdTolerance, 0) to zero.
Eigen::SelfAdjointEigenSolver<Matrix> clamped_eigen(const Matrix& m, Vector& values) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve failed");
  values = es.eigenvalues();
  const double floor = -kPsdTolerance * std::max(1.0, values(values.size() - 1));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values(k) < 0.0) {
      if (values(k) < floor) {
        throw NumericalError("matrix is not positive semidefinite (eigenvalue " +
                             std::to_string(values(k)) + ")");
      }
      values(k) = 0.0;
    }
  }
  return es;
}

}  // namespace

Matrix psd_sqrt(const Matrix& m) {
  Vector values;
  auto es = clamped_eigen(m, values);
  const Matrix& u = es.eigenvectors();
  return u * values.cwiseSqrt().asDiagonal() * u.transpose();
}

Matrix psd_factor(const Matrix& m) {
  Vector values;
  auto es = clamped_eigen(m, values);
  return es.eigenvectors() * values.cwiseSqrt().asDiagonal();
}

double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolve failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

Matrix solve_right_spd(const Matrix& b, const Matrix& s) {
  Eigen::LLT<Matrix> llt(symmetrize(s));
  if (llt.info() != Eigen::Success) throw NumericalError("matrix is not positive definite");
  // X S = B  <=>  S X^T = B^T
  return llt.solve(b.transpose()).transpose();
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace rhpg::linalg
