#pragma once

#include <Eigen/Dense>

namespace rhpg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

// Negative eigenvalues down to -kPsdTolerance * max(1, lambda_max) are
// treated as zero.
inline constexpr double kPsdTolerance = 1e-12;

Matrix symmetrize(const Matrix& m);

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& m);

// Symmetric psd square root via eigendecomposition. Slightly negative
// eigenvalues are clamped to zero; anything lower throws NumericalError.
Matrix psd_sqrt(const Matrix& m);

// Factor F with F F^T = m for a (possibly rank-deficient) psd m.
Matrix psd_factor(const Matrix& m);

double spectral_radius(const Matrix& m);

double spectral_norm(const Matrix& m);

double condition_number(const Matrix& m);

// Solves X * S = B for X with S symmetric pd (right division).
Matrix solve_right_spd(const Matrix& b, const Matrix& s);

bool all_finite(const Matrix& m);

}  // namespace linalg
}  // namespace rhpg
