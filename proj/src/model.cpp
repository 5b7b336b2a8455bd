#include "rhpg/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rhpg/errors.hpp"

namespace rhpg {

namespace {

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw InputError(std::string(name) + " has shape " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

void require_symmetric(const Matrix& m, const char* name) {
  if (!linalg::is_symmetric(m)) throw InputError(std::string(name) + " is not symmetric");
}

void require_pd(const Matrix& m, const char* name) {
  require_symmetric(m, name);
  Eigen::LLT<Matrix> llt(linalg::symmetrize(m));
  if (llt.info() != Eigen::Success || linalg::symmetric_eigenvalues(m)(0) <= 0.0) {
    throw InputError(std::string(name) + " is not positive definite");
  }
}

void require_psd(const Matrix& m, const char* name) {
  require_symmetric(m, name);
  if (m.size() > 0 && linalg::symmetric_eigenvalues(m)(0) < -linalg::kPsdTolerance) {
    throw InputError(std::string(name) + " is not positive semidefinite");
  }
}

// Cholesky of the innovation covariance V + C Sigma C^T.
Eigen::LLT<Matrix> innovation_llt(const LinearGaussianSystem& sys, const Matrix& sigma) {
  const Eigen::Index n = sys.state_dim();
  if (sigma.rows() != n || sigma.cols() != n) {
    throw InputError("covariance has shape " + std::to_string(sigma.rows()) + "x" +
                     std::to_string(sigma.cols()) + ", expected " + std::to_string(n) + "x" +
                     std::to_string(n));
  }
  Eigen::LLT<Matrix> llt(linalg::symmetrize(sys.v + sys.c * sigma * sys.c.transpose()));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("V + C Sigma C^T is not positive definite (is V pd?)");
  }
  return llt;
}

}  // namespace

void LinearGaussianSystem::validate() const {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = c.rows();
  if (n == 0) throw InputError("state dimension must be positive");
  if (m == 0) throw InputError("measurement dimension must be positive");
  require_shape(a, n, n, "a");
  require_shape(c, m, n, "c");
  require_shape(w, n, n, "w");
  require_shape(v, m, m, "v");
  require_shape(x0_cov, n, n, "x0_cov");
  require_shape(theta_cov, n, n, "theta_cov");
  if (x0_mean.size() != n) throw InputError("x0_mean has wrong length");
  if (!a.allFinite() || !c.allFinite() || !x0_mean.allFinite())
    throw InputError("system contains non-finite entries");
  require_pd(w, "w");
  require_pd(v, "v");
  require_psd(x0_cov, "x0_cov");
  require_psd(theta_cov, "theta_cov");
}

void LinearGaussianSystem::validate_for_learning() const {
  validate();
  require_pd(theta_cov, "theta_cov");
  if (x0_mean.isZero(0.0)) throw InputError("x0_mean must be nonzero");
}

Matrix frde_step(const LinearGaussianSystem& sys, const Matrix& sigma) {
  const auto llt = innovation_llt(sys, sigma);
  const Matrix as = sys.a * sigma;
  const Matrix asc = as * sys.c.transpose();
  // A S A^T - (A S C^T) S_y^{-1} (A S C^T)^T + W
  const Matrix correction = asc * llt.solve(asc.transpose());
  return linalg::symmetrize(as * sys.a.transpose() - correction + sys.w);
}

Matrix kalman_gain(const LinearGaussianSystem& sys, const Matrix& sigma) {
  const auto llt = innovation_llt(sys, sigma);
  const Matrix asc = sys.a * sigma * sys.c.transpose();
  return llt.solve(asc.transpose()).transpose();
}

RiccatiSolution solve_fare(const LinearGaussianSystem& sys, const FareOptions& options) {
  sys.validate();
  if (!(options.tol > 0.0)) throw InputError("tol must be positive");
  if (options.max_iter < 1) throw InputError("max_iter must be positive");

  Matrix sigma = sys.x0_cov.isZero(0.0) ? sys.w : sys.x0_cov;
  long iter = 0;
  bool converged = false;
  while (iter < options.max_iter) {
    Matrix next = frde_step(sys, sigma);
    const double change = (next - sigma).norm() / std::max(1.0, sigma.norm());
    sigma = std::move(next);
    ++iter;
    if (!sigma.allFinite()) throw NumericalError("FRDE iterate became non-finite");
    if (change < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NonConvergenceError("FRDE did not converge within " + std::to_string(iter) +
                                  " iterations (is (C, A) detectable?)",
                              iter);
  }

  RiccatiSolution sol;
  sol.sigma = sigma;
  sol.gain = kalman_gain(sys, sigma);
  sol.closed_loop = sys.a - sol.gain * sys.c;
  sol.residual = (frde_step(sys, sigma) - sigma).norm();
  sol.iterations = iter;
  const double rho = linalg::spectral_radius(sol.closed_loop);
  if (!(rho < 1.0)) {
    throw ConsistencyError("converged Riccati solution is not stabilizing (rho = " +
                           std::to_string(rho) + ")");
  }
  sol.x0_dominates = linalg::symmetric_eigenvalues(sys.x0_cov - sigma)(0) > 0.0;
  return sol;
}

std::vector<TimeVaryingGain> time_varying_gains(const LinearGaussianSystem& sys,
                                                std::size_t horizon) {
  sys.validate();
  if (horizon < 1) throw InputError("horizon must be at least 1");
  std::vector<TimeVaryingGain> out;
  out.reserve(horizon);
  Matrix sigma = sys.x0_cov;
  for (std::size_t t = 0; t < horizon; ++t) {
    out.push_back({kalman_gain(sys, sigma), sigma});
    if (t + 1 < horizon) sigma = frde_step(sys, sigma);
  }
  return out;
}

double sigma_induced_norm(const Matrix& x, const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || x.rows() != sigma.rows() || x.cols() != sigma.cols())
    throw InputError("sigma_induced_norm: dimension mismatch");
  if (!linalg::is_symmetric(sigma, 1e-9)) throw InputError("sigma is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::symmetrize(sigma));
  if (es.info() != Eigen::Success) throw NumericalError("eigensolve failed");
  const Vector& lambda = es.eigenvalues();
  if (!(lambda(0) > 0.0)) throw InputError("sigma is not positive definite");
  const Matrix& u = es.eigenvectors();
  const Matrix half = u * lambda.cwiseSqrt().asDiagonal() * u.transpose();
  const Matrix inv_half = u * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
  return linalg::spectral_norm(half * x * inv_half);
}

HorizonBound horizon_bound(const LinearGaussianSystem& sys, const RiccatiSolution& fare,
                           double eps) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  HorizonBound out;
  out.closed_loop_norm = sigma_induced_norm(fare.closed_loop, fare.sigma);
  if (!(out.closed_loop_norm < 1.0)) {
    throw BoundInapplicableError("||A_L*||_* = " + std::to_string(out.closed_loop_norm) +
                                 " >= 1; horizon bound does not apply");
  }
  out.kappa = linalg::condition_number(fare.sigma);
  out.initial_error_norm = sigma_induced_norm(sys.x0_cov - fare.sigma, fare.sigma);
  const double numerator = out.initial_error_norm * out.kappa *
                           linalg::spectral_norm(fare.closed_loop) * linalg::spectral_norm(sys.c);
  const double lambda_min_v = linalg::symmetric_eigenvalues(sys.v)(0);

  if (numerator == 0.0) {
    out.raw = -std::numeric_limits<double>::infinity();
  } else if (out.closed_loop_norm == 0.0) {
    out.raw = 1.0;
  } else {
    out.raw = 0.5 * std::log(numerator / (eps * lambda_min_v)) /
                  std::log(1.0 / out.closed_loop_norm) +
              1.0;
  }
  const double rounded = std::ceil(out.raw);
  if (rounded > 1e15) throw BoundInapplicableError("horizon bound is astronomically large");
  out.horizon = rounded < 1.0 ? 1 : static_cast<std::size_t>(rounded);
  return out;
}

}  // namespace rhpg
