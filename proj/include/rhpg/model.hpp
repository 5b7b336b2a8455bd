#pragma once

#include <cstddef>
#include <vector>

#include "rhpg/linalg.hpp"

namespace rhpg {

// Plant x_{t+1} = A x_t + w_t, y_t = C x_t + v_t with w ~ N(0, W), v ~ N(0, V),
// x_0 ~ N(x0_mean, x0_cov), plus the covariance of the injection noise used by
// the receding-horizon subproblems.
struct LinearGaussianSystem {
  Matrix a;
  Matrix c;
  Matrix w;
  Matrix v;
  Vector x0_mean;
  Matrix x0_cov;
  Matrix theta_cov;

  Eigen::Index state_dim() const { return a.rows(); }
  Eigen::Index output_dim() const { return c.rows(); }

  // Dimensions, symmetry, W and V pd, X0 and Theta psd. Throws InputError.
  void validate() const;
  // validate() plus Theta pd and a nonzero initial mean.
  void validate_for_learning() const;
};

struct RiccatiSolution {
  Matrix sigma;
  Matrix gain;
  Matrix closed_loop;
  double residual = 0.0;
  long iterations = 0;
  // X0 - Sigma* is positive definite (frozen time-varying filters stable).
  bool x0_dominates = false;
};

struct FareOptions {
  double tol = 1e-12;
  long max_iter = 1'000'000;
};

struct TimeVaryingGain {
  Matrix gain;
  Matrix sigma;
};

// One step of the filter Riccati difference equation, symmetrized.
Matrix frde_step(const LinearGaussianSystem& sys, const Matrix& sigma);

// L = A Sigma C^T (V + C Sigma C^T)^{-1}.
Matrix kalman_gain(const LinearGaussianSystem& sys, const Matrix& sigma);

// Fixed point of the FRDE, reached by forward iteration from X0 (or W when
// X0 = 0). Throws NonConvergenceError past max_iter and ConsistencyError if
// the converged closed loop is not Schur stable.
RiccatiSolution solve_fare(const LinearGaussianSystem& sys, const FareOptions& options = {});

// (L*_t, Sigma*_t) for t = 0..horizon-1 starting from Sigma*_0 = X0.
std::vector<TimeVaryingGain> time_varying_gains(const LinearGaussianSystem& sys,
                                                std::size_t horizon);

// ||X||_Sigma = || Sigma^{1/2} X Sigma^{-1/2} ||_2.
double sigma_induced_norm(const Matrix& x, const Matrix& sigma);

struct HorizonBound {
  double raw = 0.0;  // unrounded bound, may be -inf when X0 = Sigma*
  std::size_t horizon = 1;
  double closed_loop_norm = 0.0;  // ||A_L*||_* in the Sigma*-induced norm
  double kappa = 0.0;
  double initial_error_norm = 0.0;  // ||X0 - Sigma*||_*
};

// Horizon after which the time-varying gain is eps-close to the stationary one.
// Throws BoundInapplicableError when ||A_L*||_* >= 1.
HorizonBound horizon_bound(const LinearGaussianSystem& sys, const RiccatiSolution& fare,
                           double eps);

}  // namespace rhpg
