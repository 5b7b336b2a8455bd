#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rhpg/linalg.hpp"
#include "rhpg/model.hpp"

namespace rhpg {

// Linear filter xhat_{t+1} = A_L xhat_t + B_L y_t, viewed as pi = [A_L | B_L].
struct FilterPolicy {
  Matrix a_l;
  Matrix b_l;

  static FilterPolicy zero(Eigen::Index n, Eigen::Index m);
  static FilterPolicy from_stacked(const Matrix& pi, Eigen::Index n);
  // [A - L C | L], the filter induced by a predictor gain L.
  static FilterPolicy from_gain(const LinearGaussianSystem& sys, const Matrix& gain);

  Matrix stacked() const;
  Eigen::Index state_dim() const { return a_l.rows(); }
  Eigen::Index output_dim() const { return b_l.cols(); }

  void check_against(const LinearGaussianSystem& sys) const;
};

// Uncentered moments E[x x^T], E[xhat xhat^T], E[x xhat^T] and the means of
// the plant state and the estimate at time t.
struct MomentState {
  Matrix var_x;
  Matrix var_xhat;
  Matrix cov_x_xhat;
  Vector mean_x;
  Vector mean_xhat;
  std::size_t t = 0;
};

MomentState initial_moments(const LinearGaussianSystem& sys);

MomentState advance_moments(const LinearGaussianSystem& sys, const MomentState& state,
                            const FilterPolicy& policy);

// Applies the first `steps` policies to the t = 0 moments.
MomentState propagate_moments(const LinearGaussianSystem& sys,
                              std::span<const FilterPolicy> policies, std::size_t steps);

struct GradientKernel {
  Matrix psi;    // (n+m)x(n+m) second moment of [xhat_h; y_h]
  Matrix g;      // n x (n+m) cross moment of x_{h+1} with [xhat_h; y_h]
  Matrix delta;  // injection contribution to psi
  Matrix xi;     // injection contribution to g
};

// Delta and Xi depend only on the plant and Theta.
void injection_terms(const LinearGaussianSystem& sys, Matrix& delta, Matrix& xi);

GradientKernel gradient_kernel(const LinearGaussianSystem& sys, const MomentState& moments);
GradientKernel gradient_kernel(const Matrix& delta, const Matrix& xi,
                               const LinearGaussianSystem& sys, const MomentState& moments);

// 2 [pi (Psi + Delta) - (G + Xi)].
Matrix analytic_gradient(const FilterPolicy& policy, const GradientKernel& kernel);
Matrix analytic_gradient(const Matrix& stacked_policy, const GradientKernel& kernel);

// Unique minimizer (G + Xi)(Psi + Delta)^{-1} of the subproblem.
Matrix subproblem_minimizer(const GradientKernel& kernel);

// Exact expected subproblem cost sum_{t=0}^{h+1} E|x_t - xhat_t|^2 with the
// candidate applied at step h and the injection at step h folded in.
double subproblem_cost(const LinearGaussianSystem& sys, std::span<const FilterPolicy> priors,
                       const FilterPolicy& candidate, std::size_t h);

// E|x_t - xhat_t|^2 = Tr(Var x) - 2 Tr(Cov(x, xhat)) + Tr(Var xhat).
double expected_sq_error(const MomentState& moments);

// E|x_{h+1} - xhat_{h+1}|^2 when the candidate acts on the injected step-h
// moments; the t = h+1 term of subproblem_cost.
double terminal_error(const LinearGaussianSystem& sys, const MomentState& moments,
                      const FilterPolicy& candidate);

// Tr(Lambda^T Lambda Theta) with Lambda = A - B_L C - A_L.
double injection_regularizer(const LinearGaussianSystem& sys, const FilterPolicy& policy);

struct Hessian {
  Matrix matrix;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

// 2 (Psi + Delta) and its extreme eigenvalues, without the pd check.
Hessian hessian_spectrum(const GradientKernel& kernel);

// As hessian_spectrum, but throws LandscapeDegeneracyError unless
// lambda_min > degeneracy_tol * max(1, lambda_max).
Hessian hessian_kernel(const GradientKernel& kernel, double degeneracy_tol = 1e-10);

// The mean-based Hessian form [[mu mu^T + Theta, ...]] stated alongside the
// strong convexity result; kept for comparison against hessian_kernel.
Matrix mean_form_hessian(const LinearGaussianSystem& sys, const MomentState& moments);

}  // namespace rhpg
