#include "rhpg/landscape.hpp"

#include <string>

#include "rhpg/errors.hpp"

namespace rhpg {

FilterPolicy FilterPolicy::zero(Eigen::Index n, Eigen::Index m) {
  return {Matrix::Zero(n, n), Matrix::Zero(n, m)};
}

FilterPolicy FilterPolicy::from_stacked(const Matrix& pi, Eigen::Index n) {
  if (pi.rows() != n || pi.cols() < n) throw InputError("stacked policy has wrong shape");
  return {pi.leftCols(n), pi.rightCols(pi.cols() - n)};
}

FilterPolicy FilterPolicy::from_gain(const LinearGaussianSystem& sys, const Matrix& gain) {
  return {sys.a - gain * sys.c, gain};
}

Matrix FilterPolicy::stacked() const {
  Matrix pi(a_l.rows(), a_l.cols() + b_l.cols());
  pi << a_l, b_l;
  return pi;
}

void FilterPolicy::check_against(const LinearGaussianSystem& sys) const {
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.output_dim();
  if (a_l.rows() != n || a_l.cols() != n || b_l.rows() != n || b_l.cols() != m) {
    throw InputError("filter policy shape does not match the system (expected A_L " +
                     std::to_string(n) + "x" + std::to_string(n) + ", B_L " + std::to_string(n) +
                     "x" + std::to_string(m) + ")");
  }
  if (!a_l.allFinite() || !b_l.allFinite()) throw InputError("filter policy is not finite");
}

namespace {

// Second moment of z_t = [xhat_t; y_t] without injection.
Matrix psi_matrix(const LinearGaussianSystem& sys, const MomentState& s) {
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.output_dim();
  const Matrix& c = sys.c;
  Matrix psi(n + m, n + m);
  const Matrix lower = c * s.cov_x_xhat;
  psi.topLeftCorner(n, n) = s.var_xhat;
  psi.topRightCorner(n, m) = lower.transpose();
  psi.bottomLeftCorner(m, n) = lower;
  psi.bottomRightCorner(m, m) = c * s.var_x * c.transpose() + sys.v;
  return linalg::symmetrize(psi);
}

// E[x_t z_t^T] = [Cov(x, xhat) | Var(x) C^T].
Matrix state_cross_moment(const LinearGaussianSystem& sys, const MomentState& s) {
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.output_dim();
  Matrix out(n, n + m);
  out << s.cov_x_xhat, s.var_x * sys.c.transpose();
  return out;
}

void check_moments(const LinearGaussianSystem& sys, const MomentState& s) {
  const Eigen::Index n = sys.state_dim();
  if (s.var_x.rows() != n || s.var_x.cols() != n || s.var_xhat.rows() != n ||
      s.var_xhat.cols() != n || s.cov_x_xhat.rows() != n || s.cov_x_xhat.cols() != n ||
      s.mean_x.size() != n || s.mean_xhat.size() != n) {
    throw InputError("moment state does not match the system");
  }
}

}  // namespace

MomentState initial_moments(const LinearGaussianSystem& sys) {
  const Matrix outer = sys.x0_mean * sys.x0_mean.transpose();
  MomentState s;
  s.var_x = outer + sys.x0_cov;
  s.var_xhat = outer;
  s.cov_x_xhat = outer;
  s.mean_x = sys.x0_mean;
  s.mean_xhat = sys.x0_mean;
  s.t = 0;
  return s;
}

MomentState advance_moments(const LinearGaussianSystem& sys, const MomentState& s,
                            const FilterPolicy& policy) {
  policy.check_against(sys);
  check_moments(sys, s);
  const Matrix pi = policy.stacked();
  const Matrix psi = psi_matrix(sys, s);
  MomentState next;
  next.var_xhat = linalg::symmetrize(pi * psi * pi.transpose());
  next.cov_x_xhat = sys.a * state_cross_moment(sys, s) * pi.transpose();
  next.var_x = linalg::symmetrize(sys.a * s.var_x * sys.a.transpose() + sys.w);
  next.mean_x = sys.a * s.mean_x;
  Vector z(s.mean_xhat.size() + sys.output_dim());
  z << s.mean_xhat, sys.c * s.mean_x;
  next.mean_xhat = pi * z;
  next.t = s.t + 1;
  return next;
}

MomentState propagate_moments(const LinearGaussianSystem& sys,
                              std::span<const FilterPolicy> policies, std::size_t steps) {
  if (policies.size() < steps) {
    throw InputError("propagate_moments: need " + std::to_string(steps) + " policies, got " +
                     std::to_string(policies.size()));
  }
  MomentState s = initial_moments(sys);
  for (std::size_t t = 0; t < steps; ++t) s = advance_moments(sys, s, policies[t]);
  return s;
}

void injection_terms(const LinearGaussianSystem& sys, Matrix& delta, Matrix& xi) {
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.output_dim();
  // With D = [I; C]: Delta = D Theta D^T, Xi = A Theta D^T.
  Matrix d(n + m, n);
  d << Matrix::Identity(n, n), sys.c;
  const Matrix theta_dt = sys.theta_cov * d.transpose();
  delta = linalg::symmetrize(d * theta_dt);
  xi = sys.a * theta_dt;
}

GradientKernel gradient_kernel(const Matrix& delta, const Matrix& xi,
                               const LinearGaussianSystem& sys, const MomentState& moments) {
  check_moments(sys, moments);
  GradientKernel k;
  k.psi = psi_matrix(sys, moments);
  k.g = sys.a * state_cross_moment(sys, moments);
  k.delta = delta;
  k.xi = xi;
  return k;
}

GradientKernel gradient_kernel(const LinearGaussianSystem& sys, const MomentState& moments) {
  Matrix delta;
  Matrix xi;
  injection_terms(sys, delta, xi);
  return gradient_kernel(delta, xi, sys, moments);
}

Matrix analytic_gradient(const Matrix& pi, const GradientKernel& kernel) {
  if (pi.rows() != kernel.g.rows() || pi.cols() != kernel.psi.rows())
    throw InputError("analytic_gradient: policy does not match kernel");
  return 2.0 * (pi * (kernel.psi + kernel.delta) - (kernel.g + kernel.xi));
}

Matrix analytic_gradient(const FilterPolicy& policy, const GradientKernel& kernel) {
  return analytic_gradient(policy.stacked(), kernel);
}

Matrix subproblem_minimizer(const GradientKernel& kernel) {
  return linalg::solve_right_spd(kernel.g + kernel.xi, kernel.psi + kernel.delta);
}

double expected_sq_error(const MomentState& s) {
  return s.var_x.trace() - 2.0 * s.cov_x_xhat.trace() + s.var_xhat.trace();
}

double terminal_error(const LinearGaussianSystem& sys, const MomentState& s,
                      const FilterPolicy& candidate) {
  candidate.check_against(sys);
  check_moments(sys, s);
  // E|A x_h + w - pi z_h + Lambda theta|^2; the theta cross terms vanish.
  const Matrix pi = candidate.stacked();
  const Matrix g = sys.a * state_cross_moment(sys, s);
  const double base = (sys.a * s.var_x * sys.a.transpose() + sys.w).trace();
  const double linear = (pi * g.transpose()).trace();
  const double quadratic = (pi * psi_matrix(sys, s) * pi.transpose()).trace();
  return base - 2.0 * linear + quadratic + injection_regularizer(sys, candidate);
}

double subproblem_cost(const LinearGaussianSystem& sys, std::span<const FilterPolicy> priors,
                       const FilterPolicy& candidate, std::size_t h) {
  if (priors.size() < h) throw InputError("subproblem_cost: not enough prior policies");
  MomentState s = initial_moments(sys);
  double cost = expected_sq_error(s);
  for (std::size_t t = 0; t < h; ++t) {
    s = advance_moments(sys, s, priors[t]);
    cost += expected_sq_error(s);
  }
  return cost + terminal_error(sys, s, candidate);
}

double injection_regularizer(const LinearGaussianSystem& sys, const FilterPolicy& policy) {
  const Matrix lambda = sys.a - policy.b_l * sys.c - policy.a_l;
  return (lambda * sys.theta_cov * lambda.transpose()).trace();
}

Hessian hessian_spectrum(const GradientKernel& kernel) {
  Hessian h;
  h.matrix = linalg::symmetrize(2.0 * (kernel.psi + kernel.delta));
  const Vector ev = linalg::symmetric_eigenvalues(h.matrix);
  h.lambda_min = ev(0);
  h.lambda_max = ev(ev.size() - 1);
  return h;
}

Hessian hessian_kernel(const GradientKernel& kernel, double degeneracy_tol) {
  Hessian h = hessian_spectrum(kernel);
  if (!(h.lambda_min > degeneracy_tol * std::max(1.0, h.lambda_max))) {
    throw LandscapeDegeneracyError("subproblem Hessian is singular (lambda_min = " +
                                   std::to_string(h.lambda_min) + "); is Theta zero?");
  }
  return h;
}

Matrix mean_form_hessian(const LinearGaussianSystem& sys, const MomentState& s) {
  check_moments(sys, s);
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.output_dim();
  const Matrix& c = sys.c;
  const Matrix& theta = sys.theta_cov;
  const Matrix hh = s.mean_xhat * s.mean_xhat.transpose() + theta;
  const Matrix hx = s.mean_xhat * s.mean_x.transpose() + theta;
  const Matrix xx = s.mean_x * s.mean_x.transpose() + theta;
  Matrix out(n + m, n + m);
  out.topLeftCorner(n, n) = hh;
  out.topRightCorner(n, m) = hx * c.transpose();
  out.bottomLeftCorner(m, n) = c * hx.transpose();
  out.bottomRightCorner(m, m) = c * xx * c.transpose() + sys.v;
  return linalg::symmetrize(out);
}

}  // namespace rhpg
