#include "rhpg/adam.hpp"

#include <cmath>

#include "rhpg/errors.hpp"

namespace rhpg {

void AdamParams::validate() const {
  if (!(lr >= 0.0)) throw InputError("adam lr must be nonnegative");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw InputError("adam beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw InputError("adam beta2 must lie in [0, 1)");
  if (!(eps_hat > 0.0)) throw InputError("adam eps_hat must be positive");
}

AdamState AdamState::zeros(Eigen::Index rows, Eigen::Index cols) {
  return {Matrix::Zero(rows, cols), Matrix::Zero(cols, cols), 0};
}

void adam_step(Matrix& p, const Matrix& grad, Matrix& m, Matrix& v, const AdamParams& params,
               long i) {
  if (i < 1) throw InputError("adam step index must be >= 1");
  if (grad.rows() != p.rows() || grad.cols() != p.cols() || m.rows() != p.rows() ||
      m.cols() != p.cols() || v.rows() != p.cols() || v.cols() != p.cols()) {
    throw InputError("adam_step: shape mismatch");
  }
  m = params.beta1 * m + (1.0 - params.beta1) * grad;
  v = params.beta2 * v + (1.0 - params.beta2) * (grad.transpose() * grad);
  const double k = static_cast<double>(i);
  const Matrix m_hat = m / (1.0 - std::pow(params.beta1, k));
  const Matrix v_hat = v / (1.0 - std::pow(params.beta2, k));
  Matrix precond = linalg::psd_sqrt(v_hat);
  precond.diagonal().array() += params.eps_hat;
  p -= params.lr * linalg::solve_right_spd(m_hat, precond);
}

void adam_step(Matrix& p, const Matrix& grad, AdamState& state, const AdamParams& params) {
  ++state.i;
  adam_step(p, grad, state.m, state.v, params, state.i);
}

}  // namespace rhpg
