#pragma once

#include "rhpg/linalg.hpp"

namespace rhpg {

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;

  void validate() const;
};

// Matrix-form Adam state for a p x q parameter: first moment m (p x q) and
// second moment v = running average of grad^T grad (q x q).
struct AdamState {
  Matrix m;
  Matrix v;
  long i = 0;

  static AdamState zeros(Eigen::Index rows, Eigen::Index cols);
};

// One update with step index i >= 1:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^T g,
//   p <- p - lr * mhat (vhat^{1/2} + eps I)^{-1}.
// Updates p, m and v in place.
void adam_step(Matrix& p, const Matrix& grad, Matrix& m, Matrix& v, const AdamParams& params,
               long i);

// Increments state.i and applies adam_step with it.
void adam_step(Matrix& p, const Matrix& grad, AdamState& state, const AdamParams& params);

}  // namespace rhpg
