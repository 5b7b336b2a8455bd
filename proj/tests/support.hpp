#pragma once

#include <cstdint>
#include <optional>

#include "rhpg/linalg.hpp"
#include "rhpg/model.hpp"
#include "rhpg/random.hpp"

namespace rhpg::testing {

inline Matrix random_spd(RandomStream& rng, Eigen::Index n, double floor = 0.1) {
  const Matrix q = rng.normal_matrix(n, n);
  return q * q.transpose() / static_cast<double>(n) + floor * Matrix::Identity(n, n);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Random plant with spectral radius in [0.3, 1.3), pd noises, Theta = 1e-2 I
// and X0 = I (overwritten by the callers that need X0 > Sigma*).
inline LinearGaussianSystem random_system(RandomStream& rng, Eigen::Index n, Eigen::Index m) {
  LinearGaussianSystem s;
  s.a = rng.normal_matrix(n, n);
  s.a *= (0.3 + rng.uniform()) / linalg::spectral_radius(s.a);
  s.c = rng.normal_matrix(m, n);
  s.w = random_spd(rng, n);
  s.v = random_spd(rng, m);
  s.x0_mean = rng.normal_vector(n);
  s.x0_cov = Matrix::Identity(n, n);
  s.theta_cov = 1e-2 * Matrix::Identity(n, n);
  return s;
}

struct Instance {
  LinearGaussianSystem sys;
  RiccatiSolution fare;
};

// A random system whose X0 dominates Sigma* and whose Kalman closed loop is
// a contraction in the Sigma*-induced norm, i.e. one to which the horizon
// bound applies. Returns nothing for rejected draws.
inline std::optional<Instance> random_bounded_instance(RandomStream& rng, Eigen::Index n,
                                                       Eigen::Index m) {
  Instance inst{random_system(rng, n, m), {}};
  inst.fare = solve_fare(inst.sys);
  if (sigma_induced_norm(inst.fare.closed_loop, inst.fare.sigma) >= 1.0) return std::nullopt;
  inst.sys.x0_cov = inst.fare.sigma + random_spd(rng, n);
  inst.fare.x0_dominates = true;
  return inst;
}

inline LinearGaussianSystem scalar_system(double a = 1.0, double c = 1.0, double w = 1.0,
                                          double v = 1.0, double x0 = 2.0) {
  LinearGaussianSystem s;
  s.a = Matrix::Constant(1, 1, a);
  s.c = Matrix::Constant(1, 1, c);
  s.w = Matrix::Constant(1, 1, w);
  s.v = Matrix::Constant(1, 1, v);
  s.x0_mean = Vector::Constant(1, 1.0);
  s.x0_cov = Matrix::Constant(1, 1, x0);
  s.theta_cov = Matrix::Constant(1, 1, 1e-2);
  return s;
}

}  // namespace rhpg::testing
