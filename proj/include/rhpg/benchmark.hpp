#pragma once

#include <vector>

#include "rhpg/linalg.hpp"
#include "rhpg/model.hpp"

namespace rhpg {

// Periodic 1-D convection-diffusion plant on [0, 1), spectrally discretized
// and integrated exactly over one time step.
struct CDParams {
  int n = 200;
  int m = 5;
  double nu = 2e-3;
  double vel = 5e-2;
  double dt = 0.05;
  double v_scale = 1e-1;
  double w_scale = 1e-9;
  double theta_scale = 1e-2;
  // Sensor state indices; empty means floor(j n / m), j = 0..m-1.
  std::vector<int> sensors;

  void validate() const;
  std::vector<int> sensor_indices() const;
};

// The wavenumber vector 2 pi [0, ..., n/2-1, 0, -n/2+1, ..., -1].
Vector cd_wavenumbers(int n);

// Transition matrix (1/n) D^H diag(exp((-i vel k - nu k^2) dt)) D.
Matrix cd_transition(const CDParams& p);

struct InitialCondition {
  Vector mean;    // sech(10 (x - 1/2)) on x_k = k/n
  Vector factor;  // sin(2 pi x_k) / 4, X0 = factor factor^T
};

InitialCondition initial_condition(int n);

LinearGaussianSystem build_cd_system(const CDParams& p);

}  // namespace rhpg
