#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rhpg/landscape.hpp"
#include "rhpg/model.hpp"
#include "rhpg/random.hpp"

namespace rhpg {

struct Trajectory {
  std::vector<Vector> states;        // x_0 .. x_T
  std::vector<Vector> measurements;  // y_0 .. y_{T-1}
  std::vector<Vector> estimates;     // xhat_0 .. xhat_T, empty for plain samples
  std::vector<double> err_norms;     // |x_t - xhat_t|_2 when estimates exist
  std::uint64_t seed = 0;
  std::size_t t0 = 0;
  bool truncated = false;  // estimator blew up; arrays end at the last finite step

  std::size_t steps() const { return measurements.size(); }
};

// Precomputed factors of the noise covariances. Building one validates the
// system once so that per-rollout sampling does no factorization.
struct NoiseFactors {
  Matrix x0;
  Matrix w;
  Matrix v;
  Matrix theta;

  explicit NoiseFactors(const LinearGaussianSystem& sys);
};

Trajectory sample_trajectory(const LinearGaussianSystem& sys, std::size_t steps,
                             RandomStream& rng);

struct InjectedSample {
  Vector x_h;     // includes theta_0
  Vector xhat_h;  // includes theta_0
  Vector x_next;
  Vector y_h;
};

// Runs the plant and the prior filters to step h, adds one shared
// theta_0 ~ N(0, Theta) to x_h and xhat_h, then draws x_{h+1} and y_h.
InjectedSample rollout_with_injection(const LinearGaussianSystem& sys,
                                      std::span<const FilterPolicy> priors, std::size_t h,
                                      RandomStream& rng);
InjectedSample rollout_with_injection(const LinearGaussianSystem& sys, const NoiseFactors& noise,
                                      std::span<const FilterPolicy> priors, std::size_t h,
                                      RandomStream& rng);

// Either one time-invariant filter or one filter per step.
using PolicySchedule = std::variant<FilterPolicy, std::vector<FilterPolicy>>;

struct FilterRunOptions {
  // Overrides the random initial state (deterministic-start experiments).
  std::optional<Vector> x0;
  double blowup_limit = 1e12;
};

Trajectory run_filter(const LinearGaussianSystem& sys, const PolicySchedule& schedule,
                      std::size_t steps, RandomStream& rng, const Vector& xhat0,
                      const FilterRunOptions& options = {});

struct CostEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo average of sum_{t=0}^{h+1} |x_t - xhat_t|^2 over injected rollouts.
CostEstimate empirical_cost(const LinearGaussianSystem& sys, std::span<const FilterPolicy> priors,
                            const FilterPolicy& candidate, std::size_t h, std::size_t rollouts,
                            RandomStream& rng);

}  // namespace rhpg
