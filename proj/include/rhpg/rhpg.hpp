#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rhpg/adam.hpp"
#include "rhpg/errors.hpp"
#include "rhpg/landscape.hpp"
#include "rhpg/model.hpp"
#include "rhpg/random.hpp"
#include "rhpg/simulator.hpp"

namespace rhpg {

enum class InnerSolver { FirstOrder, ZerothOrder };

struct ZerothOrderParams {
  double radius = 1e-2;
  double stepsize = 1e-3;
  std::size_t inner_iters = 20'000;
  std::size_t minibatch = 32;
};

struct RHPGConfig {
  std::size_t horizon = 1;
  InnerSolver mode = InnerSolver::FirstOrder;
  double grad_tol = 1e-4;
  AdamParams adam;
  ZerothOrderParams zo;
  std::size_t max_inner_iters = 1'000'000;
  std::uint64_t seed = 0;
  // Zeroth-order only: return the iterate with lowest closed-form cost
  // instead of the last one. Needs the model, so it is off by default.
  bool track_best = false;

  void validate() const;
};

struct TraceRow {
  std::size_t h = 0;
  std::size_t inner_iters = 0;
  // First order: final ||grad||_F. Zeroth order: ||estimate||_F of the last update.
  double grad_norm = 0.0;
  double cost = 0.0;  // closed-form subproblem cost of the returned iterate
  double elapsed_ms = 0.0;
  bool hit_cap = false;
};

using RHPGTrace = std::vector<TraceRow>;

struct RHPGResult {
  FilterPolicy policy;                // pi_{N-1}
  std::vector<FilterPolicy> history;  // pi_0 .. pi_{N-1}
  RHPGTrace trace;
};

// Raised when an iterate becomes non-finite or exceeds kDivergenceLimit;
// carries the trace rows completed before the failure.
class RHPGDivergence : public DivergenceError {
 public:
  RHPGDivergence(const std::string& what, RHPGTrace partial)
      : DivergenceError(what), trace_(std::move(partial)) {}
  const RHPGTrace& trace() const noexcept { return trace_; }

 private:
  RHPGTrace trace_;
};

inline constexpr double kDivergenceLimit = 1e12;

RHPGResult rhpg_first_order(const LinearGaussianSystem& sys, const RHPGConfig& cfg);

// Two-point estimate n(n+m)/(2r) [J(pi + rU) - J(pi - rU)] U from one
// simulated rollout with the injection at step h. Only the t = h+1 error term
// is evaluated; the earlier terms are common to both evaluations.
Matrix two_point_gradient_estimate(const LinearGaussianSystem& sys,
                                   std::span<const FilterPolicy> priors, std::size_t h,
                                   const FilterPolicy& policy, double radius, RandomStream& rng);

Matrix two_point_gradient_estimate(const LinearGaussianSystem& sys, const NoiseFactors& noise,
                                   std::span<const FilterPolicy> priors, std::size_t h,
                                   const FilterPolicy& policy, double radius, RandomStream& rng);

// The estimate for a given rollout and unit direction.
Matrix two_point_estimate_from(const InjectedSample& sample, const FilterPolicy& policy,
                               const Matrix& direction, double radius);

RHPGResult rhpg_zeroth_order(const LinearGaussianSystem& sys, const RHPGConfig& cfg);

// Dispatches on cfg.mode.
RHPGResult run_rhpg(const LinearGaussianSystem& sys, const RHPGConfig& cfg);

// Spectral norm of [A_L - A_L' | B_L - B_L'].
double policy_distance(const FilterPolicy& p, const FilterPolicy& q);

}  // namespace rhpg
