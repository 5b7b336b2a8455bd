#include "rhpg/simulator.hpp"

#include <cmath>
#include <string>

#include "rhpg/errors.hpp"

namespace rhpg {

namespace {

Matrix factor_or_throw(const Matrix& cov, const char* name) {
  try {
    return linalg::psd_factor(cov);
  } catch (const NumericalError& e) {
    throw InputError(std::string("cannot factor ") + name + ": " + e.what());
  }
}

const FilterPolicy& policy_at(const PolicySchedule& schedule, std::size_t t) {
  if (const auto* single = std::get_if<FilterPolicy>(&schedule)) return *single;
  return std::get<std::vector<FilterPolicy>>(schedule)[t];
}

}  // namespace

NoiseFactors::NoiseFactors(const LinearGaussianSystem& sys) {
  sys.validate();
  x0 = factor_or_throw(sys.x0_cov, "x0_cov");
  w = factor_or_throw(sys.w, "w");
  v = factor_or_throw(sys.v, "v");
  theta = factor_or_throw(sys.theta_cov, "theta_cov");
}

// Draw order per step: measurement noise v_t, then process noise w_t.
Trajectory sample_trajectory(const LinearGaussianSystem& sys, std::size_t steps,
                             RandomStream& rng) {
  const NoiseFactors noise(sys);
  const Vector zero_y = Vector::Zero(sys.output_dim());
  const Vector zero_x = Vector::Zero(sys.state_dim());
  Trajectory traj;
  traj.seed = rng.seed();
  traj.states.reserve(steps + 1);
  traj.measurements.reserve(steps);
  traj.states.push_back(rng.gaussian(sys.x0_mean, noise.x0));
  for (std::size_t t = 0; t < steps; ++t) {
    const Vector& x = traj.states.back();
    traj.measurements.push_back(sys.c * x + rng.gaussian(zero_y, noise.v));
    traj.states.push_back(sys.a * x + rng.gaussian(zero_x, noise.w));
  }
  return traj;
}

InjectedSample rollout_with_injection(const LinearGaussianSystem& sys, const NoiseFactors& noise,
                                      std::span<const FilterPolicy> priors, std::size_t h,
                                      RandomStream& rng) {
  if (priors.size() < h) throw InputError("rollout_with_injection: not enough prior policies");
  const Vector zero_y = Vector::Zero(sys.output_dim());
  const Vector zero_x = Vector::Zero(sys.state_dim());
  Vector x = rng.gaussian(sys.x0_mean, noise.x0);
  Vector xhat = sys.x0_mean;
  for (std::size_t t = 0; t < h; ++t) {
    const Vector y = sys.c * x + rng.gaussian(zero_y, noise.v);
    xhat = priors[t].a_l * xhat + priors[t].b_l * y;
    x = sys.a * x + rng.gaussian(zero_x, noise.w);
  }
  const Vector theta = rng.gaussian(zero_x, noise.theta);
  InjectedSample out;
  out.x_h = x + theta;
  out.xhat_h = xhat + theta;
  out.y_h = sys.c * out.x_h + rng.gaussian(zero_y, noise.v);
  out.x_next = sys.a * out.x_h + rng.gaussian(zero_x, noise.w);
  return out;
}

InjectedSample rollout_with_injection(const LinearGaussianSystem& sys,
                                      std::span<const FilterPolicy> priors, std::size_t h,
                                      RandomStream& rng) {
  const NoiseFactors noise(sys);
  return rollout_with_injection(sys, noise, priors, h, rng);
}

Trajectory run_filter(const LinearGaussianSystem& sys, const PolicySchedule& schedule,
                      std::size_t steps, RandomStream& rng, const Vector& xhat0,
                      const FilterRunOptions& options) {
  const NoiseFactors noise(sys);
  if (const auto* seq = std::get_if<std::vector<FilterPolicy>>(&schedule)) {
    if (seq->size() < steps) throw InputError("policy schedule shorter than the run");
    for (const auto& p : *seq) p.check_against(sys);
  } else {
    std::get<FilterPolicy>(schedule).check_against(sys);
  }
  if (xhat0.size() != sys.state_dim()) throw InputError("xhat0 has wrong length");
  if (options.x0 && options.x0->size() != sys.state_dim())
    throw InputError("x0 override has wrong length");

  const Vector zero_y = Vector::Zero(sys.output_dim());
  const Vector zero_x = Vector::Zero(sys.state_dim());
  Trajectory traj;
  traj.seed = rng.seed();
  traj.states.reserve(steps + 1);
  traj.estimates.reserve(steps + 1);
  traj.err_norms.reserve(steps + 1);
  // The initial draw is consumed even when overridden so that the noise
  // sequence does not depend on the option.
  Vector x0 = rng.gaussian(sys.x0_mean, noise.x0);
  if (options.x0) x0 = *options.x0;
  traj.states.push_back(std::move(x0));
  traj.estimates.push_back(xhat0);
  traj.err_norms.push_back((traj.states.back() - xhat0).norm());
  for (std::size_t t = 0; t < steps; ++t) {
    const Vector& x = traj.states.back();
    const Vector& xhat = traj.estimates.back();
    const FilterPolicy& p = policy_at(schedule, t);
    Vector y = sys.c * x + rng.gaussian(zero_y, noise.v);
    Vector xhat_next = p.a_l * xhat + p.b_l * y;
    Vector x_next = sys.a * x + rng.gaussian(zero_x, noise.w);
    traj.measurements.push_back(std::move(y));
    if (!xhat_next.allFinite() || xhat_next.norm() > options.blowup_limit) {
      traj.truncated = true;
      break;
    }
    traj.err_norms.push_back((x_next - xhat_next).norm());
    traj.states.push_back(std::move(x_next));
    traj.estimates.push_back(std::move(xhat_next));
  }
  if (traj.truncated) traj.measurements.pop_back();
  return traj;
}

CostEstimate empirical_cost(const LinearGaussianSystem& sys, std::span<const FilterPolicy> priors,
                            const FilterPolicy& candidate, std::size_t h, std::size_t rollouts,
                            RandomStream& rng) {
  if (rollouts < 1) throw InputError("empirical_cost needs at least one rollout");
  if (priors.size() < h) throw InputError("empirical_cost: not enough prior policies");
  candidate.check_against(sys);
  const NoiseFactors noise(sys);
  const Vector zero_y = Vector::Zero(sys.output_dim());
  const Vector zero_x = Vector::Zero(sys.state_dim());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < rollouts; ++k) {
    Vector x = rng.gaussian(sys.x0_mean, noise.x0);
    Vector xhat = sys.x0_mean;
    double cost = 0.0;
    for (std::size_t t = 0; t < h; ++t) {
      cost += (x - xhat).squaredNorm();
      const Vector y = sys.c * x + rng.gaussian(zero_y, noise.v);
      xhat = priors[t].a_l * xhat + priors[t].b_l * y;
      x = sys.a * x + rng.gaussian(zero_x, noise.w);
    }
    const Vector theta = rng.gaussian(zero_x, noise.theta);
    x += theta;
    xhat += theta;
    cost += (x - xhat).squaredNorm();
    const Vector y = sys.c * x + rng.gaussian(zero_y, noise.v);
    const Vector xhat_next = candidate.a_l * xhat + candidate.b_l * y;
    const Vector x_next = sys.a * x + rng.gaussian(zero_x, noise.w);
    cost += (x_next - xhat_next).squaredNorm();
    sum += cost;
    sum_sq += cost * cost;
  }
  const double m = static_cast<double>(rollouts);
  CostEstimate out;
  out.mean = sum / m;
  const double var = rollouts > 1 ? std::max(0.0, (sum_sq - m * out.mean * out.mean) / (m - 1.0))
                                  : 0.0;
  out.std_error = std::sqrt(var / m);
  return out;
}

}  // namespace rhpg
