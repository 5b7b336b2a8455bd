#include "rhpg/rhpg.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>

namespace rhpg {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool debug_logging() {
  const char* env = std::getenv("RHPG_LOG");
  return env != nullptr && std::string(env) == "debug";
}

void check_iterate(const Matrix& pi, std::size_t h, const RHPGTrace& trace) {
  if (!pi.allFinite() || pi.cwiseAbs().maxCoeff() > kDivergenceLimit) {
    throw RHPGDivergence("policy diverged at outer step h = " + std::to_string(h), trace);
  }
}

}  // namespace

void RHPGConfig::validate() const {
  if (horizon < 1) throw InputError("horizon must be at least 1");
  if (!(grad_tol > 0.0)) throw InputError("grad_tol must be positive");
  if (max_inner_iters < 1) throw InputError("max_inner_iters must be positive");
  adam.validate();
  if (!(zo.radius > 0.0)) throw InputError("smoothing radius must be positive");
  if (!(zo.stepsize >= 0.0)) throw InputError("stepsize must be nonnegative");
  if (zo.minibatch < 1) throw InputError("minibatch must be at least 1");
}

RHPGResult rhpg_first_order(const LinearGaussianSystem& sys, const RHPGConfig& cfg) {
  if (cfg.mode != InnerSolver::FirstOrder) throw InputError("config is not first-order");
  sys.validate_for_learning();
  cfg.validate();
  const bool verbose = debug_logging();
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.output_dim();

  Matrix delta;
  Matrix xi;
  injection_terms(sys, delta, xi);

  RHPGResult result;
  result.history.reserve(cfg.horizon);
  Matrix pi = Matrix::Zero(n, n + m);
  MomentState moments = initial_moments(sys);
  double prefix_cost = 0.0;

  for (std::size_t h = 0; h < cfg.horizon; ++h) {
    const auto start = Clock::now();
    prefix_cost += expected_sq_error(moments);
    const GradientKernel kernel = gradient_kernel(delta, xi, sys, moments);
    AdamState adam = AdamState::zeros(n, n + m);

    TraceRow row;
    row.h = h;
    for (;;) {
      const Matrix grad = analytic_gradient(pi, kernel);
      row.grad_norm = grad.norm();
      if (row.grad_norm < cfg.grad_tol) break;
      if (row.inner_iters >= cfg.max_inner_iters) {
        row.hit_cap = true;
        if (verbose)
          std::cerr << "[rhpg] h=" << h << " inner cap reached, |grad|=" << row.grad_norm << "\n";
        break;
      }
      adam_step(pi, grad, adam, cfg.adam);
      ++row.inner_iters;
      check_iterate(pi, h, result.trace);
    }

    const FilterPolicy policy = FilterPolicy::from_stacked(pi, n);
    row.cost = prefix_cost + terminal_error(sys, moments, policy);
    row.elapsed_ms = ms_since(start);
    if (verbose) {
      std::cerr << "[rhpg] h=" << h << " iters=" << row.inner_iters << " |grad|=" << row.grad_norm
                << " cost=" << row.cost << "\n";
    }
    result.trace.push_back(row);
    result.history.push_back(policy);
    // pi stays as the warm start for h + 1.
    moments = advance_moments(sys, moments, policy);
  }
  result.policy = result.history.back();
  return result;
}

Matrix two_point_estimate_from(const InjectedSample& sample, const FilterPolicy& policy,
                               const Matrix& direction, double radius) {
  if (!(radius > 0.0)) throw InputError("smoothing radius must be positive");
  const Eigen::Index n = policy.state_dim();
  const Eigen::Index m = policy.output_dim();
  Vector z(n + m);
  z << sample.xhat_h, sample.y_h;
  const Matrix pi = policy.stacked();
  const double plus = (sample.x_next - (pi + radius * direction) * z).squaredNorm();
  const double minus = (sample.x_next - (pi - radius * direction) * z).squaredNorm();
  const double dim = static_cast<double>(n * (n + m));
  return (dim / (2.0 * radius) * (plus - minus)) * direction;
}

Matrix two_point_gradient_estimate(const LinearGaussianSystem& sys, const NoiseFactors& noise,
                                   std::span<const FilterPolicy> priors, std::size_t h,
                                   const FilterPolicy& policy, double radius, RandomStream& rng) {
  if (!(radius > 0.0)) throw InputError("smoothing radius must be positive");
  policy.check_against(sys);
  Matrix u = rng.normal_matrix(sys.state_dim(), sys.state_dim() + sys.output_dim());
  u /= u.norm();
  const InjectedSample sample = rollout_with_injection(sys, noise, priors, h, rng);
  return two_point_estimate_from(sample, policy, u, radius);
}

Matrix two_point_gradient_estimate(const LinearGaussianSystem& sys,
                                   std::span<const FilterPolicy> priors, std::size_t h,
                                   const FilterPolicy& policy, double radius, RandomStream& rng) {
  const NoiseFactors noise(sys);
  return two_point_gradient_estimate(sys, noise, priors, h, policy, radius, rng);
}

RHPGResult rhpg_zeroth_order(const LinearGaussianSystem& sys, const RHPGConfig& cfg) {
  if (cfg.mode != InnerSolver::ZerothOrder) throw InputError("config is not zeroth-order");
  sys.validate_for_learning();
  cfg.validate();
  const bool verbose = debug_logging();
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.output_dim();
  const NoiseFactors noise(sys);
  const RandomStream root(cfg.seed);
  const double batch = static_cast<double>(cfg.zo.minibatch);

  RHPGResult result;
  result.history.reserve(cfg.horizon);
  Matrix pi = Matrix::Zero(n, n + m);

  for (std::size_t h = 0; h < cfg.horizon; ++h) {
    const auto start = Clock::now();
    const std::span<const FilterPolicy> priors(result.history);
    TraceRow row;
    row.h = h;

    Matrix best = pi;
    double best_cost = std::numeric_limits<double>::infinity();
    if (cfg.track_best) best_cost = subproblem_cost(sys, priors, FilterPolicy::from_stacked(pi, n), h);

    for (std::size_t it = 0; it < cfg.zo.inner_iters; ++it) {
      const FilterPolicy current = FilterPolicy::from_stacked(pi, n);
      Matrix estimate = Matrix::Zero(n, n + m);
      // One substream per (h, iteration, sample), summed in index order.
      for (std::size_t k = 0; k < cfg.zo.minibatch; ++k) {
        RandomStream rng = root.substream({h, it, k});
        estimate += two_point_gradient_estimate(sys, noise, priors, h, current, cfg.zo.radius, rng);
      }
      estimate /= batch;
      row.grad_norm = estimate.norm();
      pi -= cfg.zo.stepsize * estimate;
      ++row.inner_iters;
      check_iterate(pi, h, result.trace);
      if (cfg.track_best) {
        const double c = subproblem_cost(sys, priors, FilterPolicy::from_stacked(pi, n), h);
        if (c < best_cost) {
          best_cost = c;
          best = pi;
        }
      }
    }
    if (cfg.track_best) pi = best;

    const FilterPolicy policy = FilterPolicy::from_stacked(pi, n);
    row.cost = subproblem_cost(sys, priors, policy, h);
    row.elapsed_ms = ms_since(start);
    if (verbose) {
      std::cerr << "[rhpg-zo] h=" << h << " iters=" << row.inner_iters
                << " |est|=" << row.grad_norm << " cost=" << row.cost << "\n";
    }
    result.trace.push_back(row);
    result.history.push_back(policy);
  }
  result.policy = result.history.back();
  return result;
}

RHPGResult run_rhpg(const LinearGaussianSystem& sys, const RHPGConfig& cfg) {
  return cfg.mode == InnerSolver::FirstOrder ? rhpg_first_order(sys, cfg)
                                             : rhpg_zeroth_order(sys, cfg);
}

double policy_distance(const FilterPolicy& p, const FilterPolicy& q) {
  if (p.a_l.rows() != q.a_l.rows() || p.a_l.cols() != q.a_l.cols() ||
      p.b_l.rows() != q.b_l.rows() || p.b_l.cols() != q.b_l.cols()) {
    throw InputError("policy_distance: dimension mismatch");
  }
  return linalg::spectral_norm(p.stacked() - q.stacked());
}

}  // namespace rhpg
