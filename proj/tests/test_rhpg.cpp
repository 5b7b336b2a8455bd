#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "rhpg/errors.hpp"
#include "rhpg/rhpg.hpp"
#include "support.hpp"

using namespace rhpg;
using rhpg::testing::max_abs;
using rhpg::testing::random_system;
using rhpg::testing::scalar_system;

namespace {

RHPGConfig first_order(std::size_t horizon) {
  RHPGConfig cfg;
  cfg.horizon = horizon;
  cfg.grad_tol = 1e-8;
  cfg.adam.lr = 1e-2;
  return cfg;
}

RHPGConfig zeroth_order(std::size_t horizon, std::uint64_t seed) {
  RHPGConfig cfg;
  cfg.mode = InnerSolver::ZerothOrder;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.zo.inner_iters = 200;
  cfg.zo.minibatch = 4;
  return cfg;
}

// Smallest Hessian eigenvalue at step h given the learned priors.
GradientKernel kernel_at(const LinearGaussianSystem& s, const std::vector<FilterPolicy>& priors,
                         std::size_t h) {
  return gradient_kernel(s, propagate_moments(s, priors, h));
}

}  // namespace

TEST_CASE("single-step RHPG reaches the subproblem minimizer") {
  const LinearGaussianSystem s = scalar_system();
  const RHPGResult r = rhpg_first_order(s, first_order(1));
  REQUIRE(r.history.size() == 1);
  const GradientKernel k = kernel_at(s, r.history, 0);
  const double lam = hessian_kernel(k).lambda_min;
  CHECK((r.policy.stacked() - subproblem_minimizer(k)).norm() <= 1e-8 / lam * (1.0 + 1e-6));
  CHECK(r.trace.size() == 1);
  CHECK(r.trace[0].grad_norm < 1e-8);
  CHECK_FALSE(r.trace[0].hit_cap);
  CHECK(r.trace[0].cost == doctest::Approx(subproblem_cost(s, {}, r.policy, 0)).epsilon(1e-12));
}

TEST_CASE("zero dynamics learn the zero filter") {
  RandomStream rng(51);
  LinearGaussianSystem s = random_system(rng, 3, 2);
  s.a.setZero();
  const RHPGResult r = rhpg_first_order(s, first_order(4));
  for (const auto& p : r.history) CHECK(p.stacked().norm() < 1e-6);
}

TEST_CASE("every first-order iterate solves its subproblem to tolerance") {
  RandomStream rng(52);
  for (int trial = 0; trial < 5; ++trial) {
    const LinearGaussianSystem s = random_system(rng, 1 + trial % 3, 1 + trial % 2);
    const RHPGConfig cfg = first_order(6);
    const RHPGResult r = rhpg_first_order(s, cfg);
    for (std::size_t h = 0; h < r.history.size(); ++h) {
      const GradientKernel k = kernel_at(s, r.history, h);
      const double lam = hessian_kernel(k).lambda_min;
      CHECK((r.history[h].stacked() - subproblem_minimizer(k)).norm() <= cfg.grad_tol / lam * 1.01);
    }
  }
}

TEST_CASE("auto-selected horizon brings the learned filter within eps of the KF") {
  RandomStream rng(53);
  int done = 0;
  while (done < 5) {
    auto inst = rhpg::testing::random_bounded_instance(rng, 1 + done % 3, 1 + done % 2);
    if (!inst) continue;
    const double eps = 1e-2;
    RHPGConfig cfg;
    cfg.horizon = horizon_bound(inst->sys, inst->fare, eps).horizon;
    cfg.grad_tol = 1e-6;
    cfg.adam.lr = 1e-2;
    const RHPGResult r = rhpg_first_order(inst->sys, cfg);
    const FilterPolicy kf = FilterPolicy::from_gain(inst->sys, inst->fare.gain);
    CHECK(policy_distance(r.policy, kf) <= eps);
    CHECK(linalg::spectral_radius(r.policy.a_l) < 1.0);
    ++done;
  }
}

TEST_CASE("two-point estimate is a directional derivative of the sample cost") {
  RandomStream rng(54);
  const LinearGaussianSystem s = random_system(rng, 2, 1);
  const std::vector<FilterPolicy> priors{FilterPolicy::from_gain(s, solve_fare(s).gain)};
  const FilterPolicy p{0.3 * rng.normal_matrix(2, 2), 0.3 * rng.normal_matrix(2, 1)};
  for (int k = 0; k < 20; ++k) {
    const InjectedSample smp = rollout_with_injection(s, priors, 1, rng);
    Matrix u = rng.normal_matrix(2, 3);
    u /= u.norm();
    Vector z(3);
    z << smp.xhat_h, smp.y_h;
    // d/dpi |x' - pi z|^2 = -2 (x' - pi z) z^T; the sample cost is quadratic in pi.
    const Matrix grad = -2.0 * (smp.x_next - p.stacked() * z) * z.transpose();
    const Matrix expected = 6.0 * (grad.array() * u.array()).sum() * u;
    for (double r : {1e-3, 1e-2, 1.0}) {
      const Matrix est = two_point_estimate_from(smp, p, u, r);
      CHECK(max_abs(est - expected) < 1e-9 * std::max(1.0, max_abs(expected)));
      // Flipping the direction gives the same estimate.
      CHECK(max_abs(two_point_estimate_from(smp, p, -u, r) - est) < 1e-9 * std::max(1.0, max_abs(est)));
    }
  }
}

TEST_CASE("two-point estimates average to the analytic gradient") {
  RandomStream rng(55);
  const LinearGaussianSystem s = random_system(rng, 2, 1);
  const FilterPolicy p{0.2 * rng.normal_matrix(2, 2), 0.2 * rng.normal_matrix(2, 1)};
  const Matrix grad = analytic_gradient(p, gradient_kernel(s, initial_moments(s)));
  const NoiseFactors noise(s);
  const int samples = 40000;
  Matrix sum = Matrix::Zero(2, 3);
  const RandomStream root(56);
  for (int k = 0; k < samples; ++k) {
    RandomStream r = root.substream({static_cast<std::uint64_t>(k)});
    sum += two_point_gradient_estimate(s, noise, {}, 0, p, 1e-2, r);
  }
  CHECK((sum / samples - grad).norm() / grad.norm() < 0.1);
}

TEST_CASE("averaging B estimates divides the variance by B") {
  RandomStream rng(57);
  const LinearGaussianSystem s = random_system(rng, 2, 1);
  const FilterPolicy p = FilterPolicy::zero(2, 1);
  const NoiseFactors noise(s);
  const int groups = 4000, b = 4;
  std::vector<Matrix> single, batched;
  const RandomStream root(58);
  for (int g = 0; g < groups; ++g) {
    Matrix acc = Matrix::Zero(2, 3);
    for (int k = 0; k < b; ++k) {
      RandomStream r = root.substream({static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(k)});
      const Matrix e = two_point_gradient_estimate(s, noise, {}, 0, p, 1e-2, r);
      if (k == 0) single.push_back(e);
      acc += e;
    }
    batched.push_back(acc / b);
  }
  auto total_variance = [](const std::vector<Matrix>& xs) {
    Matrix mean = Matrix::Zero(xs[0].rows(), xs[0].cols());
    for (const auto& x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double v = 0.0;
    for (const auto& x : xs) v += (x - mean).squaredNorm();
    return v / static_cast<double>(xs.size() - 1);
  };
  const double ratio = total_variance(single) / total_variance(batched);
  CHECK(ratio == doctest::Approx(static_cast<double>(b)).epsilon(0.25));
}

TEST_CASE("zero stepsize keeps the zero initialization") {
  RHPGConfig cfg = zeroth_order(3, 1);
  cfg.zo.stepsize = 0.0;
  const RHPGResult r = rhpg_zeroth_order(scalar_system(), cfg);
  for (const auto& p : r.history) CHECK(p.stacked().norm() == 0.0);
}

TEST_CASE("zeroth-order runs are reproducible from the seed") {
  const LinearGaussianSystem s = scalar_system();
  const RHPGResult a = rhpg_zeroth_order(s, zeroth_order(2, 9));
  const RHPGResult b = rhpg_zeroth_order(s, zeroth_order(2, 9));
  const RHPGResult c = rhpg_zeroth_order(s, zeroth_order(2, 10));
  for (std::size_t h = 0; h < 2; ++h) CHECK(a.history[h].stacked() == b.history[h].stacked());
  CHECK(a.policy.stacked() != c.policy.stacked());
}

TEST_CASE("best-iterate tracking never returns a worse cost") {
  const LinearGaussianSystem s = scalar_system();
  RHPGConfig cfg = zeroth_order(2, 3);
  const RHPGResult last = rhpg_zeroth_order(s, cfg);
  cfg.track_best = true;
  const RHPGResult best = rhpg_zeroth_order(s, cfg);
  CHECK(best.trace[0].cost <= last.trace[0].cost);
}

TEST_CASE("divergence carries the completed trace") {
  RHPGConfig cfg = zeroth_order(3, 1);
  cfg.zo.stepsize = 50.0;
  try {
    rhpg_zeroth_order(scalar_system(), cfg);
    FAIL("expected divergence");
  } catch (const RHPGDivergence& e) {
    CHECK(e.trace().size() < 3);
  }
}

TEST_CASE("policy distance is the spectral norm of the stacked difference") {
  RandomStream rng(59);
  const FilterPolicy p{rng.normal_matrix(3, 3), rng.normal_matrix(3, 2)};
  const FilterPolicy q{rng.normal_matrix(3, 3), rng.normal_matrix(3, 2)};
  Eigen::JacobiSVD<Matrix> svd(p.stacked() - q.stacked());
  CHECK(policy_distance(p, q) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-13));
  CHECK(policy_distance(p, p) == 0.0);
  // A single row reduces to the Euclidean norm.
  const FilterPolicy a{Matrix::Constant(1, 1, 3.0), Matrix::Constant(1, 1, 0.0)};
  const FilterPolicy b{Matrix::Constant(1, 1, 0.0), Matrix::Constant(1, 1, 4.0)};
  CHECK(policy_distance(a, b) == doctest::Approx(5.0));
  CHECK_THROWS_AS(policy_distance(a, p), InputError);
}

TEST_CASE("learning rejects degenerate configurations") {
  LinearGaussianSystem s = scalar_system();
  s.theta_cov.setZero();
  CHECK_THROWS_AS(rhpg_first_order(s, first_order(2)), InputError);
  RHPGConfig cfg = first_order(0);
  CHECK_THROWS_AS(rhpg_first_order(scalar_system(), cfg), InputError);
  cfg = zeroth_order(1, 0);
  cfg.zo.minibatch = 0;
  CHECK_THROWS_AS(rhpg_zeroth_order(scalar_system(), cfg), InputError);
  CHECK_THROWS_AS(rhpg_first_order(scalar_system(), zeroth_order(1, 0)), InputError);
}
