#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "commands.hpp"
#include "rhpg/errors.hpp"

using namespace rhpg;
using namespace rhpg::cli;

namespace {

void add_benchmark(CLI::App& app, BenchmarkOptions& o) {
  CDParams& p = o.params;
  app.add_option("--n", p.n, "State dimension; must be even (paper: 200)")->capture_default_str();
  app.add_option("--sensors", p.m, "Number of point sensors (paper: 5)")->capture_default_str();
  app.add_option("--sensor-index", p.sensors,
                 "Explicit sensor state indices (default: floor(j n / m))");
  app.add_option("--nu", p.nu, "Diffusion coefficient (paper: 2e-3)")->capture_default_str();
  app.add_option("--vel", p.vel, "Convection velocity (paper: 5e-2)")->capture_default_str();
  app.add_option("--dt", p.dt, "Time step (paper: 0.05)")->capture_default_str();
  app.add_option("--v-scale", p.v_scale, "Measurement noise V = v_scale I (paper: 1e-1)")
      ->capture_default_str();
  app.add_option("--w-scale", p.w_scale, "Process noise W = w_scale I (paper: 1e-9)")
      ->capture_default_str();
  app.add_option("--theta-scale", p.theta_scale, "Injection noise Theta = theta_scale I (paper: 1e-2)")
      ->capture_default_str();
  app.add_option("--out", o.out, "Output system JSON")->required();
  app.add_option("--params-out", o.params_out, "Optional JSON sidecar with the benchmark parameters");
}

void add_fare(CLI::App& app, FareCmdOptions& o) {
  app.add_option("--system", o.system, "System JSON")->required();
  app.add_option("--tol", o.fare.tol, "Relative Frobenius stopping tolerance")->capture_default_str();
  app.add_option("--max-iter", o.fare.max_iter, "Iteration cap")->capture_default_str();
  app.add_option("--out", o.out, "Output Riccati solution JSON");
}

void add_rhpg(CLI::App& app, RhpgOptions& o, std::string& mode, std::size_t& horizon) {
  RHPGConfig& c = o.config;
  app.add_option("--system", o.system, "System JSON")->required();
  app.add_option("--mode", mode, "Inner solver")
      ->check(CLI::IsMember({"first-order", "zeroth-order"}))
      ->capture_default_str();
  auto* h = app.add_option("--horizon", horizon, "Problem horizon N");
  auto* a = app.add_flag("--auto-horizon", o.auto_horizon,
                         "Choose N from the model-based horizon bound (needs the model)");
  h->excludes(a);
  app.add_option("--eps", o.eps, "Target gain accuracy for --auto-horizon")->capture_default_str();
  app.add_option("--seed", c.seed, "Root seed")->capture_default_str();
  app.add_option("--grad-tol", c.grad_tol, "First order: stop when ||grad||_F falls below this (paper: 1e-4)")
      ->capture_default_str();
  app.add_option("--lr", c.adam.lr, "First order: Adam learning rate (paper: 1e-3)")->capture_default_str();
  app.add_option("--beta1", c.adam.beta1, "First order: Adam beta1 (paper: 0.9)")->capture_default_str();
  app.add_option("--beta2", c.adam.beta2, "First order: Adam beta2 (paper: 0.999)")->capture_default_str();
  app.add_option("--adam-eps", c.adam.eps_hat, "First order: Adam regularizer (paper: 1e-8)")->capture_default_str();
  app.add_option("--max-inner-iters", c.max_inner_iters, "First order: iteration cap per subproblem")
      ->capture_default_str();
  app.add_option("--radius", c.zo.radius, "Zeroth order: smoothing radius r")->capture_default_str();
  app.add_option("--stepsize", c.zo.stepsize, "Zeroth order: step size eta")->capture_default_str();
  app.add_option("--inner-iters", c.zo.inner_iters, "Zeroth order: iterations per subproblem")
      ->capture_default_str();
  app.add_option("--minibatch", c.zo.minibatch, "Zeroth order: estimates averaged per update")
      ->capture_default_str();
  app.add_flag("--track-best", c.track_best,
               "Zeroth order: return the lowest-cost iterate (uses the model)");
  app.add_option("--out", o.out, "Output policy JSON (final filter)");
  app.add_option("--policies-out", o.policies_out, "Output JSON with every subproblem's policy");
  app.add_option("--trace", o.trace, "Output per-subproblem trace CSV");
  app.add_flag("--record-timing", o.record_timing,
               "Write wall-clock times into the trace (otherwise 0 for reproducible bytes)");
}

void add_evaluate(CLI::App& app, EvaluateOptions& o) {
  app.add_option("--system", o.system, "System JSON")->required();
  app.add_option("--policy", o.policy, "Policy JSON (object or sequence), or 'kf'")->required();
  app.add_option("--kf-solution", o.kf_solution, "Precomputed Riccati solution for --policy kf");
  app.add_option("--trajectories", o.trajectories, "Number of trajectories (paper: 100)")
      ->capture_default_str();
  app.add_option("--steps", o.steps, "Steps per trajectory (paper: 700)")->capture_default_str();
  app.add_option("--seed", o.seed, "Root seed")->capture_default_str();
  app.add_option("--out", o.out, "Output CSV t,mean_err_norm,std_err");
  app.add_option("--detail", o.detail, "Output CSV trajectory,t,err_norm");
  app.add_option("--trajectory-out", o.trajectory_out, "Output CSV of the first trajectory's states");
  app.add_flag("--deterministic-x0", o.deterministic_x0, "Start every trajectory at x0 = mean");
}

void add_gains(CLI::App& app, GainsOptions& o) {
  app.add_option("--system", o.system, "System JSON")->required();
  app.add_option("--horizon", o.horizon, "Number of steps")->required();
  app.add_option("--out", o.out, "Output JSON")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn Kalman filters with receding-horizon policy gradient"};
  app.require_subcommand(1);

  BenchmarkOptions bench;
  FareCmdOptions fare;
  RhpgOptions rh;
  EvaluateOptions eval;
  GainsOptions gains;
  std::string mode = "first-order";
  std::size_t horizon = 0;

  auto* s_bench = app.add_subcommand("benchmark-cd", "Build the convection-diffusion benchmark system");
  auto* s_fare = app.add_subcommand("fare", "Solve the filter algebraic Riccati equation");
  auto* s_rhpg = app.add_subcommand("rhpg", "Learn a filter with receding-horizon policy gradient");
  auto* s_eval = app.add_subcommand("evaluate", "Estimation error of a filter over simulated trajectories");
  auto* s_gains = app.add_subcommand("gains", "Time-varying Kalman gains from X0");
  add_benchmark(*s_bench, bench);
  add_fare(*s_fare, fare);
  add_rhpg(*s_rhpg, rh, mode, horizon);
  add_evaluate(*s_eval, eval);
  add_gains(*s_gains, gains);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s_bench->parsed()) return cmd_benchmark(bench);
    if (s_fare->parsed()) return cmd_fare(fare);
    if (s_rhpg->parsed()) {
      rh.config.mode = mode == "zeroth-order" ? InnerSolver::ZerothOrder : InnerSolver::FirstOrder;
      if (s_rhpg->count("--horizon") > 0) rh.horizon = horizon;
      return cmd_rhpg(rh);
    }
    if (s_eval->parsed()) return cmd_evaluate(eval);
    if (s_gains->parsed()) return cmd_gains(gains);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BoundInapplicableError& e) {
    std::cerr << "error: " << e.what() << " (pass --horizon explicitly)\n";
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << " after " << e.iterations() << " iterations\n";
    return kExitNonConvergence;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
