#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "rhpg/errors.hpp"
#include "rhpg/io.hpp"
#include "rhpg/simulator.hpp"

namespace rhpg::cli {
namespace {

using io::format_double;

LinearGaussianSystem load_system(const std::string& path) {
  if (!std::filesystem::exists(path)) throw InputError("system file not found: " + path);
  return io::system_from_json(io::read_json_file(path));
}

void write_trace(const std::string& path, RHPGTrace trace, bool record_timing) {
  if (path.empty()) return;
  if (!record_timing) {
    for (TraceRow& row : trace) row.elapsed_ms = 0.0;
  }
  std::ostringstream text;
  io::write_trace_csv(text, trace);
  io::write_text_file(path, text.str());
}

double spectral_radius_of(const FilterPolicy& p) { return linalg::spectral_radius(p.a_l); }

}  // namespace

int cmd_benchmark(const BenchmarkOptions& opts) {
  opts.params.validate();
  const LinearGaussianSystem sys = build_cd_system(opts.params);
  io::write_json_file(opts.out, io::to_json(sys));
  if (!opts.params_out.empty()) io::write_json_file(opts.params_out, io::to_json(opts.params));
  std::cout << "n=" << sys.state_dim() << " m=" << sys.output_dim()
            << " rho(A)=" << format_double(linalg::spectral_radius(sys.a)) << '\n';
  return kExitOk;
}

int cmd_fare(const FareCmdOptions& opts) {
  const LinearGaussianSystem sys = load_system(opts.system);
  const RiccatiSolution sol = solve_fare(sys, opts.fare);
  if (!opts.out.empty()) io::write_json_file(opts.out, io::to_json(sol));
  std::cout << "residual=" << format_double(sol.residual)
            << " rho=" << format_double(linalg::spectral_radius(sol.closed_loop))
            << " iterations=" << sol.iterations << '\n';
  return kExitOk;
}

int cmd_rhpg(const RhpgOptions& opts) {
  const LinearGaussianSystem sys = load_system(opts.system);
  RHPGConfig cfg = opts.config;
  if (opts.auto_horizon == opts.horizon.has_value())
    throw InputError("give exactly one of --horizon or --auto-horizon");
  if (opts.auto_horizon) {
    if (!(opts.eps > 0.0)) throw InputError("--eps must be positive");
    const RiccatiSolution fare = solve_fare(sys);
    const HorizonBound bound = horizon_bound(sys, fare, opts.eps);
    cfg.horizon = bound.horizon;
    std::cout << "auto horizon N=" << bound.horizon << " (bound " << format_double(bound.raw)
              << ", ||A_L*||_*=" << format_double(bound.closed_loop_norm) << ")\n";
  } else {
    cfg.horizon = *opts.horizon;
  }

  RHPGResult result;
  try {
    result = run_rhpg(sys, cfg);
  } catch (const RHPGDivergence& e) {
    write_trace(opts.trace, e.trace(), opts.record_timing);
    throw;
  }
  write_trace(opts.trace, result.trace, opts.record_timing);
  if (!opts.out.empty()) io::write_json_file(opts.out, io::to_json(result.policy));
  if (!opts.policies_out.empty()) io::write_json_file(opts.policies_out, io::to_json(result.history));

  std::size_t capped = 0;
  for (const TraceRow& row : result.trace) capped += row.hit_cap ? 1 : 0;
  if (capped > 0)
    std::cerr << "warning: " << capped << " subproblem(s) stopped at the iteration cap\n";
  std::cout << "horizon=" << cfg.horizon
            << " rho(A_L)=" << format_double(spectral_radius_of(result.policy)) << '\n';
  return kExitOk;
}

int cmd_evaluate(const EvaluateOptions& opts) {
  const LinearGaussianSystem sys = load_system(opts.system);
  if (opts.trajectories == 0) throw InputError("--trajectories must be positive");

  PolicySchedule schedule;
  FilterPolicy stationary;
  if (opts.policy == "kf") {
    RiccatiSolution fare;
    if (!opts.kf_solution.empty()) {
      if (!std::filesystem::exists(opts.kf_solution))
        throw InputError("Riccati solution file not found: " + opts.kf_solution);
      fare = io::riccati_from_json(io::read_json_file(opts.kf_solution));
    } else {
      fare = solve_fare(sys);
    }
    stationary = FilterPolicy::from_gain(sys, fare.gain);
    schedule = stationary;
  } else {
    if (!std::filesystem::exists(opts.policy)) throw InputError("policy file not found: " + opts.policy);
    const io::Json j = io::read_json_file(opts.policy);
    if (j.is_array()) {
      std::vector<FilterPolicy> seq = io::policies_from_json(j);
      if (seq.empty()) throw InputError("policy sequence is empty");
      for (const FilterPolicy& p : seq) p.check_against(sys);
      stationary = seq.back();
      schedule = std::move(seq);
    } else {
      stationary = io::policy_from_json(j);
      schedule = stationary;
    }
  }
  stationary.check_against(sys);

  FilterRunOptions run_opts;
  if (opts.deterministic_x0) run_opts.x0 = sys.x0_mean;

  const std::size_t T = opts.steps;
  std::vector<double> sum(T + 1, 0.0), sum_sq(T + 1, 0.0);
  std::ostringstream detail;
  if (!opts.detail.empty()) detail << "trajectory,t,err_norm\n";
  std::size_t truncated = 0;
  const double inf = std::numeric_limits<double>::infinity();

  for (std::size_t j = 0; j < opts.trajectories; ++j) {
    RandomStream rng(opts.seed, {static_cast<std::uint64_t>(j)});
    Trajectory traj = run_filter(sys, schedule, T, rng, sys.x0_mean, run_opts);
    if (traj.truncated) ++truncated;
    if (j == 0 && !opts.trajectory_out.empty()) {
      std::ostringstream text;
      io::write_trajectory_csv(text, traj);
      io::write_text_file(opts.trajectory_out, text.str());
    }
    for (std::size_t t = 0; t <= T; ++t) {
      const double e = t < traj.err_norms.size() ? traj.err_norms[t] : inf;
      sum[t] += e;
      sum_sq[t] += e * e;
      if (!opts.detail.empty()) detail << j << ',' << t << ',' << format_double(e) << '\n';
    }
  }

  const double M = static_cast<double>(opts.trajectories);
  std::ostringstream out;
  out << "t,mean_err_norm,std_err\n";
  double tail = 0.0;
  std::size_t tail_count = 0;
  for (std::size_t t = 0; t <= T; ++t) {
    const double mean = sum[t] / M;
    double se = 0.0;
    if (!std::isfinite(mean)) {
      se = inf;
    } else if (opts.trajectories > 1) {
      const double var = std::max(0.0, (sum_sq[t] - M * mean * mean) / (M - 1.0));
      se = std::sqrt(var / M);
    }
    out << t << ',' << format_double(mean) << ',' << format_double(se) << '\n';
    if (2 * t >= T) {
      tail += mean;
      ++tail_count;
    }
  }
  if (!opts.out.empty()) io::write_text_file(opts.out, out.str());
  if (!opts.detail.empty()) io::write_text_file(opts.detail, detail.str());

  const double rho = spectral_radius_of(stationary);
  std::cout << "rho(A_L)=" << format_double(rho) << (rho < 1.0 ? " stable" : " UNSTABLE")
            << " tail_mean_err_norm=" << format_double(tail / static_cast<double>(tail_count))
            << '\n';
  if (truncated > 0)
    std::cerr << "warning: " << truncated << " trajectory(ies) blew up and were truncated\n";
  return kExitOk;
}

int cmd_gains(const GainsOptions& opts) {
  const LinearGaussianSystem sys = load_system(opts.system);
  if (opts.horizon == 0) throw InputError("--horizon must be positive");
  io::write_json_file(opts.out, io::to_json(time_varying_gains(sys, opts.horizon)));
  return kExitOk;
}

}  // namespace rhpg::cli
