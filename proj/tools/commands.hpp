#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rhpg/benchmark.hpp"
#include "rhpg/model.hpp"
#include "rhpg/rhpg.hpp"

namespace rhpg::cli {

// Process exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitDivergence = 4;

struct BenchmarkOptions {
  CDParams params;
  std::string out;
  std::string params_out;
};

struct FareCmdOptions {
  std::string system;
  FareOptions fare;
  std::string out;
};

struct RhpgOptions {
  std::string system;
  RHPGConfig config;
  std::optional<std::size_t> horizon;
  bool auto_horizon = false;
  double eps = 1e-2;
  std::string out;
  std::string trace;
  std::string policies_out;
  bool record_timing = false;
};

struct EvaluateOptions {
  std::string system;
  std::string policy;  // path to a policy JSON, or "kf"
  std::string kf_solution;
  std::size_t trajectories = 100;
  std::size_t steps = 700;
  std::uint64_t seed = 0;
  std::string out;
  std::string detail;
  std::string trajectory_out;
  bool deterministic_x0 = false;
};

struct GainsOptions {
  std::string system;
  std::size_t horizon = 1;
  std::string out;
};

int cmd_benchmark(const BenchmarkOptions& opts);
int cmd_fare(const FareCmdOptions& opts);
int cmd_rhpg(const RhpgOptions& opts);
int cmd_evaluate(const EvaluateOptions& opts);
int cmd_gains(const GainsOptions& opts);

}  // namespace rhpg::cli
