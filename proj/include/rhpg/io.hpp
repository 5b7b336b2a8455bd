#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhpg/benchmark.hpp"
#include "rhpg/landscape.hpp"
#include "rhpg/model.hpp"
#include "rhpg/rhpg.hpp"
#include "rhpg/simulator.hpp"

namespace rhpg::io {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const char* key);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const char* key);

Json to_json(const LinearGaussianSystem& sys);
LinearGaussianSystem system_from_json(const Json& j);

Json to_json(const RiccatiSolution& sol);
RiccatiSolution riccati_from_json(const Json& j);

Json to_json(const FilterPolicy& p);
FilterPolicy policy_from_json(const Json& j);

// [{"t": 0, "a_l": ..., "b_l": ...}, ...]
Json to_json(const std::vector<FilterPolicy>& policies);
std::vector<FilterPolicy> policies_from_json(const Json& j);

Json to_json(const CDParams& p);

Json to_json(const std::vector<TimeVaryingGain>& gains);

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

void write_trace_csv(std::ostream& out, const RHPGTrace& trace);
RHPGTrace read_trace_csv(std::istream& in);

// t, x_0..x_{n-1}[, xhat_0..xhat_{n-1}, err_norm]
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rhpg::io
