#include "rhpg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "rhpg/errors.hpp"

namespace rhpg::io {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!std::isfinite(m(r, c))) throw InputError("cannot serialize non-finite matrix entry");
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  const Json& rows = j.at(key);
  if (!rows.is_array() || rows.empty()) throw InputError(std::string("'") + key + "' must be a non-empty array of rows");
  const std::size_t cols = rows.front().is_array() ? rows.front().size() : 0;
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Json& row = rows[r];
    if (!row.is_array() || row.size() != cols)
      throw InputError(std::string("'") + key + "' is not a rectangular matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw InputError(std::string("'") + key + "' has a non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v(k))) throw InputError("cannot serialize non-finite vector entry");
    out.push_back(v(k));
  }
  return out;
}

Vector vector_from_json(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  const Json& arr = j.at(key);
  if (!arr.is_array()) throw InputError(std::string("'") + key + "' must be an array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_number()) throw InputError(std::string("'") + key + "' has a non-numeric entry");
    v(static_cast<Eigen::Index>(k)) = arr[k].get<double>();
  }
  return v;
}

Json to_json(const LinearGaussianSystem& sys) {
  return Json{{"a", matrix_to_json(sys.a)},
              {"c", matrix_to_json(sys.c)},
              {"w", matrix_to_json(sys.w)},
              {"v", matrix_to_json(sys.v)},
              {"x0_mean", vector_to_json(sys.x0_mean)},
              {"x0_cov", matrix_to_json(sys.x0_cov)},
              {"theta_cov", matrix_to_json(sys.theta_cov)}};
}

LinearGaussianSystem system_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("system file must contain a JSON object");
  LinearGaussianSystem sys;
  sys.a = matrix_from_json(j, "a");
  sys.c = matrix_from_json(j, "c");
  sys.w = matrix_from_json(j, "w");
  sys.v = matrix_from_json(j, "v");
  sys.x0_mean = vector_from_json(j, "x0_mean");
  sys.x0_cov = matrix_from_json(j, "x0_cov");
  sys.theta_cov = matrix_from_json(j, "theta_cov");
  sys.validate();
  return sys;
}

Json to_json(const RiccatiSolution& sol) {
  return Json{{"sigma", matrix_to_json(sol.sigma)},
              {"gain", matrix_to_json(sol.gain)},
              {"closed_loop", matrix_to_json(sol.closed_loop)},
              {"residual", sol.residual},
              {"iterations", sol.iterations},
              {"x0_dominates", sol.x0_dominates}};
}

RiccatiSolution riccati_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("Riccati solution must be a JSON object");
  RiccatiSolution sol;
  sol.sigma = matrix_from_json(j, "sigma");
  sol.gain = matrix_from_json(j, "gain");
  sol.closed_loop = matrix_from_json(j, "closed_loop");
  if (!j.contains("residual") || !j.contains("iterations"))
    throw InputError("Riccati solution lacks residual/iterations");
  sol.residual = j.at("residual").get<double>();
  sol.iterations = j.at("iterations").get<long>();
  sol.x0_dominates = j.value("x0_dominates", false);
  return sol;
}

Json to_json(const FilterPolicy& p) {
  return Json{{"a_l", matrix_to_json(p.a_l)}, {"b_l", matrix_to_json(p.b_l)}};
}

FilterPolicy policy_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("filter policy must be a JSON object");
  FilterPolicy p{matrix_from_json(j, "a_l"), matrix_from_json(j, "b_l")};
  if (p.a_l.rows() != p.a_l.cols() || p.b_l.rows() != p.a_l.rows())
    throw InputError("filter policy blocks have inconsistent shapes");
  return p;
}

Json to_json(const std::vector<FilterPolicy>& policies) {
  Json out = Json::array();
  for (std::size_t t = 0; t < policies.size(); ++t) {
    Json item = to_json(policies[t]);
    item["t"] = t;
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<FilterPolicy> policies_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("policy sequence must be a JSON array");
  std::vector<FilterPolicy> out(j.size());
  std::vector<bool> seen(j.size(), false);
  for (const Json& item : j) {
    if (!item.contains("t") || !item.at("t").is_number_unsigned())
      throw InputError("policy sequence entry lacks a nonnegative 't'");
    const auto t = item.at("t").get<std::size_t>();
    if (t >= out.size() || seen[t]) throw InputError("policy sequence indices must be 0..N-1");
    seen[t] = true;
    out[t] = policy_from_json(item);
  }
  return out;
}

Json to_json(const CDParams& p) {
  Json sensors = Json::array();
  for (int s : p.sensor_indices()) sensors.push_back(s);
  return Json{{"n", p.n},           {"m", p.m},
              {"nu", p.nu},         {"vel", p.vel},
              {"dt", p.dt},         {"v_scale", p.v_scale},
              {"w_scale", p.w_scale}, {"theta_scale", p.theta_scale},
              {"sensors", sensors}};
}

Json to_json(const std::vector<TimeVaryingGain>& gains) {
  Json out = Json::array();
  for (std::size_t t = 0; t < gains.size(); ++t) {
    out.push_back(Json{{"t", t},
                       {"gain", matrix_to_json(gains[t].gain)},
                       {"sigma", matrix_to_json(gains[t].sigma)}});
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const RHPGTrace& trace) {
  out << "h,inner_iters,grad_norm,cost,elapsed_ms\n";
  for (const TraceRow& r : trace) {
    out << r.h << ',' << r.inner_iters << ',' << format_double(r.grad_norm) << ','
        << format_double(r.cost) << ',' << format_double(r.elapsed_ms) << '\n';
  }
}

namespace {

double parse_double(const std::string& s) {
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("malformed number '" + s + "' in CSV");
  return value;
}

}  // namespace

RHPGTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "h,inner_iters,grad_norm,cost,elapsed_ms")
    throw InputError("trace CSV header mismatch");
  RHPGTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw InputError("trace CSV row has wrong column count");
    TraceRow r;
    r.h = static_cast<std::size_t>(std::stoull(cells[0]));
    r.inner_iters = static_cast<std::size_t>(std::stoull(cells[1]));
    r.grad_norm = parse_double(cells[2]);
    r.cost = parse_double(cells[3]);
    r.elapsed_ms = parse_double(cells[4]);
    trace.push_back(r);
  }
  return trace;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.states.empty()) return;
  const Eigen::Index n = traj.states.front().size();
  const bool with_estimates = !traj.estimates.empty();
  out << 't';
  for (Eigen::Index k = 0; k < n; ++k) out << ",x_" << k;
  if (with_estimates) {
    for (Eigen::Index k = 0; k < n; ++k) out << ",xhat_" << k;
    out << ",err_norm";
  }
  out << '\n';
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (Eigen::Index k = 0; k < n; ++k) out << ',' << format_double(traj.states[t](k));
    if (with_estimates) {
      for (Eigen::Index k = 0; k < n; ++k) out << ',' << format_double(traj.estimates[t](k));
      out << ',' << format_double(traj.err_norms[t]);
    }
    out << '\n';
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("failed writing " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace rhpg::io
