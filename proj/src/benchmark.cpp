#include "rhpg/benchmark.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <string>

#include "rhpg/errors.hpp"

namespace rhpg {

namespace {

constexpr double kImagTolerance = 1e-10;

}  // namespace

void CDParams::validate() const {
  if (n < 2 || n % 2 != 0) throw InputError("state dimension n must be even and >= 2");
  if (m < 1 || m > n) throw InputError("sensor count must lie in [1, n]");
  if (!(nu >= 0.0)) throw InputError("diffusion coefficient must be nonnegative");
  if (!std::isfinite(vel)) throw InputError("velocity must be finite");
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  if (!(v_scale > 0.0) || !(w_scale > 0.0) || !(theta_scale > 0.0))
    throw InputError("noise scales must be positive");
  if (!sensors.empty()) {
    if (static_cast<int>(sensors.size()) != m)
      throw InputError("sensor list length must equal the sensor count");
    std::set<int> seen;
    for (int s : sensors) {
      if (s < 0 || s >= n) throw InputError("sensor index out of range");
      if (!seen.insert(s).second) throw InputError("duplicate sensor index");
    }
  }
}

std::vector<int> CDParams::sensor_indices() const {
  if (!sensors.empty()) return sensors;
  std::vector<int> out(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = (j * n) / m;
  return out;
}

Vector cd_wavenumbers(int n) {
  if (n < 2 || n % 2 != 0) throw InputError("n must be even and >= 2");
  Vector k(n);
  const int half = n / 2;
  for (int j = 0; j < n; ++j) {
    int index = 0;
    if (j < half) index = j;
    else if (j == half) index = 0;  // Nyquist wavenumber zeroed
    else index = j - n;
    k(j) = 2.0 * std::numbers::pi * index;
  }
  return k;
}

Matrix cd_transition(const CDParams& p) {
  p.validate();
  using Complex = std::complex<double>;
  using ComplexMatrix = Eigen::MatrixXcd;
  const int n = p.n;
  const Vector k = cd_wavenumbers(n);

  ComplexMatrix dft(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const int phase = (r * c) % n;
      dft(r, c) = std::polar(1.0, -2.0 * std::numbers::pi * phase / n);
    }
  Eigen::VectorXcd multiplier(n);
  for (int j = 0; j < n; ++j) {
    const Complex exponent(-p.nu * k(j) * k(j), -p.vel * k(j));
    multiplier(j) = std::exp(exponent * p.dt);
  }
  const ComplexMatrix a =
      (dft.adjoint() * multiplier.asDiagonal() * dft) / static_cast<double>(n);
  const double imag = a.imag().cwiseAbs().maxCoeff();
  if (imag > kImagTolerance) {
    throw NumericalError("transition matrix has imaginary residual " + std::to_string(imag));
  }
  return a.real();
}

InitialCondition initial_condition(int n) {
  if (n < 2) throw InputError("n must be >= 2");
  InitialCondition ic{Vector(n), Vector(n)};
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / n;
    ic.mean(j) = 1.0 / std::cosh(10.0 * (x - 0.5));
    ic.factor(j) = 0.25 * std::sin(2.0 * std::numbers::pi * x);
  }
  return ic;
}

LinearGaussianSystem build_cd_system(const CDParams& p) {
  p.validate();
  const Eigen::Index n = p.n;
  const Eigen::Index m = p.m;
  LinearGaussianSystem sys;
  sys.a = cd_transition(p);
  sys.c = Matrix::Zero(m, n);
  const auto sensors = p.sensor_indices();
  for (Eigen::Index j = 0; j < m; ++j) sys.c(j, sensors[static_cast<std::size_t>(j)]) = 1.0;
  sys.w = p.w_scale * Matrix::Identity(n, n);
  sys.v = p.v_scale * Matrix::Identity(m, m);
  sys.theta_cov = p.theta_scale * Matrix::Identity(n, n);
  const InitialCondition ic = initial_condition(p.n);
  sys.x0_mean = ic.mean;
  sys.x0_cov = ic.factor * ic.factor.transpose();
  sys.validate();
  return sys;
}

}  // namespace rhpg
