#include <doctest.h>

#include <Eigen/SVD>

#include "rhpg/errors.hpp"
#include "rhpg/linalg.hpp"
#include "support.hpp"

using namespace rhpg;
using rhpg::testing::max_abs;
using rhpg::testing::random_spd;

TEST_CASE("psd_sqrt squares back and is symmetric") {
  RandomStream rng(3);
  for (int n = 1; n <= 5; ++n) {
    const Matrix s = random_spd(rng, n);
    const Matrix r = linalg::psd_sqrt(s);
    CHECK(max_abs(r - r.transpose()) < 1e-14);
    CHECK(max_abs(r * r - s) < 1e-12);
    CHECK(linalg::symmetric_eigenvalues(r)(0) > 0.0);
  }
}

TEST_CASE("psd_factor reproduces rank-deficient matrices") {
  Vector u(3);
  u << 1.0, -2.0, 0.5;
  const Matrix s = u * u.transpose();
  const Matrix f = linalg::psd_factor(s);
  CHECK(max_abs(f * f.transpose() - s) < 1e-12);
}

TEST_CASE("psd helpers reject indefinite input") {
  Matrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(linalg::psd_sqrt(s), NumericalError);
}

TEST_CASE("spectral norm and condition number match singular values") {
  RandomStream rng(4);
  const Matrix a = rng.normal_matrix(4, 3);
  Eigen::JacobiSVD<Matrix> svd(a);
  CHECK(linalg::spectral_norm(a) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-14));
  const Matrix s = random_spd(rng, 4);
  const Vector ev = linalg::symmetric_eigenvalues(s);
  CHECK(linalg::condition_number(s) == doctest::Approx(ev(3) / ev(0)).epsilon(1e-12));
}

TEST_CASE("spectral radius of a rotation-scaling block") {
  Matrix a(2, 2);
  a << 0.6, -0.8, 0.8, 0.6;
  CHECK(linalg::spectral_radius(0.5 * a) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("solve_right_spd solves X S = B") {
  RandomStream rng(5);
  const Matrix s = random_spd(rng, 4);
  const Matrix b = rng.normal_matrix(3, 4);
  const Matrix x = linalg::solve_right_spd(b, s);
  CHECK(max_abs(x * s - b) < 1e-12);
  CHECK_THROWS_AS(linalg::solve_right_spd(b, -s), NumericalError);
}

TEST_CASE("symmetry check is relative") {
  Matrix s = Matrix::Identity(2, 2) * 1e6;
  s(0, 1) = 1e-8;
  CHECK(linalg::is_symmetric(s));
  s(0, 1) = 1.0;
  CHECK_FALSE(linalg::is_symmetric(s));
}
