#include "rhpg/random.hpp"

#include <cmath>
#include <numbers>

namespace rhpg {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fold(std::uint64_t key, std::initializer_list<std::uint64_t> ids) {
  for (std::uint64_t id : ids) key = splitmix64(key ^ splitmix64(id + 0x632be59bd9b4e019ULL));
  return key;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : RandomStream(seed, {}) {}

RandomStream::RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_ids)
    : key_(fold(splitmix64(seed), stream_ids)), engine_(key_) {}

RandomStream RandomStream::substream(std::initializer_list<std::uint64_t> stream_ids) const {
  RandomStream child(0);
  child.key_ = fold(key_, stream_ids);
  child.engine_.seed(child.key_);
  return child;
}

double RandomStream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Vector RandomStream::normal_vector(Eigen::Index size) {
  Vector out(size);
  for (Eigen::Index k = 0; k < size; ++k) out(k) = normal();
  return out;
}

Matrix RandomStream::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix out(rows, cols);
  // Row-major fill order.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = normal();
  return out;
}

Vector RandomStream::gaussian(const Vector& mean, const Matrix& factor) {
  return mean + factor * normal_vector(factor.cols());
}

}  // namespace rhpg
