#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "rhpg/linalg.hpp"

namespace rhpg {

// Deterministic Gaussian source. A stream is identified by a root seed plus
// any number of 64-bit stream ids (e.g. horizon step, iteration, sample index);
// the ids are folded with SplitMix64 into the mt19937_64 seed, so the same
// (seed, ids...) tuple always yields the same draws on every platform.
//
// Normals use the Box-Muller transform on 53-bit uniforms. Both outputs of
// each transform are consumed, in order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_ids);

  // Independent child stream; does not advance this stream.
  RandomStream substream(std::initializer_list<std::uint64_t> stream_ids) const;

  std::uint64_t seed() const noexcept { return key_; }

  // Uniform on (0, 1).
  double uniform();
  double normal();

  Vector normal_vector(Eigen::Index size);
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

  // Draw from N(mean, F F^T) given a factor F.
  Vector gaussian(const Vector& mean, const Matrix& factor);

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rhpg
