#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "bsk/block.hpp"

namespace bsk {

/// Seeded generator with platform-independent output: mt19937_64 is fully
/// specified by the standard, and the distributions below are implemented
/// here rather than taken from <random>, whose distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal (Box-Muller).
  double normal();

  /// Circularly-symmetric complex normal with E|z|^2 = 1.
  cplx complex_normal();

  /// Uniform integer in [0, n).
  Index below(Index n);

  Vector complex_normal_vector(Index n);
  Matrix complex_normal_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Order-sensitive 64-bit hash of a list of integers (splitmix64 finalizer chain).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

/// Haar-distributed n x n unitary (QR of a complex Gaussian, phases fixed).
Matrix random_unitary(Index n, std::uint64_t seed);

}  // namespace bsk
