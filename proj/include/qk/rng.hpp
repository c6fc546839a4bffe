#pragma once

#include "qk/common.hpp"

#include <cstdint>
#include <random>

namespace qk {

// Deterministic random source. Every distribution is derived from the raw
// 64-bit mt19937_64 stream by fixed arithmetic, so the produced doubles are
// bit-identical across platforms and standard-library implementations
// (std::normal_distribution makes no such guarantee).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in (0, 1]; never returns 0, so logarithms are safe.
  double uniform();

  // Standard Gaussian via the Box-Muller transform (with one cached spare).
  double normal();

  Vector gaussian_vector(Index n);
  Matrix gaussian_matrix(Index rows, Index cols);

  // Uniformly distributed direction on the unit sphere of R^n.
  Vector unit_vector(Index n);

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace qk
