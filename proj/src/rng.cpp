#include "qk/rng.hpp"

#include <cmath>

namespace qk {

double Rng::uniform() {
  // Take the top 53 bits; +1 shifts the range from [0,1) to (0,1].
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Vector Rng::gaussian_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Matrix Rng::gaussian_matrix(Index rows, Index cols) {
  Matrix a(rows, cols);
  // Column-major fill order, fixed so streams are reproducible.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = normal();
  return a;
}

Vector Rng::unit_vector(Index n) {
  while (true) {
    Vector v = gaussian_vector(n);
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

} // namespace qk
