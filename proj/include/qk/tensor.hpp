#pragma once

#include "qk/common.hpp"

#include <array>
#include <vector>

namespace qk {

// Dense rank-4 tensor on R^n, stored row-major as a flat array of n^4
// doubles: entry (x,y,z,w) lives at ((x*n + y)*n + z)*n + w. This is the
// value store for curvature tensors and everything derived from them.
class CurvatureTensor {
public:
  CurvatureTensor() = default;
  explicit CurvatureTensor(Index n) : n_(n), values_(static_cast<std::size_t>(n * n * n * n), 0.0) {}
  CurvatureTensor(Index n, std::vector<double> values);

  Index dim() const { return n_; }
  std::size_t size() const { return values_.size(); }

  double& at(Index x, Index y, Index z, Index w) {
    return values_[static_cast<std::size_t>(((x * n_ + y) * n_ + z) * n_ + w)];
  }
  double at(Index x, Index y, Index z, Index w) const {
    return values_[static_cast<std::size_t>(((x * n_ + y) * n_ + z) * n_ + w)];
  }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  CurvatureTensor& operator+=(const CurvatureTensor& rhs);
  CurvatureTensor& operator-=(const CurvatureTensor& rhs);
  CurvatureTensor& operator*=(double c);

  friend CurvatureTensor operator+(CurvatureTensor a, const CurvatureTensor& b) { return a += b; }
  friend CurvatureTensor operator-(CurvatureTensor a, const CurvatureTensor& b) { return a -= b; }
  friend CurvatureTensor operator*(double c, CurvatureTensor t) { return t *= c; }

  // Max-norm over entries.
  double max_abs() const;

  // Full contraction T(X,Y,Z,W).
  double value(const Vector& X, const Vector& Y, const Vector& Z, const Vector& W) const;

  // Partial contractions. Slot numbering is 1-based (x,y,z,w) = (1,2,3,4).
  //   form_zw(X,Y)(z,w) = T(X, Y, e_z, e_w)
  //   form_yw(X,Z)(y,w) = T(X, e_y, Z, e_w)
  //   contract_last(W)  = T(.,.,.,W) flattened over (x,y,z), row-major
  //   contract_first(X) = T(X,.,.,.) flattened over (y,z,w), row-major
  Matrix form_zw(const Vector& X, const Vector& Y) const;
  Matrix form_yw(const Vector& X, const Vector& Z) const;
  std::vector<double> contract_first(const Vector& X) const;

  // Vectors of values over one free slot:
  //   contract_yzw(Y,Z,W)[l] = T(e_l, Y, Z, W)
  //   contract_xzw(X,Z,W)[l] = T(X, e_l, Z, W)
  Vector contract_yzw(const Vector& Y, const Vector& Z, const Vector& W) const;
  Vector contract_xzw(const Vector& X, const Vector& Z, const Vector& W) const;

  // Copy with permuted slots: out(x,y,z,w) = in(args[perm[0]], ..).
  // perm is a permutation of {0,1,2,3} giving, for each output slot, which
  // input slot it reads from; e.g. {1,0,2,3} swaps the first two slots.
  CurvatureTensor permuted(const std::array<int, 4>& perm) const;

  // out(x,y,z,w) = sum_{c,d} T(x,y,c,d) A(c,z) A(d,w), i.e. T(.,.,Az,Aw)
  // evaluated on basis vectors. Used by the quaternion-average projection
  // and the paired-slot symmetry residual.
  CurvatureTensor transform_last_two(const Matrix& A) const;

  // out(x,y,z,w) = T(Ox,Oy,Oz,Ow) on basis vectors, for a change of basis O.
  CurvatureTensor transform_all(const Matrix& O) const;

private:
  Index n_ = 0;
  std::vector<double> values_;
};

// Max-norm violation of the curvature symmetries
//   T(x,y,z,w) = -T(y,x,z,w) = -T(x,y,w,z) = T(z,w,x,y).
double symmetry_residual(const CurvatureTensor& T);

// Max-norm of the cyclic sum T(x,y,z,w) + T(y,z,x,w) + T(z,x,y,w).
double bianchi_residual(const CurvatureTensor& T);

} // namespace qk
