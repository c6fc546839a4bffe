#include "qk/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace qk {

CurvatureTensor::CurvatureTensor(Index n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(n * n * n * n))
    throw std::invalid_argument("CurvatureTensor: payload length does not match dimension");
}

CurvatureTensor& CurvatureTensor::operator+=(const CurvatureTensor& rhs) {
  if (rhs.n_ != n_) throw std::invalid_argument("CurvatureTensor: dimension mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

CurvatureTensor& CurvatureTensor::operator-=(const CurvatureTensor& rhs) {
  if (rhs.n_ != n_) throw std::invalid_argument("CurvatureTensor: dimension mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

CurvatureTensor& CurvatureTensor::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

double CurvatureTensor::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

std::vector<double> CurvatureTensor::contract_first(const Vector& X) const {
  // View the storage as an n x n^3 row-major matrix (slot x against the
  // rest) and contract with X: one matrix-vector product.
  const Index n = n_;
  const Index n3 = n * n * n;
  ConstRowMap mat(values_.data(), n, n3);
  Vector out = mat.transpose() * X;
  return std::vector<double>(out.data(), out.data() + n3);
}

Vector CurvatureTensor::contract_yzw(const Vector& Y, const Vector& Z, const Vector& W) const {
  const Index n = n_;
  // Contract slots w, z, y in turn; each step is a reshaped mat-vec.
  ConstRowMap m1(values_.data(), n * n * n, n); // (x,y,z) x w
  Vector s1 = m1 * W;                           // (x,y,z)
  ConstRowMap m2(s1.data(), n * n, n);          // (x,y) x z
  Vector s2 = m2 * Z;                           // (x,y)
  ConstRowMap m3(s2.data(), n, n);              // x x y
  return m3 * Y;
}

Vector CurvatureTensor::contract_xzw(const Vector& X, const Vector& Z, const Vector& W) const {
  const Index n = n_;
  const std::vector<double> xc = contract_first(X); // (y,z,w)
  ConstRowMap m1(xc.data(), n * n, n);              // (y,z) x w
  Vector s1 = m1 * W;                               // (y,z)
  ConstRowMap m2(s1.data(), n, n);                  // y x z
  return m2 * Z;
}

double CurvatureTensor::value(const Vector& X, const Vector& Y, const Vector& Z, const Vector& W) const {
  const Matrix m = form_zw(X, Y);
  return Z.dot(m * W);
}

Matrix CurvatureTensor::form_zw(const Vector& X, const Vector& Y) const {
  const Index n = n_;
  const std::vector<double> xc = contract_first(X); // (y,z,w) row-major
  ConstRowMap mat(xc.data(), n, n * n);             // y against (z,w)
  Vector zw = mat.transpose() * Y;                  // (z,w) row-major
  return ConstRowMap(zw.data(), n, n);
}

Matrix CurvatureTensor::form_yw(const Vector& X, const Vector& Z) const {
  const Index n = n_;
  const std::vector<double> xc = contract_first(X); // (y,z,w) row-major
  Matrix out(n, n);
  for (Index y = 0; y < n; ++y) {
    ConstRowMap block(xc.data() + y * n * n, n, n); // (z,w)
    out.row(y) = (block.transpose() * Z).transpose();
  }
  return out;
}

CurvatureTensor CurvatureTensor::permuted(const std::array<int, 4>& perm) const {
  const Index n = n_;
  CurvatureTensor out(n);
  std::array<Index, 4> idx{};
  for (idx[0] = 0; idx[0] < n; ++idx[0])
    for (idx[1] = 0; idx[1] < n; ++idx[1])
      for (idx[2] = 0; idx[2] < n; ++idx[2])
        for (idx[3] = 0; idx[3] < n; ++idx[3])
          out.at(idx[0], idx[1], idx[2], idx[3]) =
              at(idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]);
  return out;
}

CurvatureTensor CurvatureTensor::transform_last_two(const Matrix& A) const {
  const Index n = n_;
  // Step 1: contract slot w. View as (x,y,z) x w and multiply by A on the
  // right: out1(x,y,z,w) = sum_d T(x,y,z,d) A(d,w).
  ConstRowMap mat(values_.data(), n * n * n, n);
  RowMatrix step1 = mat * A;
  // Step 2: contract slot z blockwise: out(x,y,z,w) = sum_c step1(x,y,c,w) A(c,z).
  CurvatureTensor out(n);
  for (Index xy = 0; xy < n * n; ++xy) {
    ConstRowMap block(step1.data() + xy * n * n, n, n); // (c,w)
    RowMap dest(out.data() + xy * n * n, n, n);         // (z,w)
    dest = A.transpose() * block;
  }
  return out;
}

CurvatureTensor CurvatureTensor::transform_all(const Matrix& O) const {
  const Index n = n_;
  // Contract each slot in turn with O; every step is a reshaped product.
  // Slot w, then z (as in transform_last_two):
  CurvatureTensor t = transform_last_two(O);
  // Slot y: view as x x (y, zw): for each x, block (y, zw) -> O^T * block.
  CurvatureTensor t2(n);
  for (Index x = 0; x < n; ++x) {
    ConstRowMap block(t.data() + x * n * n * n, n, n * n);
    RowMap dest(t2.data() + x * n * n * n, n, n * n);
    dest = O.transpose() * block;
  }
  // Slot x: view as x x (y z w).
  CurvatureTensor out(n);
  ConstRowMap src(t2.data(), n, n * n * n);
  RowMap dest(out.data(), n, n * n * n);
  dest = O.transpose() * src;
  return out;
}

double symmetry_residual(const CurvatureTensor& T) {
  const Index n = T.dim();
  double r = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (Index w = 0; w < n; ++w) {
          const double v = T.at(x, y, z, w);
          r = std::max(r, std::fabs(v + T.at(y, x, z, w)));
          r = std::max(r, std::fabs(v + T.at(x, y, w, z)));
          r = std::max(r, std::fabs(v - T.at(z, w, x, y)));
        }
  return r;
}

double bianchi_residual(const CurvatureTensor& T) {
  const Index n = T.dim();
  double r = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (Index w = 0; w < n; ++w) {
          const double s = T.at(x, y, z, w) + T.at(y, z, x, w) + T.at(z, x, y, w);
          r = std::max(r, std::fabs(s));
        }
  return r;
}

} // namespace qk
