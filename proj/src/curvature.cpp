#include "qk/curvature.hpp"

#include "qk/rng.hpp"

#include <cmath>
#include <sstream>

namespace qk {

CurvatureTensor build_r0(const QuaternionicStructure& Q) {
  const Index n = Q.dim();
  CurvatureTensor out(n);
  // g(A e_x, e_y) = A(y,x), so each g-product contributes a transposed
  // operator factor in the corresponding slots.
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (Index w = 0; w < n; ++w) {
          double v = (x == z ? (y == w ? 1.0 : 0.0) : 0.0) - (x == w ? (y == z ? 1.0 : 0.0) : 0.0);
          for (int a = 0; a < 3; ++a) {
            const Matrix& A = Q.op(a);
            v += 2.0 * A(y, x) * A(w, z) + A(z, x) * A(w, y) - A(w, x) * A(z, y);
          }
          out.at(x, y, z, w) = 0.25 * v;
        }
  return out;
}

double hk_residual(const CurvatureTensor& T, const QuaternionicStructure& Q) {
  double r = 0.0;
  for (int a = 0; a < 3; ++a) {
    CurvatureTensor moved = T.transform_last_two(Q.op(a));
    moved -= T;
    r = std::max(r, moved.max_abs());
  }
  return r;
}

Matrix ricci(const CurvatureTensor& T) {
  const Index n = T.dim();
  Matrix ric = Matrix::Zero(n, n);
  for (Index l = 0; l < n; ++l)
    for (Index y = 0; y < n; ++y)
      for (Index w = 0; w < n; ++w) ric(y, w) += T.at(l, y, l, w);
  return ric;
}

double scalar_curv(const CurvatureTensor& T) { return ricci(T).trace(); }

QKDecomposition decompose(const CurvatureTensor& R, const QuaternionicStructure& Q) {
  const Index n = Q.dim();
  const int m = Q.m;
  if (R.dim() != n) throw std::invalid_argument("decompose: dimension mismatch");

  const Matrix ric = ricci(R);
  const double mean = ric.trace() / static_cast<double>(n);
  const double aniso = (ric - mean * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (aniso > 1e-8 * std::max(1.0, std::fabs(mean))) {
    std::ostringstream msg;
    msg << "decompose: input is not Einstein (Ricci anisotropy " << aniso << ")";
    throw ConstructionError(msg.str());
  }

  const double scal = ric.trace();
  const double kappa = scal / (4.0 * m * (m + 2.0));
  if (kappa <= 0.0) {
    std::ostringstream msg;
    msg << "decompose: scalar curvature must be positive (kappa = " << kappa << ")";
    throw ConstructionError(msg.str());
  }

  QKDecomposition dec;
  dec.kappa = kappa;
  dec.r1 = R - kappa * build_r0(Q);

  const double scale = std::max(1.0, dec.r1.max_abs());
  const double ric_resid = ricci(dec.r1).cwiseAbs().maxCoeff();
  if (ric_resid > 1e-10 * std::max(1.0, kappa)) {
    std::ostringstream msg;
    msg << "decompose: remainder is not Ricci-flat (residual " << ric_resid << ")";
    throw ConstructionError(msg.str());
  }
  const double hk = hk_residual(dec.r1, Q);
  if (hk > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "decompose: remainder lacks paired-slot invariance (residual " << hk << ")";
    throw ConstructionError(msg.str());
  }
  return dec;
}

namespace {

// Projection onto tensors antisymmetric in (x,y) and (z,w) and symmetric
// under pair exchange: average over the eight signed slot arrangements.
CurvatureTensor project_symmetries(const CurvatureTensor& T) {
  CurvatureTensor out = T;
  out -= T.permuted({1, 0, 2, 3});
  out -= T.permuted({0, 1, 3, 2});
  out += T.permuted({1, 0, 3, 2});
  out += T.permuted({2, 3, 0, 1});
  out -= T.permuted({3, 2, 0, 1});
  out -= T.permuted({2, 3, 1, 0});
  out += T.permuted({3, 2, 1, 0});
  out *= 0.125;
  return out;
}

// Orthogonal projection onto the kernel of the cyclic symmetrization: the
// cyclic average over the 3-cycles of the first three slots is itself an
// orthogonal projection (group average), and subtracting it projects onto
// tensors with vanishing first-Bianchi sum.
CurvatureTensor project_bianchi(const CurvatureTensor& T) {
  CurvatureTensor cyc = T;
  cyc += T.permuted({1, 2, 0, 3});
  cyc += T.permuted({2, 0, 1, 3});
  cyc *= (1.0 / 3.0);
  CurvatureTensor out = T;
  out -= cyc;
  return out;
}

// Average over the four-group {Id, I, J, K} acting on the last slot pair.
CurvatureTensor project_pair_average(const CurvatureTensor& T, const QuaternionicStructure& Q) {
  CurvatureTensor out = T;
  for (int a = 0; a < 3; ++a) out += T.transform_last_two(Q.op(a));
  out *= 0.25;
  return out;
}

} // namespace

CurvatureTensor project_hk(const CurvatureTensor& T, const QuaternionicStructure& Q,
                           double tol, int max_iters) {
  if (T.dim() != Q.dim()) throw std::invalid_argument("project_hk: dimension mismatch");
  CurvatureTensor cur = T;
  for (int it = 0; it < max_iters; ++it) {
    CurvatureTensor next = project_pair_average(project_bianchi(project_symmetries(cur)), Q);
    CurvatureTensor diff = next;
    diff -= cur;
    cur = std::move(next);
    if (diff.max_abs() < tol) return cur;
  }
  std::ostringstream msg;
  msg << "project_hk: no convergence within " << max_iters << " iterations"
      << " (symmetry " << symmetry_residual(cur) << ", bianchi " << bianchi_residual(cur)
      << ", pair-invariance " << hk_residual(cur, Q) << ")";
  throw ConstructionError(msg.str());
}

CurvatureTensor random_r1(const QuaternionicStructure& Q, std::uint64_t seed, double scale) {
  const Index n = Q.dim();
  CurvatureTensor t(n);
  Rng rng(seed);
  for (double& v : t.values()) v = rng.normal();
  CurvatureTensor projected = project_hk(t, Q);
  if (scale == 0.0) return CurvatureTensor(n);
  const double max = projected.max_abs();
  if (max > 0.0) projected *= scale / max;
  return projected;
}

} // namespace qk
