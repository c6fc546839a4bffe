#include "qk/structure.hpp"

#include "qk/curvature.hpp"
#include "qk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qk {

QuaternionicStructure standard_structure(int m) {
  if (m < 2)
    throw std::invalid_argument("standard_structure: quaternionic dimension must be >= 2");
  const Index n = 4 * static_cast<Index>(m);
  QuaternionicStructure Q;
  Q.m = m;
  Q.I = Matrix::Zero(n, n);
  Q.J = Matrix::Zero(n, n);
  Q.K = Matrix::Zero(n, n);
  for (int q = 0; q < m; ++q) {
    const Index o = 4 * static_cast<Index>(q);
    // Left multiplication by i, j, k on coordinates ordered (1, i, j, k):
    //   i*(a,b,c,d) = (-b, a, -d, c)
    //   j*(a,b,c,d) = (-c, d, a, -b)
    //   k*(a,b,c,d) = (-d, -c, b, a)
    Q.I(o + 0, o + 1) = -1; Q.I(o + 1, o + 0) = 1;
    Q.I(o + 2, o + 3) = -1; Q.I(o + 3, o + 2) = 1;
    Q.J(o + 0, o + 2) = -1; Q.J(o + 1, o + 3) = 1;
    Q.J(o + 2, o + 0) = 1;  Q.J(o + 3, o + 1) = -1;
    Q.K(o + 0, o + 3) = -1; Q.K(o + 1, o + 2) = -1;
    Q.K(o + 2, o + 1) = 1;  Q.K(o + 3, o + 0) = 1;
  }
  return Q;
}

namespace {

Eigen::Vector3d cross(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return a.cross(b);
}

// Combination of the structure operators with the given coefficient vector.
Matrix combine(const QuaternionicStructure& Q, const Eigen::Vector3d& c) {
  return c[0] * Q.I + c[1] * Q.J + c[2] * Q.K;
}

} // namespace

QuaternionicStructure rotate_frame(const QuaternionicStructure& Q, double a, double b, double c) {
  Eigen::Vector3d u(a, b, c);
  const double norm = u.norm();
  if (norm < 1e-12)
    throw std::invalid_argument("rotate_frame: coefficient vector must be nonzero");
  if (std::fabs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("rotate_frame: coefficient vector must lie on the unit sphere");
  u /= norm;

  // Deterministic completion of u to an oriented orthonormal frame (v, u, w).
  Eigen::Vector3d v = cross(u, Eigen::Vector3d::UnitZ());
  if (v.norm() > 1e-6) {
    v.normalize();
  } else {
    // u is (anti)parallel to e_z; fall back to e_x, re-orthonormalized so
    // the output relations stay exact even when u has a tiny e_x component.
    v = Eigen::Vector3d::UnitX();
    v -= v.dot(u) * u;
    v.normalize();
  }
  // With I' = P(v), J' = P(u): I'J' = P(v)P(u) = P(v x u), so K' must take
  // the coefficient vector v x u for I'J'K' = -Id to hold.
  Eigen::Vector3d w = cross(v, u);
  w.normalize();

  QuaternionicStructure out;
  out.m = Q.m;
  out.I = combine(Q, v);
  out.J = combine(Q, u);
  out.K = combine(Q, w);
  return out;
}

double structure_residual(const QuaternionicStructure& Q) {
  const Index n = Q.dim();
  const Matrix id = Matrix::Identity(n, n);
  double r = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Matrix& A = Q.op(a);
    r = std::max(r, (A * A + id).cwiseAbs().maxCoeff());
    r = std::max(r, (A.transpose() * A - id).cwiseAbs().maxCoeff());
  }
  r = std::max(r, (Q.I * Q.J * Q.K + id).cwiseAbs().maxCoeff());
  return r;
}

std::pair<Vector, Vector> sample_q_orthogonal_pair(const QuaternionicStructure& Q, Rng& rng) {
  const Index n = Q.dim();
  const Vector X = rng.unit_vector(n);
  Matrix span(n, 4);
  span.col(0) = X;
  span.col(1) = Q.I * X;
  span.col(2) = Q.J * X;
  span.col(3) = Q.K * X;
  while (true) {
    Vector y = rng.gaussian_vector(n);
    // Two Gram-Schmidt passes keep the orthogonality at machine precision.
    for (int pass = 0; pass < 2; ++pass)
      for (int c = 0; c < 4; ++c) y -= y.dot(span.col(c)) * span.col(c);
    const double norm = y.norm();
    if (norm > 1e-6) return {X, y / norm};
  }
}

std::pair<Vector, Vector> sample_q_orthogonal_pair(const QuaternionicStructure& Q, std::uint64_t seed) {
  Rng rng(seed);
  return sample_q_orthogonal_pair(Q, rng);
}

namespace {

// Flip the sign so the first significant entry is positive; makes frames and
// tie-breaking deterministic.
void normalize_sign(Vector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::fabs(v[i]) > 1e-8) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

} // namespace

AdaptedFrame adapted_frame(const QuaternionicStructure& Q, const Vector& X, const CurvatureTensor& R1) {
  const Index n = Q.dim();
  const int m = Q.m;
  if (X.size() != n)
    throw std::invalid_argument("adapted_frame: vector dimension mismatch");
  if (std::fabs(X.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("adapted_frame: X must be a unit vector");
  if (hk_residual(R1, Q) > 1e-8)
    throw std::invalid_argument(
        "adapted_frame: tensor lacks the paired-slot invariance needed for the normal form");

  const Vector IX = Q.I * X;
  const Vector JX = Q.J * X;
  const Vector KX = Q.K * X;

  // Orthonormal basis of the complement H of span{X, IX, JX, KX}: the last
  // n-4 columns of the full Q factor of a Householder QR.
  Matrix base(n, 4);
  base.col(0) = X;
  base.col(1) = IX;
  base.col(2) = JX;
  base.col(3) = KX;
  Eigen::HouseholderQR<Matrix> qr(base);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix H = full.rightCols(n - 4);

  // omega(z,w) = R1(X,JX,z,w). The operator J*Omega is symmetric and
  // commutes with J on H, so its eigenvectors come in pairs (v, Jv) and
  // diagonalize omega in the required sense.
  const Matrix omega = R1.form_zw(X, JX);
  Matrix M = Q.J * omega;
  M = 0.5 * (M + M.transpose());
  Matrix Mh = H.transpose() * M * H;
  Mh = 0.5 * (Mh + Mh.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(Mh);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("adapted_frame: eigendecomposition failed");

  // Sort candidates by eigenvalue descending; break ties lexicographically
  // on the sign-normalized eigenvector entries.
  const Index h = n - 4;
  std::vector<Index> order(h);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Vector> vecs(h);
  for (Index i = 0; i < h; ++i) {
    vecs[i] = es.eigenvectors().col(i);
    normalize_sign(vecs[i]);
  }
  std::sort(order.begin(), order.end(), [&](Index p, Index q) {
    const double lp = es.eigenvalues()[p];
    const double lq = es.eigenvalues()[q];
    if (lp != lq) return lp > lq;
    for (Index i = 0; i < h; ++i)
      if (vecs[p][i] != vecs[q][i]) return vecs[p][i] < vecs[q][i];
    return false;
  });

  AdaptedFrame frame;
  frame.w.reserve(2 * m);
  frame.w.push_back(X);
  frame.w.push_back(IX);

  std::vector<Vector> taken; // the pair vectors {w_alpha, J w_alpha} so far
  for (Index oi = 0; oi < h && static_cast<int>(frame.w.size()) < 2 * m; ++oi) {
    Vector v = H * vecs[order[oi]];
    for (const Vector& t : taken) v -= v.dot(t) * t;
    const double norm = v.norm();
    if (norm < 0.3) continue; // J-partner of an eigenvector already taken
    v /= norm;
    normalize_sign(v);
    frame.w.push_back(v);
    taken.push_back(v);
    taken.push_back(Q.J * v);
  }
  if (static_cast<int>(frame.w.size()) != 2 * m)
    throw std::runtime_error("adapted_frame: failed to extract a full set of paired eigenvectors");

  frame.lambda.resize(2 * m - 2);
  for (int alpha = 2; alpha < 2 * m; ++alpha) {
    const Vector& w = frame.w[alpha];
    frame.lambda[alpha - 2] = w.dot(omega * (Q.J * w));
  }
  return frame;
}

} // namespace qk
