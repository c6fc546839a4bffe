#include "qk/models.hpp"

#include "qk/mu.hpp"
#include "qk/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qk {

namespace {

using CMatrix = Eigen::MatrixXcd;

// Embeds a complex 2 x m block Z into the skew-Hermitian matrix
// [[0, Z], [-Z^*, 0]] of size (m+2) x (m+2).
CMatrix embed_tangent(const CMatrix& Z, int m) {
  CMatrix out = CMatrix::Zero(m + 2, m + 2);
  out.block(0, 2, 2, m) = Z;
  out.block(2, 0, m, 2) = -Z.adjoint();
  return out;
}

double re_trace(const CMatrix& A, const CMatrix& B) { return (A * B).trace().real(); }

// Shared post-construction verification of the ModelSpace invariants.
// Thresholds are relative to the tensor scale so large kappa stays checkable.
void verify_model(const ModelSpace& ms) {
  const double scale = std::max(1.0, ms.R.max_abs());
  const double sym = symmetry_residual(ms.R);
  const double bia = bianchi_residual(ms.R);
  if (sym > 1e-11 * scale || bia > 1e-11 * scale) {
    std::ostringstream os;
    os << "model '" << ms.name << "': curvature symmetry residuals too large (symmetry "
       << sym << ", bianchi " << bia << ")";
    throw ConstructionError(os.str());
  }
  const Matrix ric = ricci(ms.R);
  const double expected = (ms.m + 2.0) * ms.kappa;
  const double ric_res =
      (ric - expected * Matrix::Identity(ms.R.dim(), ms.R.dim())).cwiseAbs().maxCoeff();
  if (ric_res > 1e-10 * std::max(1.0, expected)) {
    std::ostringstream os;
    os << "model '" << ms.name << "': ricci is not (m+2)*kappa*Id (residual " << ric_res << ")";
    throw ConstructionError(os.str());
  }
  decompose(ms.R, ms.Q); // throws if the tensor is not admissible for Q

  // Sectional-curvature hypothesis on sampled quaternionically orthogonal
  // unit pairs, over rotated structures.
  Rng rng(9001);
  for (int i = 0; i < 64; ++i) {
    const Vector u = rng.unit_vector(3);
    const QuaternionicStructure Q2 = rotate_frame(ms.Q, u[0], u[1], u[2]);
    const auto [X, Y] = sample_q_orthogonal_pair(Q2, rng);
    const Vector JY = Q2.J * Y;
    const double val = ms.R.value(X, Y, X, Y) + ms.R.value(X, JY, X, JY);
    if (val < -1e-10 * scale) {
      std::ostringstream os;
      os << "model '" << ms.name << "': sectional hypothesis violated (value " << val << ")";
      throw ConstructionError(os.str());
    }
  }
}

} // namespace

ModelSpace hp_model(int m, double kappa) {
  if (m < 2) throw std::invalid_argument("hp_model: m must be at least 2");
  if (!(kappa > 0.0)) throw std::invalid_argument("hp_model: kappa must be positive");
  QuaternionicStructure Q = standard_structure(m);
  CurvatureTensor R = build_r0(Q);
  R *= kappa;
  ModelSpace ms{"hp", m, std::move(R), std::move(Q), kappa};
  verify_model(ms);
  return ms;
}

ModelSpace grassmannian_model(int m) {
  if (m < 2) throw std::invalid_argument("grassmannian_model: m must be at least 2");
  const int N = m + 2;
  const Index n = 4 * m;

  // Orthonormal tangent basis: complex 2 x m blocks, one real and one
  // imaginary unit per slot, normalized against <A,B> = -tr(AB).
  std::vector<CMatrix> B;
  B.reserve(n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < m; ++t)
      for (int part = 0; part < 2; ++part) {
        CMatrix Z = CMatrix::Zero(2, m);
        Z(s, t) = part == 0 ? std::complex<double>(inv_sqrt2, 0.0)
                            : std::complex<double>(0.0, inv_sqrt2);
        B.push_back(embed_tangent(Z, m));
      }

  // Metric check: the basis must be orthonormal for the curvature formula
  // below to yield tensor components directly.
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double g = -re_trace(B[i], B[j]);
      const double want = i == j ? 1.0 : 0.0;
      if (std::fabs(g - want) > 1e-12)
        throw ConstructionError("grassmannian_model: tangent basis is not orthonormal");
    }

  // Curvature from Lie brackets; the overall sign is pinned afterwards by
  // the ricci-positivity convention rather than by bracket bookkeeping.
  std::vector<CMatrix> comm(static_cast<std::size_t>(n) * n, CMatrix());
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      comm[a * n + b] = B[a] * B[b] - B[b] * B[a];
  CurvatureTensor R(n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index d = 0; d < n; ++d)
          R.at(a, b, c, d) = -re_trace(comm[a * n + b], comm[c * n + d]);
  if (scalar_curv(R) < 0.0) R *= -1.0;

  // Quaternionic structure from the su(2) isotropy factor: xi_1, xi_2, xi_3
  // with [xi_1, xi_2] = 2 xi_3 cyclically, acting on the tangent block.
  const std::complex<double> iu(0.0, 1.0);
  std::vector<CMatrix> xi(3, CMatrix::Zero(N, N));
  xi[0](0, 0) = iu;
  xi[0](1, 1) = -iu;
  xi[1](0, 1) = 1.0;
  xi[1](1, 0) = -1.0;
  xi[2](0, 1) = iu;
  xi[2](1, 0) = iu;
  std::array<Matrix, 3> A;
  for (int a = 0; a < 3; ++a) {
    A[a] = Matrix(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        A[a](i, j) = -re_trace(B[i], xi[a] * B[j] - B[j] * xi[a]);
  }
  // The adjoint action squares to a negative multiple of the identity; the
  // multiple is computed, not assumed, and used to normalize.
  const double s2 = -(A[0] * A[0]).trace() / static_cast<double>(n);
  if (!(s2 > 0.0))
    throw ConstructionError("grassmannian_model: isotropy action does not square negative");
  const double s = std::sqrt(s2);
  for (int a = 0; a < 3; ++a) A[a] /= s;

  QuaternionicStructure Q;
  Q.m = m;
  Q.I = A[0];
  Q.J = A[1];
  Q.K = Q.I * Q.J; // exact composite so the triple relations hold to rounding
  const double k_res = (Q.K - A[2]).cwiseAbs().maxCoeff();
  const double q_res = structure_residual(Q);
  if (k_res > 1e-10 || q_res > 1e-10) {
    std::ostringstream os;
    os << "grassmannian_model: quaternion relations violated (composite residual " << k_res
       << ", structure residual " << q_res << ")";
    throw ConstructionError(os.str());
  }

  // Rescale the metric so kappa = 1; the scale is measured via decompose.
  const QKDecomposition raw = decompose(R, Q);
  R *= 1.0 / raw.kappa;
  const QKDecomposition dec = decompose(R, Q);

  ModelSpace ms{"gr2c", m, std::move(R), std::move(Q), dec.kappa};
  verify_model(ms);
  return ms;
}

std::vector<IdentityReport> model_suite(const ModelSpace& model, double tol, uint64_t seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("model_suite: tol must be positive");
  const Index n = model.Q.dim();
  const QKDecomposition dec = decompose(model.R, model.Q);
  const CurvatureTensor r0 = build_r0(model.Q);
  const double r_scale = std::max(1.0, model.R.max_abs());
  const double r1_scale = std::max(1.0, dec.r1.max_abs());

  std::vector<IdentityReport> out;
  const std::string hash = "seed:" + std::to_string(seed);
  auto add = [&](const char* name, double residual, long samples) {
    out.push_back(IdentityReport{name, residual, samples, hash});
  };

  add("symmetry", symmetry_residual(model.R) / r_scale, 0);
  add("bianchi", bianchi_residual(model.R) / r_scale, 0);
  add("hk", hk_residual(dec.r1, model.Q) / r1_scale, 0);
  add("ricci-flat", ricci(dec.r1).cwiseAbs().maxCoeff() / r1_scale, 0);

  {
    Rng rng(seed + 1);
    const long samples = 200;
    double worst = 0.0;
    for (long i = 0; i < samples; ++i) {
      const Vector Y = rng.unit_vector(n);
      const Vector V = rng.unit_vector(n);
      const Vector W = rng.unit_vector(n);
      worst = std::max(worst, std::fabs(four_trace(dec.r1, model.Q, Y, V, W)));
    }
    add("four-trace", worst / r1_scale, samples);
  }

  {
    Rng rng(seed + 2);
    const long samples = 5;
    double worst_s1 = 0.0, worst_t0 = 0.0, worst_s0 = 0.0;
    for (long i = 0; i < samples; ++i) {
      const Vector u = rng.unit_vector(3);
      const QuaternionicStructure Q2 = rotate_frame(model.Q, u[0], u[1], u[2]);
      const Vector X = rng.unit_vector(n);
      const AdaptedFrame frame = adapted_frame(Q2, X, dec.r1);
      const BasisSums bs = basis_sums(dec.r1, Q2, dec.kappa, X, frame);
      const Vector JX = Q2.J * X;
      const double f = dec.r1.value(X, JX, X, JX);
      worst_s1 = std::max(worst_s1, std::fabs(bs.s1));
      worst_t0 = std::max(worst_t0, std::fabs(bs.t0));
      worst_s0 = std::max(worst_s0, std::fabs(bs.s0 - (2.0 * model.m - 2.0) * f));
    }
    add("basis-sum-s1", worst_s1 / (r1_scale * r1_scale), samples);
    add("basis-sum-t0", worst_t0 / r1_scale, samples);
    add("basis-sum-s0", worst_s0 / r1_scale, samples);
  }

  {
    CurvatureTensor lhs = q_quadratic(r0);
    CurvatureTensor expected = r0;
    expected *= 2.0 * model.m + 4.0;
    lhs -= expected;
    add("q-r0", lhs.max_abs() / std::max(1.0, expected.max_abs()), 0);
  }
  {
    // Parallel curvature makes the quadratic term a pure eigenvalue relation.
    CurvatureTensor lhs = q_quadratic(dec.r1);
    CurvatureTensor expected = dec.r1;
    expected *= (2.0 * model.m + 4.0) * dec.kappa;
    lhs -= expected;
    add("q-r1", lhs.max_abs() / std::max(1.0, expected.max_abs()), 0);
  }

  {
    Rng rng(seed + 3);
    const long samples = 200;
    double worst = 0.0;
    for (long i = 0; i < samples; ++i) {
      const Vector V = rng.unit_vector(n);
      const Vector X = rng.unit_vector(n);
      const Vector Y = rng.unit_vector(n);
      const Vector Z = rng.unit_vector(n);
      const Vector W = rng.unit_vector(n);
      worst = std::max(worst, ts_defect(model.R, dec, model.Q, V, X, Y, Z, W));
    }
    add("ts-defect", worst / (r_scale * r_scale), samples);
  }

  {
    const long samples = 2000;
    const auto [min1, min2] = inequality_minima(model, samples, seed + 4);
    const double violation = std::max(0.0, std::max(-min1, -min2));
    add("inequality-sweep", violation / std::max(1.0, model.kappa), samples);
  }

  std::sort(out.begin(), out.end(),
            [](const IdentityReport& a, const IdentityReport& b) { return a.name < b.name; });
  return out;
}

std::vector<IdentityReport> tensor_suite(const CurvatureTensor& R1, const QuaternionicStructure& Q,
                                         double tol, uint64_t seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("tensor_suite: tol must be positive");
  if (R1.dim() != Q.dim()) throw std::invalid_argument("tensor_suite: dimension mismatch");
  const Index n = Q.dim();
  const double r1_scale = std::max(1.0, R1.max_abs());

  std::vector<IdentityReport> out;
  const std::string hash = "seed:" + std::to_string(seed);
  auto add = [&](const char* name, double residual, long samples) {
    out.push_back(IdentityReport{name, residual, samples, hash});
  };

  add("symmetry", symmetry_residual(R1) / r1_scale, 0);
  add("bianchi", bianchi_residual(R1) / r1_scale, 0);
  add("hk", hk_residual(R1, Q) / r1_scale, 0);
  add("ricci-flat", ricci(R1).cwiseAbs().maxCoeff() / r1_scale, 0);

  {
    Rng rng(seed + 1);
    const long samples = 200;
    double worst = 0.0;
    for (long i = 0; i < samples; ++i) {
      const Vector Y = rng.unit_vector(n);
      const Vector V = rng.unit_vector(n);
      const Vector W = rng.unit_vector(n);
      worst = std::max(worst, std::fabs(four_trace(R1, Q, Y, V, W)));
    }
    add("four-trace", worst / r1_scale, samples);
  }

  {
    Rng rng(seed + 2);
    const long samples = 5;
    double worst_s1 = 0.0, worst_t0 = 0.0, worst_s0 = 0.0;
    for (long i = 0; i < samples; ++i) {
      const Vector u = rng.unit_vector(3);
      const QuaternionicStructure Q2 = rotate_frame(Q, u[0], u[1], u[2]);
      const Vector X = rng.unit_vector(n);
      const AdaptedFrame frame = adapted_frame(Q2, X, R1);
      const BasisSums bs = basis_sums(R1, Q2, 0.0, X, frame);
      const Vector JX = Q2.J * X;
      const double f = R1.value(X, JX, X, JX);
      worst_s1 = std::max(worst_s1, std::fabs(bs.s1));
      worst_t0 = std::max(worst_t0, std::fabs(bs.t0));
      worst_s0 = std::max(worst_s0, std::fabs(bs.s0 - (2.0 * Q.m - 2.0) * f));
    }
    add("basis-sum-s1", worst_s1 / (r1_scale * r1_scale), samples);
    add("basis-sum-t0", worst_t0 / r1_scale, samples);
    add("basis-sum-s0", worst_s0 / r1_scale, samples);
  }

  std::sort(out.begin(), out.end(),
            [](const IdentityReport& a, const IdentityReport& b) { return a.name < b.name; });
  return out;
}

bool all_pass(const std::vector<IdentityReport>& reports, double tol) {
  for (const IdentityReport& r : reports)
    if (!(r.max_residual <= tol)) return false;
  return true;
}

} // namespace qk
