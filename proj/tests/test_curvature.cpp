#include "doctest.h"

#include <cmath>

#include "qk/curvature.hpp"
#include "qk/rng.hpp"
#include "qk/structure.hpp"

using qk::CurvatureTensor;
using qk::Index;
using qk::Matrix;
using qk::QuaternionicStructure;
using qk::Rng;
using qk::Vector;

TEST_CASE("curvature: space-form tensor hits its calibration values") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor R0 = qk::build_r0(Q);
  const Index n = Q.dim();

  // Entries are exact multiples of 1/4.
  for (std::size_t i = 0; i < R0.size(); ++i) {
    const double q = R0.data()[i] * 4.0;
    CHECK(std::abs(q - std::round(q)) < 1e-12);
  }

  Vector e1 = Vector::Zero(n);
  e1[0] = 1.0;
  const Vector Ie1 = Q.I * e1;
  CHECK(std::abs(R0.value(e1, Ie1, e1, Ie1) - 1.0) < 1e-13);

  // Sectional values on quaternionically orthogonal unit pairs are 1/4.
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const auto [X, Y] = qk::sample_q_orthogonal_pair(Q, rng);
    CHECK(std::abs(R0.value(X, Y, X, Y) - 0.25) < 1e-12);
    CHECK(std::abs(R0.value(X, Q.J * Y, X, Q.J * Y) - 0.25) < 1e-12);
  }

  const Matrix ric = qk::ricci(R0);
  CHECK((ric - (Q.m + 2) * Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(qk::scalar_curv(R0) - 32.0) < 1e-11);

  CHECK(qk::symmetry_residual(R0) < 1e-14);
  CHECK(qk::bianchi_residual(R0) < 1e-14);
  // R0 itself is NOT invariant under the paired action; only the remainder is.
  CHECK(qk::hk_residual(R0, Q) > 0.1);
}

TEST_CASE("curvature: decompose recovers scale and remainder") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor R0 = qk::build_r0(Q);

  const qk::QKDecomposition pure = qk::decompose(3.0 * R0, Q);
  CHECK(std::abs(pure.kappa - 3.0) < 1e-12);
  CHECK(pure.r1.max_abs() < 1e-11);

  const CurvatureTensor R1 = qk::random_r1(Q, 2718, 0.5);
  const CurvatureTensor R = R1 + 2.0 * R0;
  const qk::QKDecomposition dec = qk::decompose(R, Q);
  CHECK(std::abs(dec.kappa - 2.0) < 1e-11);
  CHECK((dec.r1 - R1).max_abs() < 1e-10);

  // kappa is linear in the overall scale.
  const qk::QKDecomposition half = qk::decompose(0.5 * R, Q);
  CHECK(std::abs(half.kappa - 1.0) < 1e-11);
}

TEST_CASE("curvature: decompose rejects non-Einstein input") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  CurvatureTensor R = qk::build_r0(Q);
  // An anisotropic, symmetry-respecting perturbation: R(x,y,z,w) +=
  // eps * (g wedge h)(x,y,z,w) with h = diag(1,0,...,0) makes Ricci uneven.
  const Index n = Q.dim();
  const double eps = 1e-3;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (Index w = 0; w < n; ++w) {
          const auto d = [](Index a, Index b) { return a == b ? 1.0 : 0.0; };
          const auto h = [](Index a, Index b) { return (a == 0 && b == 0) ? 1.0 : 0.0; };
          R.at(x, y, z, w) += eps * (d(x, z) * h(y, w) + d(y, w) * h(x, z) -
                                     d(x, w) * h(y, z) - d(y, z) * h(x, w));
        }
  CHECK(qk::symmetry_residual(R) < 1e-12);
  CHECK_THROWS_AS(qk::decompose(R, Q), qk::ConstructionError);
}

TEST_CASE("curvature: projection lands in the admissible space and stays there") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  Rng rng(31415);
  CurvatureTensor noise(Q.dim());
  for (double& v : noise.values()) v = rng.normal();

  const CurvatureTensor P = qk::project_hk(noise, Q);
  CHECK(qk::symmetry_residual(P) < 1e-10);
  CHECK(qk::bianchi_residual(P) < 1e-10);
  CHECK(qk::hk_residual(P, Q) < 1e-10);
  // Trace-freeness is forced by the admissibility conditions, not imposed.
  CHECK(qk::ricci(P).cwiseAbs().maxCoeff() < 1e-9);

  // Idempotence: admissible input is (numerically) a fixed point.
  const CurvatureTensor P2 = qk::project_hk(P, Q);
  CHECK((P2 - P).max_abs() < 1e-9);
}

TEST_CASE("curvature: random_r1 is deterministic and correctly scaled") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor A = qk::random_r1(Q, 99, 1.0);
  const CurvatureTensor B = qk::random_r1(Q, 99, 1.0);
  CHECK((A - B).max_abs() == 0.0);
  CHECK(std::abs(A.max_abs() - 1.0) < 1e-12);

  const CurvatureTensor C = qk::random_r1(Q, 99, 0.25);
  CHECK(std::abs(C.max_abs() - 0.25) < 1e-12);
  CHECK((4.0 * C - A).max_abs() < 1e-12);

  const CurvatureTensor Z = qk::random_r1(Q, 99, 0.0);
  CHECK(Z.max_abs() == 0.0);

  const CurvatureTensor D = qk::random_r1(Q, 100, 1.0);
  CHECK((A - D).max_abs() > 0.01);
}
