#include "doctest.h"

#include <cmath>

#include "qk/curvature.hpp"
#include "qk/identities.hpp"
#include "qk/rng.hpp"
#include "qk/structure.hpp"

using qk::AdaptedFrame;
using qk::CurvatureTensor;
using qk::QuaternionicStructure;
using qk::Rng;
using qk::TsValues;
using qk::Vector;

TEST_CASE("identities: four-term trace vanishes on admissible tensors") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor R1 = qk::random_r1(Q, 7);
  const double scale = std::max(1.0, R1.max_abs());
  Rng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vector Y = rng.unit_vector(Q.dim());
    const Vector V = rng.unit_vector(Q.dim());
    const Vector W = rng.unit_vector(Q.dim());
    worst = std::max(worst, std::abs(qk::four_trace(R1, Q, Y, V, W)));
  }
  CHECK(worst < 1e-10 * scale);

  // The space-form tensor is NOT in the kernel: the trace is a genuine
  // constraint, not an algebraic triviality.
  const CurvatureTensor R0 = qk::build_r0(Q);
  Rng rng2(8);
  const Vector Y = rng2.unit_vector(Q.dim());
  const Vector V = rng2.unit_vector(Q.dim());
  CHECK(std::abs(qk::four_trace(R0, Q, Y, V, Y)) > 1e-3);
}

TEST_CASE("identities: T-type values against closed-form references") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor R0 = qk::build_r0(Q);
  const CurvatureTensor R1 = qk::random_r1(Q, 123);
  Rng rng(124);
  const Vector X = rng.unit_vector(Q.dim());
  const Vector IX = Q.I * X, JX = Q.J * X;
  const double f = R1.value(X, JX, X, JX);

  // With the space-form tensor in the first factor and direction V = X, the
  // five-term sum collapses to the single value R1(X,JX,X,JX).
  const TsValues tx = qk::t_tensor(R0, R1, 1.0, X, X, JX, X, JX);
  CHECK(std::abs(tx.v0 - f) < 1e-12 * std::max(1.0, std::abs(f)));

  // For V = IX it collapses to R1(X,IX,X,IX) + R1(JX,IX,JX,IX).
  const double expect = R1.value(X, IX, X, IX) + R1.value(JX, IX, JX, IX);
  const TsValues tix = qk::t_tensor(R0, R1, 1.0, IX, X, JX, X, JX);
  CHECK(std::abs(tix.v0 - expect) < 1e-12 * std::max(1.0, std::abs(expect)));

  // The combined value composes the two parts with kappa.
  const TsValues tc = qk::t_tensor(R0, R1, 0.75, X, X, JX, X, JX);
  CHECK(tc.v == tc.v1 + 0.75 * tc.v0);
}

TEST_CASE("identities: S-type basis sums hit their closed forms") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor R0 = qk::build_r0(Q);
  const CurvatureTensor R1 = qk::random_r1(Q, 321);
  Rng rng(322);
  const Vector X = rng.unit_vector(Q.dim());
  const Vector JX = Q.J * X;
  const double f = R1.value(X, JX, X, JX);
  const AdaptedFrame frame = qk::adapted_frame(Q, X, R1);
  const int two_m = 2 * Q.m;

  // Full-basis sum of the S-type space-form part: (2m+4) * R1(X,JX,X,JX).
  double full = 0.0;
  for (int a = 0; a < two_m; ++a) {
    const Vector& w = frame.w[static_cast<std::size_t>(a)];
    full += qk::s_tensor(R1, R0, 1.0, w, X, JX, X, JX).v0;
    full += qk::s_tensor(R1, R0, 1.0, Q.J * w, X, JX, X, JX).v0;
  }
  CHECK(std::abs(full - (two_m + 4) * f) < 1e-10 * std::max(1.0, std::abs(f)));

  // The two frame vectors spanning the quaternionic line of X contribute 6f.
  double head = 0.0;
  for (int a = 0; a < 2; ++a) {
    const Vector& w = frame.w[static_cast<std::size_t>(a)];
    head += qk::s_tensor(R1, R0, 1.0, w, X, JX, X, JX).v0;
    head += qk::s_tensor(R1, R0, 1.0, Q.J * w, X, JX, X, JX).v0;
  }
  CHECK(std::abs(head - 6.0 * f) < 1e-10 * std::max(1.0, std::abs(f)));

  // The two s_tensor overloads agree.
  const TsValues a = qk::s_tensor(R1, Q, 0.5, X, X, JX, X, JX);
  const TsValues b = qk::s_tensor(R1, R0, 0.5, X, X, JX, X, JX);
  CHECK(a.v0 == b.v0);
  CHECK(a.v1 == b.v1);
  CHECK(a.v == b.v);
}

TEST_CASE("identities: quadratic expression algebra") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor R0 = qk::build_r0(Q);
  const CurvatureTensor S = qk::random_r1(Q, 11);
  const CurvatureTensor T = qk::random_r1(Q, 12);

  // Homogeneity of degree two.
  const CurvatureTensor q1 = qk::q_quadratic(S);
  const CurvatureTensor q3 = qk::q_quadratic(3.0 * S);
  CHECK((q3 - 9.0 * q1).max_abs() < 1e-12 * std::max(1.0, q3.max_abs()));

  // Parallelogram law of the underlying bilinear map.
  const CurvatureTensor lhs = qk::q_quadratic(S + T) + qk::q_quadratic(S - T);
  const CurvatureTensor rhs = 2.0 * qk::q_quadratic(S) + 2.0 * qk::q_quadratic(T);
  CHECK((lhs - rhs).max_abs() < 1e-12 * std::max(1.0, rhs.max_abs()));

  // The output inherits the curvature symmetries (up to summation rounding,
  // so the residual is measured relative to the output's own scale).
  CHECK(qk::symmetry_residual(q1) < 1e-10 * std::max(1.0, q1.max_abs()));

  // Space-form eigentensor: Q(R0) = (2m+4) R0.
  const CurvatureTensor qr0 = qk::q_quadratic(R0);
  CHECK((qr0 - (2.0 * Q.m + 4.0) * R0).max_abs() < 1e-10);
}

TEST_CASE("identities: partial basis sums on admissible tensors") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor zero(Q.dim());
  Rng rng(55);
  const Vector X0 = rng.unit_vector(Q.dim());
  const qk::BasisSums z = qk::basis_sums(zero, Q, 1.0, X0);
  CHECK(z.t1 == 0.0);
  CHECK(z.s1 == 0.0);
  CHECK(z.t0 == 0.0);
  CHECK(z.s0 == 0.0);

  const CurvatureTensor R1 = qk::random_r1(Q, 888);
  const double scale = std::max(1.0, R1.max_abs());
  for (int trial = 0; trial < 5; ++trial) {
    const Vector X = rng.unit_vector(Q.dim());
    const qk::BasisSums s = qk::basis_sums(R1, Q, 1.0, X);
    const double f = R1.value(X, Q.J * X, X, Q.J * X);
    CHECK(std::abs(s.s1) < 1e-10 * scale * scale);
    CHECK(std::abs(s.t0) < 1e-10 * scale);
    CHECK(std::abs(s.s0 - (2.0 * Q.m - 2.0) * f) < 1e-9 * std::max(1.0, std::abs(f)));
  }
}

TEST_CASE("identities: frame inequality data") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor zero(Q.dim());
  Rng rng(66);
  const Vector X = rng.unit_vector(Q.dim());
  const AdaptedFrame frame = qk::adapted_frame(Q, X, zero);
  const auto [lhs, rhs] = qk::key_inequality_check(zero, Q, 1.0, X, frame);
  CHECK(lhs == 0.0);
  CHECK(rhs == 0.0);

  const CurvatureTensor R1 = qk::random_r1(Q, 77);
  const AdaptedFrame fr = qk::adapted_frame(Q, X, R1);
  const auto [l2, r2] = qk::key_inequality_check(R1, Q, 2.0, X, fr);
  CHECK(l2 == doctest::Approx((2.0 * Q.m - 2.0) * 2.0 * R1.value(X, Q.J * X, X, Q.J * X)).epsilon(1e-12));
  double acc = 0.0;
  for (double l : fr.lambda) acc += 4.0 * l * l;
  CHECK(r2 == doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("identities: commutator defect is generically nonzero") {
  const QuaternionicStructure Q = qk::standard_structure(2);
  const CurvatureTensor R0 = qk::build_r0(Q);
  const CurvatureTensor R1 = qk::random_r1(Q, 404);
  const CurvatureTensor R = R1 + 1.0 * R0;
  const qk::QKDecomposition dec = qk::decompose(R, Q);
  Rng rng(405);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Vector V = rng.unit_vector(Q.dim());
    const Vector X = rng.unit_vector(Q.dim());
    const Vector Y = rng.unit_vector(Q.dim());
    const Vector Z = rng.unit_vector(Q.dim());
    const Vector W = rng.unit_vector(Q.dim());
    const double d = qk::ts_defect(R, dec, Q, V, X, Y, Z, W);
    CHECK(std::isfinite(d));
    CHECK(d >= 0.0);
    worst = std::max(worst, d);
  }
  // A random admissible tensor does not come from a parallel-curvature space.
  CHECK(worst > 1e-6);
}
