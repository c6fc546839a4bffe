#pragma once

#include "qk/common.hpp"
#include "qk/curvature.hpp"
#include "qk/structure.hpp"
#include "qk/tensor.hpp"

#include <string>
#include <utility>

namespace qk {

// One named check: the largest residual observed, how many samples were
// drawn, and the seed provenance so the run can be reproduced exactly.
struct IdentityReport {
  std::string name;
  double max_residual = 0.0;
  long samples = 0;
  std::string inputs_hash;
};

// The four-term trace sum_{A in {Id,I,J,K}} R1(Y, AV, W, AV). It vanishes
// identically for tensors with the curvature symmetries, first Bianchi, and
// paired-slot invariance; the returned value is the residual.
double four_trace(const CurvatureTensor& R1, const QuaternionicStructure& Q,
                  const Vector& Y, const Vector& V, const Vector& W);

// Values of the quadratic curvature expressions attached to a direction V.
struct TsValues {
  double v0 = 0.0; // contraction pairing the supplied first-slot tensor with R1
  double v1 = 0.0; // contraction pairing R1 with itself
  double v = 0.0;  // v1 + kappa * v0
};

// T-type expression:
//   T^(.)(X,Y,Z,W) = sum_l F(X,Y,V,e_l)   R1(Z,W,V,e_l)
//                  + sum_l F(X,V,Z,e_l)   R1(Y,V,W,e_l)
//                  - sum_l F(X,V,W,e_l)   R1(Y,V,Z,e_l)
//                  - sum_l F(Y,V,Z,e_l)   R1(X,V,W,e_l)
//                  + sum_l F(Y,V,W,e_l)   R1(X,V,Z,e_l)
// evaluated once with F = r0_slot (giving v0) and once with F = R1 (v1).
TsValues t_tensor(const CurvatureTensor& r0_slot, const CurvatureTensor& R1, double kappa,
                  const Vector& V, const Vector& X, const Vector& Y, const Vector& Z,
                  const Vector& W);

// S-type expression:
//   S^(.)(X,Y,Z,W) = sum_l F(X,V,e_l,V) R1(e_l,Y,Z,W)
//                  + sum_l F(Y,V,e_l,V) R1(X,e_l,Z,W)
// with F = R0 for v0 (R0 is built from Q) and F = R1 for v1.
TsValues s_tensor(const CurvatureTensor& R1, const QuaternionicStructure& Q, double kappa,
                  const Vector& V, const Vector& X, const Vector& Y, const Vector& Z,
                  const Vector& W);
// Overload taking a prebuilt R0 to avoid rebuilding it in tight loops.
TsValues s_tensor(const CurvatureTensor& R1, const CurvatureTensor& R0, double kappa,
                  const Vector& V, const Vector& X, const Vector& Y, const Vector& Z,
                  const Vector& W);

// The quadratic curvature expression
//   Q(T)(X,Y,Z,W) = sum_{p,q} T(X,Y,e_p,e_q) T(Z,W,e_p,e_q)
//                 + 2 sum_{p,q} T(X,e_p,Z,e_q) T(Y,e_p,W,e_q)
//                 - 2 sum_{p,q} T(X,e_p,W,e_q) T(Y,e_p,Z,e_q).
// The output carries the curvature symmetries whenever T does.
CurvatureTensor q_quadratic(const CurvatureTensor& T);

// |T_V - S_V| at the given arguments, where T_V and S_V combine the
// expressions above with the decomposition's kappa. On a space with parallel
// curvature the two agree identically.
double ts_defect(const CurvatureTensor& R, const QKDecomposition& dec,
                 const QuaternionicStructure& Q, const Vector& V, const Vector& X,
                 const Vector& Y, const Vector& Z, const Vector& W);

// The four partial-basis sums over the adapted frame:
//   sum_{alpha=3}^{2m} [ E_{w_alpha} + E_{J w_alpha} ](X, JX, X, JX)
// for E = T^(1), S^(1), T^(0), S^(0). For admissible R1 the s1 and t0 sums
// vanish and s0 equals (2m-2) * R1(X,JX,X,JX).
struct BasisSums {
  double t1 = 0.0;
  double s1 = 0.0;
  double t0 = 0.0;
  double s0 = 0.0;
};
BasisSums basis_sums(const CurvatureTensor& R1, const QuaternionicStructure& Q, double kappa,
                     const Vector& X, const AdaptedFrame& frame);
// Overload computing the adapted frame internally.
BasisSums basis_sums(const CurvatureTensor& R1, const QuaternionicStructure& Q, double kappa,
                     const Vector& X);

// Returns (lhs, rhs) = ((2m-2) * kappa * R1(X,JX,X,JX), 4 * sum lambda^2)
// from the adapted frame at X. At a maximizer of the first quantity over
// admissible (J, X), lhs <= rhs.
std::pair<double, double> key_inequality_check(const CurvatureTensor& R1,
                                               const QuaternionicStructure& Q, double kappa,
                                               const Vector& X, const AdaptedFrame& frame);

} // namespace qk
