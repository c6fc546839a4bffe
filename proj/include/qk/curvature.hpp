#pragma once

#include "qk/common.hpp"
#include "qk/structure.hpp"
#include "qk/tensor.hpp"

#include <cstdint>

namespace qk {

// Thrown when a construction (projection, model assembly, decomposition)
// cannot produce a valid object. The CLI maps it to its own exit code,
// distinct from argument/IO errors.
class ConstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The canonical curvature tensor of quaternionic space forms:
//   4 R0(X,Y,Z,W) = g(X,Z)g(Y,W) - g(X,W)g(Y,Z)
//                 + sum_{A in {I,J,K}} [ 2 g(AX,Y)g(AZ,W)
//                                        + g(AX,Z)g(AY,W) - g(AX,W)g(AY,Z) ].
// Entries on the standard basis are exact multiples of 1/4.
CurvatureTensor build_r0(const QuaternionicStructure& Q);

// Max over basis entries and A in {I,J,K} of |T(x,y,z,w) - T(x,y,Az,Aw)|:
// the violation of the paired-slot invariance characteristic of the
// hyper-Kaehler component.
double hk_residual(const CurvatureTensor& T, const QuaternionicStructure& Q);

// Ric(y,w) = sum_l T(e_l, y, e_l, w). With this sign, ricci(build_r0(Q)) is
// the positive matrix (m+2) Id, which pins the orientation convention.
Matrix ricci(const CurvatureTensor& T);

// Trace of the Ricci matrix.
double scalar_curv(const CurvatureTensor& T);

// The pair (kappa, R1) with R = R1 + kappa*R0: R1 is Ricci-flat and carries
// the paired-slot invariance, kappa > 0 is the space-form scale.
struct QKDecomposition {
  double kappa = 0.0;
  CurvatureTensor r1;
};

// Splits an Einstein curvature tensor as R = R1 + kappa*R0 with
// kappa = scal(R) / (4m(m+2)). Throws ConstructionError when the input is
// not Einstein within 1e-8 (the message carries the Ricci anisotropy), when
// kappa <= 0, or when the remainder fails the R1 invariants.
QKDecomposition decompose(const CurvatureTensor& R, const QuaternionicStructure& Q);

// Orthogonal projection onto the intersection of three linear subspaces:
// (a) curvature symmetries (antisymmetry in both slot pairs + pair
// symmetry), (b) the first-Bianchi subspace, (c) the fixed space of the
// four-group average T -> (1/4) sum_{A in {Id,I,J,K}} T(.,.,A.,A.).
// Alternates the three projections until successive iterates differ by less
// than tol in max norm. Throws ConstructionError if max_iters is exceeded.
CurvatureTensor project_hk(const CurvatureTensor& T, const QuaternionicStructure& Q,
                           double tol = 1e-12, int max_iters = 10000);

// Seeded Gaussian rank-4 array passed through project_hk, then rescaled so
// the largest entry magnitude equals scale (scale 0 gives the zero tensor).
CurvatureTensor random_r1(const QuaternionicStructure& Q, std::uint64_t seed, double scale = 1.0);

} // namespace qk
