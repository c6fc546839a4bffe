#pragma once

#include "qk/common.hpp"
#include "qk/tensor.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qk {

// The triple (I,J,K) of orthogonal anti-involutions on R^{4m} satisfying the
// quaternion relations I^2 = J^2 = K^2 = IJK = -Id. The unit combinations
// aI + bJ + cK (a^2+b^2+c^2 = 1) form the 2-sphere of compatible complex
// structures that the optimizer searches.
struct QuaternionicStructure {
  int m = 0; // quaternionic dimension; ambient dimension is 4m
  Matrix I, J, K;

  Index dim() const { return 4 * static_cast<Index>(m); }
  const Matrix& op(int a) const { return a == 0 ? I : (a == 1 ? J : K); }
};

// Standard structure on R^{4m} identified with the m-fold quaternion space,
// coordinates ordered (1,i,j,k) per quaternionic coordinate; I, J, K act by
// left multiplication by i, j, k. Entries are exactly -1, 0, 1.
// Throws std::invalid_argument for m < 2 (ambient dimension must be >= 8).
QuaternionicStructure standard_structure(int m);

// Rotated triple with middle element J' = aI + bJ + cK. The completion is
// deterministic: u = (a,b,c); v = normalize(u x e_z) when |u x e_z| > 1e-6,
// else v = (1,0,0) re-orthonormalized against u; w = v x u. Then I', J', K'
// are the combinations of (I,J,K) with coefficient vectors v, u, w, which
// makes I'J' = K' and I'J'K' = -Id hold by the quaternion product rule.
// The input must satisfy |a^2+b^2+c^2 - 1| <= 1e-12 (it is renormalized
// internally); a zero vector is rejected.
QuaternionicStructure rotate_frame(const QuaternionicStructure& Q, double a, double b, double c);

// Max-norm residual over the defining relations: I^2+Id, J^2+Id, K^2+Id,
// IJK+Id, and orthogonality A^T A - Id for each of the three operators.
double structure_residual(const QuaternionicStructure& Q);

class Rng;

// Unit pair (X, Y) with Y orthogonal to X, IX, JX, KX, drawn from the given
// stream: X is a uniform direction and Y a uniform direction within the
// orthogonal complement of the quaternionic span of X.
std::pair<Vector, Vector> sample_q_orthogonal_pair(const QuaternionicStructure& Q, Rng& rng);
std::pair<Vector, Vector> sample_q_orthogonal_pair(const QuaternionicStructure& Q, std::uint64_t seed);

// Orthonormal vectors w_1, ..., w_{2m} with w_1 = X and w_2 = IX such that
// {w_alpha, J w_alpha} is an orthonormal basis of R^{4m} and the 2-form
// omega(Z,W) = R1(X,JX,Z,W) is diagonal on the pairs: for alpha != beta in
// {3,...,2m}, R1(X,JX,w_alpha,w_beta) = R1(X,JX,w_alpha,J w_beta) = 0, and
// R1(X,JX,w_alpha,J w_alpha) = lambda[alpha-3].
struct AdaptedFrame {
  std::vector<Vector> w;       // size 2m; w[0] = X, w[1] = IX
  std::vector<double> lambda;  // size 2m-2, for w[2..2m-1], sorted descending
};

// Builds the adapted frame by diagonalizing the symmetric operator J * Omega
// (Omega the matrix of omega) restricted to the orthogonal complement H of
// span{X, IX, JX, KX}. Requires |X| = 1 within 1e-8 and R1 invariant under
// the paired action of I, J, K (residual < 1e-8); throws otherwise.
// Eigenvalues are sorted descending; ties are broken by lexicographic
// comparison of the (sign-normalized) eigenvector entries.
AdaptedFrame adapted_frame(const QuaternionicStructure& Q, const Vector& X, const CurvatureTensor& R1);

} // namespace qk
