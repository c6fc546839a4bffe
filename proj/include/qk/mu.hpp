#pragma once

#include "qk/common.hpp"
#include "qk/curvature.hpp"
#include "qk/identities.hpp"
#include "qk/models.hpp"
#include "qk/structure.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace qk {

// Line-search rule for the ascent; fixed so runs are reproducible.
enum class StepRule { armijo };

struct MuOptions {
  int restarts = 16;
  int grid_density = 512;   // sampled points on the unit sphere of R^{4m}
  int sphere_density = 64;  // Fibonacci points on the coefficient 2-sphere
  StepRule step_rule = StepRule::armijo;
  double tol = 1e-9;        // gradient-norm stopping threshold for the ascent
  uint64_t seed = 0;
  int max_iters = 2000;     // ascent iterations per restart
};

// Result of the mu search over pairs (aI+bJ+cK, X).
struct MuReport {
  double mu_hat = 0.0;
  double a = 1.0, b = 0.0, c = 0.0; // coefficient-sphere part of the argmax
  Vector X;                         // unit-vector part of the argmax
  int restarts = 0;
  double grid_oracle_value = 0.0;   // best value over the coarse product grid
  double first_order_residual = 0.0; // projected gradient norm at the argmax
  std::string dichotomy_verdict;    // "zero", "kappa", or "neither"
  double kappa = 0.0;               // copied from the decomposition
};

// The gap function kappa - R1(X, J'X, X, J'X) with J' = aI + bJ + cK.
double phi(const QKDecomposition& dec, const QuaternionicStructure& Q,
           double a, double b, double c, const Vector& X);

// Gradient of f = R1(X, J'X, X, J'X) in (a,b,c) and X, each projected onto
// the tangent space of its unit sphere. Inputs are assumed normalized.
std::pair<Eigen::Vector3d, Vector> grad_f(const QKDecomposition& dec,
                                          const QuaternionicStructure& Q,
                                          double a, double b, double c, const Vector& X);

// Estimates mu = sup f by a brute-force product-grid oracle followed by
// multistart projected gradient ascent with Armijo backtracking. The first
// restart begins at the best grid point, so mu_hat never falls below the
// grid value. Deterministic for a fixed seed; restart i draws from a stream
// derived from seed + i.
MuReport estimate_mu(const QKDecomposition& dec, const QuaternionicStructure& Q,
                     const MuOptions& opts = {});

// Residuals of the variational conditions at a reported maximizer, computed
// in the adapted frame of the rotated structure. The four first-order values
// are maxima of |R1(X,J'X, ., w)| over the frame; the two bounds are maxima
// of 2|lambda_alpha| minus mu_hat resp. kappa (<= 0 when the bound holds).
struct MaximizerConditions {
  double first_order_a = 0.0; // |R1(X,J'X,X,w_beta)|,    beta in {2..2m}
  double first_order_b = 0.0; // |R1(X,J'X,X,J'w_beta)|,  beta in {2..2m}
  double first_order_c = 0.0; // |R1(X,J'X,I'X,w_beta)|,  beta in {3..2m}
  double first_order_d = 0.0; // |R1(X,J'X,I'X,J'w_beta)|, beta in {3..2m}
  double bound_mu = 0.0;
  double bound_kappa = 0.0;
  double key_lhs = 0.0; // (2m-2) * kappa * R1(X,J'X,X,J'X)
  double key_rhs = 0.0; // 4 * sum of lambda_alpha^2
};

// Requires report.first_order_residual <= tol (a genuine critical point);
// otherwise throws.
MaximizerConditions maximizer_conditions(const QKDecomposition& dec,
                                         const QuaternionicStructure& Q,
                                         const MuReport& report, double tol);

// Sweeps rotated structures and quaternionically orthogonal unit pairs,
// recording how far the two curvature inequalities dip below zero (0 when
// they hold). A zero-sample call returns an empty report.
IdentityReport inequality_sweep(const ModelSpace& model, long samples, uint64_t seed);

// The raw sweep minima: (min of 2 R1(X,J'X,Y,J'Y) + kappa,
// min of R(X,Y,X,Y) + R(X,J'Y,X,J'Y)). Returns +infinity pairs for zero samples.
std::pair<double, double> inequality_minima(const ModelSpace& model, long samples, uint64_t seed);

} // namespace qk
