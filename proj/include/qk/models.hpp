#pragma once

#include "qk/common.hpp"
#include "qk/curvature.hpp"
#include "qk/identities.hpp"
#include "qk/structure.hpp"
#include "qk/tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qk {

// A named symmetric-space instance at a point: curvature tensor, compatible
// quaternionic structure, and the scale kappa of the canonical component.
struct ModelSpace {
  std::string name;
  int m = 0;
  CurvatureTensor R;
  QuaternionicStructure Q;
  double kappa = 0.0;
};

// Quaternionic projective space HP^m: R = kappa * R0 with the standard
// structure; the trace-free component vanishes identically.
ModelSpace hp_model(int m, double kappa);

// The complex two-plane Grassmannian Gr_2(C^{m+2}) = SU(m+2)/S(U(2)xU(m)),
// built from Lie-algebra data, with the quaternionic structure extracted
// from the su(2) isotropy factor and the metric rescaled so kappa = 1. Its
// trace-free curvature component is nonzero in every dimension.
ModelSpace grassmannian_model(int m);

// Runs every named identity and inequality check against the model and
// returns one report per check, sorted by name. Residuals are normalized by
// the natural scale of each identity so a single tolerance applies across
// kappa scalings; `seed` drives all sampling.
std::vector<IdentityReport> model_suite(const ModelSpace& model, double tol, uint64_t seed);

// The subset of checks meaningful for a bare admissible tensor (no kappa,
// no parallel-curvature assumption), against the given structure.
std::vector<IdentityReport> tensor_suite(const CurvatureTensor& R1, const QuaternionicStructure& Q,
                                         double tol, uint64_t seed);

// True iff every report's residual is within tol.
bool all_pass(const std::vector<IdentityReport>& reports, double tol);

} // namespace qk
