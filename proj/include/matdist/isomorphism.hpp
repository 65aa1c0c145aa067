#pragma once

// Finite material isomorphisms: P ∈ GL⁺(3) with W(t, x, F·P) = W(s, y, F)
// for all F, searched as damped Gauss-Newton least squares over the nine
// entries of P with multi-start, and accepted only after held-out
// validation.  A refused search is evidence of aging, never proof.

#include <cstdint>
#include <string>
#include <vector>

#include "matdist/distribution.hpp"

namespace matdist {

struct IsoConfig {
  double tau_iso = 1e-6;
  int n_starts = 8;
  int max_iters = 200;
  int n_f = 40;           // training samples per solve
  int n_validation = 40;  // held-out samples for acceptance
  double spread = 0.75;
  double start_sigma = 0.25;  // entry-wise size of start perturbations
  std::uint64_t seed = 7;
};

struct MaterialIsomorphism {
  GridPoint from;
  GridPoint to;
  Mat3 P = Mat3::Identity();
  double residual = 0.0;          // validated relative residual
  double inverse_residual = 0.0;  // residual of P⁻¹ on the reversed pair
  bool converged = false;
};

enum class IsoStatus { Found, NotFound, NonConverged };

const char* iso_status_name(IsoStatus s);

struct IsoSearchResult {
  IsoStatus status = IsoStatus::NotFound;
  MaterialIsomorphism best;  // best candidate; meaningful residual either way
};

/// Relative defect of the candidate on n_validation fresh seeded samples:
/// max over F of |W(t,x,F·P) − W(s,y,F)| / (1 + |W(s,y,F)|).
double membership_test(const ConstitutiveLaw& law, const MaterialIsomorphism& candidate,
                       int n_validation, std::uint64_t seed = 1001, double spread = 0.75);

/// Least-squares search for an isomorphism from → to.  Found requires a
/// validated residual within tau_iso; residuals beyond 10³·tau_iso are
/// NotFound, the band in between is reported NonConverged.
IsoSearchResult find_isomorphism(const ConstitutiveLaw& law, const GridPoint& from,
                                 const GridPoint& to, const IsoConfig& cfg);

/// First-order exponential check for one algebra element: membership
/// residuals of exp(ε·Θ) at ε = 10⁻² and 10⁻³.
struct ExpCheck {
  double residual_eps2 = 0.0;
  double residual_eps3 = 0.0;
};

struct SymmetryAlgebra {
  GridPoint at;
  NullspaceResult algebra;       // isotropy-variant kernel, 9 unknowns
  std::vector<ExpCheck> checks;  // one per basis column
};

/// Linearized symmetry algebra of G(t, x): Θ with Fⁱₗ Θˡⱼ ∂W/∂Fⁱⱼ = 0
/// for all sampled F, with the exponential checks recorded.
SymmetryAlgebra symmetry_algebra(const ConstitutiveLaw& law, const GridPoint& at,
                                 const SamplingConfig& cfg);

struct PairProbe {
  std::size_t index = 0;  // grid index of the target point
  GridPoint to;
  IsoStatus status = IsoStatus::NotFound;
  double residual = 0.0;
};

struct TransitivityEvidence {
  GridPoint anchor;
  std::vector<PairProbe> pairs;
  bool uniform_remodeling_evidence = false;
  std::string criterion;
};

/// Probes the anchor (first grid point) against every other point.  All
/// pairs found is evidence of a uniform remodeling (transitive
/// isomorphism set); per-pair failures are recorded, not thrown.
TransitivityEvidence transitivity_probe(const ConstitutiveLaw& law, const Grid& grid,
                                        const IsoConfig& cfg);

/// exp of a 3×3 matrix (series with scaling and squaring).
Mat3 matrix_exp(const Mat3& a);

}  // namespace matdist
