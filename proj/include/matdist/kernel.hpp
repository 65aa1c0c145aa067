#pragma once

// Sampled realization of the kernel equation
//   λ ∂W/∂t + Θⁱ ∂W/∂xⁱ + Fⁱₗ Θˡⱼ ∂W/∂Fⁱⱼ = 0   for all F in GL⁺(3):
// each F sample contributes one m-row block of a stacked linear system
// whose rank-revealing nullspace is the distribution fiber at (t, x).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matdist/law.hpp"

namespace matdist {

enum class KernelVariant { Full, StateT, ParticleX, Isotropy };

const char* variant_name(KernelVariant v);

/// Unknown count per variant: Full 13 (λ, Θⁱ, Θˡⱼ), StateT 12 (λ ≡ 0),
/// ParticleX 10 (Θⁱ ≡ 0), Isotropy 9 (λ ≡ 0, Θⁱ ≡ 0).
int unknown_dim(KernelVariant v);

struct GridPoint {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
};

struct SamplingConfig {
  int n_f = 40;
  std::uint64_t seed = 7;
  double spread = 0.75;
  double tau_rank = 1e-8;
  double tau_accept = 1e-6;
  int n_validation = 0;  // 0 → same as n_f
  bool retry_on_unstable = true;

  int validation_count() const { return n_validation > 0 ? n_validation : n_f; }
};

struct KernelProblem {
  KernelVariant variant = KernelVariant::Full;
  GridPoint point;
  std::vector<Mat3> f_samples;

  int unknowns() const { return unknown_dim(variant); }
};

/// Deterministic GL⁺(3) samples: identity first, then exp(spread·S) with
/// seeded Gaussian S.
std::vector<Mat3> sample_gl3(int n, std::uint64_t seed, double spread);

/// Seed for the held-out validation stream, decorrelated from `seed`.
std::uint64_t validation_seed(std::uint64_t seed);

/// Well-formed problem at a point (checks the sample determinant floor).
KernelProblem make_problem(KernelVariant variant, const GridPoint& point,
                           const SamplingConfig& cfg);

/// Stacked system: one m-row block per F sample, columns ordered
/// [λ | Θ¹ Θ² Θ³ | Θˡⱼ row-major] with variant-dependent deletion.
MatX assemble(const ConstitutiveLaw& law, const KernelProblem& problem);

struct NullspaceResult {
  MatX basis;              // unknowns × dim, orthonormal columns
  int dim = 0;
  VecX singular_values;    // full spectrum of the stacked system
  double sigma_max = 0.0;
  double validation_residual = 0.0;  // relative to sigma_max; 0 when not validated
  bool validated = false;
};

/// Rank-revealing nullspace.  dim counts singular values at or below
/// tau_rank·σ_max; throws RankUnstableError when any singular value sits
/// within a factor 10 of that threshold on either side.  When a
/// validator is supplied its residual is recorded.
NullspaceResult nullspace(const MatX& a, double tau_rank,
                          const std::function<double(const MatX&)>& validator = {});

/// Assemble + nullspace + held-out validation for a law at a point.
/// Fresh samples come from validation_seed(cfg.seed); the recorded
/// residual is max over fresh blocks and basis columns, relative to the
/// training σ_max.
NullspaceResult solve_kernel(const ConstitutiveLaw& law, const KernelProblem& problem,
                             const SamplingConfig& cfg);

}  // namespace matdist
