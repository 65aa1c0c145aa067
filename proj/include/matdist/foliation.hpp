#pragma once

// Leaf tracing: RK4 flow along the orthonormalized base projection of a
// distribution fiber, one branch per seed direction, with the direction
// carried by continuity.  The foliation is singular, so a dimension
// change along a trace aborts that branch instead of re-dimensioning.

#include <string>
#include <vector>

#include "matdist/distribution.hpp"

namespace matdist {

using Vec4 = Eigen::Vector4d;  // (t, x¹, x², x³)

enum class LeafVariant { BodyMaterial, StateT };

const char* leaf_variant_name(LeafVariant v);

enum class TraceAbort { None, SingularCrossing, DomainExit, DirectionLost };

const char* trace_abort_name(TraceAbort a);

struct TraceBranch {
  Vec4 direction = Vec4::Zero();  // requested initial direction
  std::vector<Vec4> points;       // seed first
  std::vector<int> dims;          // projected rank at each point
  TraceAbort abort = TraceAbort::None;
  std::string abort_detail;
};

struct LeafTrace {
  GridPoint seed;
  LeafVariant variant = LeafVariant::BodyMaterial;
  double step_size = 0.0;
  int steps = 0;
  std::vector<TraceBranch> branches;
};

/// Orthonormal basis of the projected fiber at a point, as columns in
/// (t, x) coordinates.  For StateT the t row is identically zero.
MatX projected_fiber(const ConstitutiveLaw& law, const GridPoint& at, LeafVariant variant,
                     const SamplingConfig& cfg);

/// Canonical direction set at the seed: the time-aligned component of
/// the fiber (when present) followed by an orthonormal basis of its
/// slice part, signs fixed deterministically.
std::vector<Vec4> leaf_directions(const ConstitutiveLaw& law, const GridPoint& seed,
                                  LeafVariant variant, const SamplingConfig& cfg);

/// Traces one branch per direction.  Throws FoliationError when the
/// projected fiber at the seed is zero-dimensional.
LeafTrace trace_leaf(const ConstitutiveLaw& law, const GridPoint& seed, LeafVariant variant,
                     const std::vector<Vec4>& directions, int steps, double step_size,
                     const SamplingConfig& cfg);

/// Default directions: ± every canonical direction.
LeafTrace trace_leaf(const ConstitutiveLaw& law, const GridPoint& seed, LeafVariant variant,
                     int steps, double step_size, const SamplingConfig& cfg);

struct FreezeTimeReport {
  GridPoint seed;
  double hausdorff = 0.0;      // between the two slice clouds
  std::size_t n_body_slice = 0;
  std::size_t n_state = 0;
  int body_dim = 0;
  int state_dim = 0;
};

/// Freezing time inside the body-material leaf must recover the state
/// leaf: traces both, restricts the body cloud to |t − t₀| ≤ step/2 and
/// reports the Hausdorff distance between the clouds.
FreezeTimeReport freeze_time_check(const ConstitutiveLaw& law, const GridPoint& seed,
                                   int steps, double step_size, const SamplingConfig& cfg);

}  // namespace matdist
