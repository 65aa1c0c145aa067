#pragma once

// Material distribution fibers and their base projections on a grid of
// (t, x) points.  Projecting a fiber to the base keeps the (λ, Θⁱ)
// coordinates; the projected rank is the leaf dimension the
// classification criteria consume.

#include <optional>
#include <string>
#include <vector>

#include "matdist/kernel.hpp"

namespace matdist {

struct FiberReport {
  GridPoint point;

  int dim_full = 0;        // fiber of the material distribution
  int dim_base = 0;        // rank of its (λ, Θⁱ) projection, ≤ 4
  int proj_kernel_dim = 0; // dim_full − dim_base, fiber of the projection

  int dim_state_t = 0;       // state-t fiber
  int dim_state_t_base = 0;  // rank of its Θⁱ projection, ≤ 3
  int dim_particle_x = 0;       // particle-x fiber
  int dim_particle_x_base = 0;  // rank of its λ projection, 0 or 1
  int dim_isotropy = 0;  // linearized symmetry algebra

  NullspaceResult full;
  NullspaceResult state_t;
  NullspaceResult particle_x;
  NullspaceResult isotropy;
};

/// Rank of the leading `rows` rows of a basis, with the same relative
/// threshold as the nullspace itself.
int projected_rank(const MatX& basis, int rows, double tau_rank);

/// All four kernel nullspaces at one point, sharing F samples.
/// Throws RankUnstableError naming the offending variant.
FiberReport fiber_report(const ConstitutiveLaw& law, double t, const Vec3& x,
                         const SamplingConfig& cfg);

struct Grid {
  std::vector<double> t_values;
  std::vector<double> x1_values;
  std::vector<double> x2_values{0.0};
  std::vector<double> x3_values{0.0};

  static std::vector<double> linspace(double lo, double hi, int count);

  std::size_t size() const {
    return t_values.size() * x1_values.size() * x2_values.size() * x3_values.size();
  }
  /// Row-major point order: t outermost, then x¹, x², x³.
  GridPoint point(std::size_t index) const;
};

struct PointOutcome {
  GridPoint point;
  std::optional<FiberReport> report;
  std::string error;  // set when the point failed

  bool ok() const { return report.has_value(); }
};

struct SweepResult {
  Grid grid;
  std::vector<PointOutcome> points;

  bool complete() const;
};

/// One fiber report per grid point; failures are flagged per point and
/// never abort the sweep.  Results are independent of `jobs`.
SweepResult grid_sweep(const ConstitutiveLaw& law, const Grid& grid,
                       const SamplingConfig& cfg, int jobs = 1);

}  // namespace matdist
