#pragma once

// Global verdicts from the fiber-dimension criteria: a sweep presents a
// smooth uniform remodeling iff the base projection has dimension 4
// everywhere; constant full dimension plus the particle-history time
// projection (1 everywhere / 0 somewhere) separates smooth remodeling
// from smooth aging; uniform aging additionally needs state projections
// of dimension 3 throughout.

#include <optional>
#include <string>
#include <vector>

#include "matdist/distribution.hpp"

namespace matdist {

struct Verdict {
  bool value = false;
  std::optional<GridPoint> witness;         // present when value is true
  std::optional<GridPoint> counterexample;  // present when value is false
  std::string criterion;                    // self-documenting predicate
};

struct PointSummary {
  GridPoint point;
  int dim_full = 0;
  int dim_base = 0;
  int dim_state_t = 0;
  int dim_state_t_base = 0;
  int dim_particle_x = 0;
  int dim_particle_x_base = 0;
  int dim_isotropy = 0;
};

struct ClassificationReport {
  std::vector<PointSummary> per_point;
  Verdict smooth_uniform_remodeling;
  Verdict smooth_remodeling;
  Verdict smooth_aging;
  Verdict uniform_aging;
  bool dims_constant = false;
  bool complete = true;
  SamplingConfig thresholds_used;
  std::vector<std::string> caveats;
};

/// Pure function of the sweep.  Throws IncompleteSweepError when any
/// point failed, unless allow_incomplete is set (the partial report is
/// then marked incomplete).
ClassificationReport classify(const SweepResult& sweep, const SamplingConfig& cfg,
                              bool allow_incomplete = false);

}  // namespace matdist
