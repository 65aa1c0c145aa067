#include "matdist/classify.hpp"

namespace matdist {

namespace {

const char* kCaveatGrid =
    "verdicts are grid-sampled necessary evidence over the configured grid, not proofs over "
    "the continuum";
const char* kCaveatLie =
    "constant fiber dimension is the computable necessary condition for a smooth structure on "
    "the isomorphism set; off-grid topological obstructions are not decidable numerically";

}  // namespace

ClassificationReport classify(const SweepResult& sweep, const SamplingConfig& cfg,
                              bool allow_incomplete) {
  if (sweep.points.empty()) throw IncompleteSweepError("classify: empty sweep");
  if (!sweep.complete() && !allow_incomplete) {
    for (const PointOutcome& p : sweep.points)
      if (!p.ok())
        throw IncompleteSweepError("classify: sweep has a failed point: " + p.error);
  }

  ClassificationReport r;
  r.complete = sweep.complete();
  r.thresholds_used = cfg;
  r.caveats = {kCaveatGrid, kCaveatLie};

  std::vector<PointSummary> pts;
  for (const PointOutcome& p : sweep.points) {
    if (!p.ok()) continue;
    const FiberReport& f = *p.report;
    pts.push_back(PointSummary{f.point, f.dim_full, f.dim_base, f.dim_state_t,
                               f.dim_state_t_base, f.dim_particle_x, f.dim_particle_x_base,
                               f.dim_isotropy});
  }
  r.per_point = pts;
  if (pts.empty()) throw IncompleteSweepError("classify: no successful points in sweep");

  const auto find_if = [&](auto pred) -> std::optional<GridPoint> {
    for (const PointSummary& p : pts)
      if (pred(p)) return p.point;
    return std::nullopt;
  };

  const int dim0 = pts.front().dim_full;
  const std::optional<GridPoint> dim_breaker =
      find_if([&](const PointSummary& p) { return p.dim_full != dim0; });
  r.dims_constant = !dim_breaker.has_value();

  const std::optional<GridPoint> base_below_4 =
      find_if([](const PointSummary& p) { return p.dim_base != 4; });
  const std::optional<GridPoint> lambda_zero =
      find_if([](const PointSummary& p) { return p.dim_particle_x_base == 0; });
  const std::optional<GridPoint> state_not_3 =
      find_if([](const PointSummary& p) { return p.dim_state_t_base != 3; });

  // Smooth uniform remodeling: base projection spans all four base
  // directions at every sampled point.
  r.smooth_uniform_remodeling.criterion =
      "smooth uniform remodeling <=> dim(base projection of material fiber) = 4 at every "
      "(t,X) [threshold 4]";
  r.smooth_uniform_remodeling.value = !base_below_4.has_value();
  if (r.smooth_uniform_remodeling.value)
    r.smooth_uniform_remodeling.witness = pts.front().point;
  else
    r.smooth_uniform_remodeling.counterexample = base_below_4;

  // Smooth remodeling: constant full dimension and a time direction in
  // every particle-history projection.
  r.smooth_remodeling.criterion =
      "smooth remodeling <=> dim(material fiber) constant over the grid and dim(time "
      "projection of particle-history fiber) = 1 at every (t,X) [thresholds: constant, 1]";
  const std::optional<GridPoint> lambda_not_1 =
      find_if([](const PointSummary& p) { return p.dim_particle_x_base != 1; });
  r.smooth_remodeling.value = r.dims_constant && !lambda_not_1.has_value();
  if (r.smooth_remodeling.value)
    r.smooth_remodeling.witness = pts.front().point;
  else
    r.smooth_remodeling.counterexample = !r.dims_constant ? dim_breaker : lambda_not_1;

  // Smooth aging: constant full dimension and some particle whose
  // history projection loses the time direction.
  r.smooth_aging.criterion =
      "smooth aging <=> dim(material fiber) constant over the grid and dim(time projection "
      "of particle-history fiber) = 0 at some (t,X) [threshold 0]";
  r.smooth_aging.value = r.dims_constant && lambda_zero.has_value();
  if (r.smooth_aging.value)
    r.smooth_aging.witness = lambda_zero;
  else
    r.smooth_aging.counterexample = !r.dims_constant ? dim_breaker : pts.front().point;

  // Uniform aging: smooth aging while every state stays uniform
  // (3-dimensional state projections throughout).
  r.uniform_aging.criterion =
      "uniform aging <=> smooth aging and dim(body projection of state fiber) = 3 at every "
      "(t,X) [threshold 3]";
  r.uniform_aging.value = r.smooth_aging.value && !state_not_3.has_value();
  if (r.uniform_aging.value)
    r.uniform_aging.witness = lambda_zero;
  else if (!r.smooth_aging.value)
    r.uniform_aging.counterexample = r.smooth_aging.counterexample
                                         ? r.smooth_aging.counterexample
                                         : std::optional<GridPoint>(pts.front().point);
  else
    r.uniform_aging.counterexample = state_not_3;

  return r;
}

}  // namespace matdist
