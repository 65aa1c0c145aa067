#include "matdist/foliation.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace matdist {

namespace {

constexpr double kDirectionFloor = 1e-8;

struct FiberQuery {
  MatX span;  // 4 × dim, orthonormal
  int dim = 0;
};

FiberQuery query_fiber(const ConstitutiveLaw& law, const GridPoint& at, LeafVariant variant,
                       const SamplingConfig& cfg) {
  SamplingConfig lean = cfg;
  lean.n_validation = 1;  // tracing needs ranks, not held-out audits

  const KernelVariant kv =
      variant == LeafVariant::BodyMaterial ? KernelVariant::Full : KernelVariant::StateT;
  const KernelProblem problem = make_problem(kv, at, lean);
  const NullspaceResult null = solve_kernel(law, problem, lean);

  const int rows = variant == LeafVariant::BodyMaterial ? 4 : 3;
  FiberQuery q;
  if (null.dim == 0) return q;

  const MatX block = null.basis.topRows(rows);
  Eigen::JacobiSVD<MatX> svd(block, Eigen::ComputeThinU);
  const VecX sigma = svd.singularValues();
  // Absolute threshold: the basis is orthonormal, so a projection row of
  // pure noise must not be promoted to a direction by its own scale.
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > cfg.tau_rank) ++rank;
  q.dim = rank;
  q.span = MatX::Zero(4, rank);
  const int row0 = variant == LeafVariant::BodyMaterial ? 0 : 1;
  q.span.block(row0, 0, rows, rank) = svd.matrixU().leftCols(rank);
  return q;
}

Vec4 project(const FiberQuery& fiber, const Vec4& v) {
  if (fiber.dim == 0) return Vec4::Zero();
  return fiber.span * (fiber.span.transpose() * v);
}

void fix_sign(Vec4& v) {
  int arg = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0.0) v = -v;
}

bool in_domain(const ConstitutiveLaw& law, const Vec4& q) {
  return law.domain().contains(q[0], q.tail<3>());
}

GridPoint to_point(const Vec4& q) { return GridPoint{q[0], q.tail<3>()}; }

}  // namespace

const char* leaf_variant_name(LeafVariant v) {
  return v == LeafVariant::BodyMaterial ? "body_material" : "state_t";
}

const char* trace_abort_name(TraceAbort a) {
  switch (a) {
    case TraceAbort::None: return "none";
    case TraceAbort::SingularCrossing: return "singular_crossing";
    case TraceAbort::DomainExit: return "domain_exit";
    case TraceAbort::DirectionLost: return "direction_lost";
  }
  return "?";
}

MatX projected_fiber(const ConstitutiveLaw& law, const GridPoint& at, LeafVariant variant,
                     const SamplingConfig& cfg) {
  return query_fiber(law, at, variant, cfg).span;
}

std::vector<Vec4> leaf_directions(const ConstitutiveLaw& law, const GridPoint& seed,
                                  LeafVariant variant, const SamplingConfig& cfg) {
  const FiberQuery fiber = query_fiber(law, seed, variant, cfg);
  std::vector<Vec4> dirs;
  if (fiber.dim == 0) return dirs;

  // Canonical basis of the span: project the coordinate axes t, x¹, x²,
  // x³ in that order and Gram-Schmidt the survivors.  The result depends
  // only on the subspace, so matching fibers of different variants get
  // matching directions, and processing t first keeps the remaining
  // directions exactly inside the frozen-time slice.
  for (int axis = 0; axis < 4 && static_cast<int>(dirs.size()) < fiber.dim; ++axis) {
    Vec4 v = project(fiber, Vec4::Unit(axis));
    for (const Vec4& d : dirs) v -= d.dot(v) * d;
    if (v.norm() > kDirectionFloor) {
      v.normalize();
      fix_sign(v);
      dirs.push_back(v);
    }
  }
  // Degenerate spans can hide from every axis projection; complete from
  // the span itself.
  for (int c = 0; c < fiber.dim && static_cast<int>(dirs.size()) < fiber.dim; ++c) {
    Vec4 v = fiber.span.col(c);
    for (const Vec4& d : dirs) v -= d.dot(v) * d;
    if (v.norm() > kDirectionFloor) {
      v.normalize();
      fix_sign(v);
      dirs.push_back(v);
    }
  }
  return dirs;
}

LeafTrace trace_leaf(const ConstitutiveLaw& law, const GridPoint& seed, LeafVariant variant,
                     const std::vector<Vec4>& directions, int steps, double step_size,
                     const SamplingConfig& cfg) {
  LeafTrace trace;
  trace.seed = seed;
  trace.variant = variant;
  trace.step_size = step_size;
  trace.steps = steps;

  const Vec4 q0(seed.t, seed.x[0], seed.x[1], seed.x[2]);
  if (!in_domain(law, q0)) throw DomainError("trace_leaf: seed outside the law's domain box");
  const FiberQuery seed_fiber = query_fiber(law, seed, variant, cfg);
  if (seed_fiber.dim == 0)
    throw FoliationError("trace_leaf: projected fiber at the seed is zero-dimensional");

  for (const Vec4& direction : directions) {
    TraceBranch branch;
    branch.direction = direction;
    branch.points.push_back(q0);
    branch.dims.push_back(seed_fiber.dim);

    Vec4 d_ref = project(seed_fiber, direction);
    if (d_ref.norm() < kDirectionFloor) {
      branch.abort = TraceAbort::DirectionLost;
      branch.abort_detail = "requested direction has no component in the fiber at the seed";
      trace.branches.push_back(branch);
      continue;
    }
    d_ref.normalize();

    Vec4 q = q0;
    for (int s = 0; s < steps; ++s) {
      // Field within the step: fiber projection of the carried direction.
      bool lost = false, exited = false;
      const auto field = [&](const Vec4& at) -> Vec4 {
        if (!in_domain(law, at)) {
          exited = true;
          return Vec4::Zero();
        }
        const FiberQuery f = query_fiber(law, to_point(at), variant, cfg);
        Vec4 w = project(f, d_ref);
        if (w.norm() < kDirectionFloor) {
          lost = true;
          return Vec4::Zero();
        }
        return w.normalized();
      };

      const double h = step_size;
      const Vec4 k1 = d_ref;  // field(q) by construction
      const Vec4 k2 = field(q + 0.5 * h * k1);
      const Vec4 k3 = field(q + 0.5 * h * k2);
      const Vec4 k4 = field(q + h * k3);
      if (exited) {
        branch.abort = TraceAbort::DomainExit;
        branch.abort_detail = "RK4 stage left the domain box";
        break;
      }
      if (lost) {
        branch.abort = TraceAbort::DirectionLost;
        branch.abort_detail = "carried direction vanished in a mid-step fiber";
        break;
      }
      const Vec4 q_next = q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!in_domain(law, q_next)) {
        branch.abort = TraceAbort::DomainExit;
        branch.abort_detail = "step target left the domain box";
        break;
      }

      const FiberQuery next_fiber = query_fiber(law, to_point(q_next), variant, cfg);
      if (next_fiber.dim != seed_fiber.dim) {
        branch.abort = TraceAbort::SingularCrossing;
        branch.abort_detail = "projected dimension changed from " +
                              std::to_string(seed_fiber.dim) + " to " +
                              std::to_string(next_fiber.dim);
        break;
      }
      Vec4 d_next = project(next_fiber, d_ref);
      if (d_next.norm() < kDirectionFloor) {
        branch.abort = TraceAbort::DirectionLost;
        branch.abort_detail = "carried direction vanished after the step";
        break;
      }
      d_ref = d_next.normalized();
      q = q_next;
      branch.points.push_back(q);
      branch.dims.push_back(next_fiber.dim);
    }
    trace.branches.push_back(branch);
  }
  return trace;
}

LeafTrace trace_leaf(const ConstitutiveLaw& law, const GridPoint& seed, LeafVariant variant,
                     int steps, double step_size, const SamplingConfig& cfg) {
  const std::vector<Vec4> canonical = leaf_directions(law, seed, variant, cfg);
  std::vector<Vec4> both;
  for (const Vec4& d : canonical) {
    both.push_back(d);
    both.push_back(-d);
  }
  return trace_leaf(law, seed, variant, both, steps, step_size, cfg);
}

namespace {

std::vector<Vec4> trace_cloud(const ConstitutiveLaw& law, const GridPoint& seed,
                              LeafVariant variant, int steps, double step_size,
                              const SamplingConfig& cfg) {
  const Vec4 q0(seed.t, seed.x[0], seed.x[1], seed.x[2]);
  try {
    const LeafTrace trace = trace_leaf(law, seed, variant, steps, step_size, cfg);
    std::vector<Vec4> cloud{q0};
    for (const TraceBranch& b : trace.branches)
      for (std::size_t i = 1; i < b.points.size(); ++i) cloud.push_back(b.points[i]);
    return cloud;
  } catch (const FoliationError&) {
    return {q0};  // zero-dimensional leaf: the point itself
  }
}

double hausdorff(const std::vector<Vec4>& a, const std::vector<Vec4>& b) {
  const auto one_sided = [](const std::vector<Vec4>& from, const std::vector<Vec4>& to) {
    double worst = 0.0;
    for (const Vec4& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec4& q : to) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace

FreezeTimeReport freeze_time_check(const ConstitutiveLaw& law, const GridPoint& seed,
                                   int steps, double step_size, const SamplingConfig& cfg) {
  FreezeTimeReport report;
  report.seed = seed;

  const std::vector<Vec4> body =
      trace_cloud(law, seed, LeafVariant::BodyMaterial, steps, step_size, cfg);
  std::vector<Vec4> body_slice;
  for (const Vec4& p : body)
    if (std::abs(p[0] - seed.t) <= step_size / 2.0) body_slice.push_back(p);

  const std::vector<Vec4> state =
      trace_cloud(law, seed, LeafVariant::StateT, steps, step_size, cfg);

  report.n_body_slice = body_slice.size();
  report.n_state = state.size();
  report.body_dim = query_fiber(law, seed, LeafVariant::BodyMaterial, cfg).dim;
  report.state_dim = query_fiber(law, seed, LeafVariant::StateT, cfg).dim;
  report.hausdorff = hausdorff(body_slice, state);
  return report;
}

}  // namespace matdist
