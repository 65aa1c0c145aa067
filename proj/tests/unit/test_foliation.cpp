#include "doctest.h"

#include "matdist/foliation.hpp"

using namespace matdist;

namespace {

/// Laws used to exercise trace aborts.
ConstitutiveLaw rigid_graded_law() {
  // W = (vec F, sin x): the frame block pins Θ entirely and the position
  // block pins Θⁱ near the origin, so every projected fiber is 0-dim.
  return ConstitutiveLaw::make(
      "rigid", 12, DomainBox{}, [](const auto& t, const auto& x, const auto& F) {
        using S = std::decay_t<decltype(t)>;
        (void)t;
        std::vector<S> out;
        for (int k = 0; k < 9; ++k) out.push_back(F.e[static_cast<std::size_t>(k)]);
        for (int i = 0; i < 3; ++i) out.push_back(sin(x[i]));
        return out;
      });
}

ConstitutiveLaw vanishing_grading_law() {
  // Grading coefficient g = x² − 0.7 crosses zero along the traced
  // direction, so the projected rank genuinely jumps mid-trace.
  return ConstitutiveLaw::make(
      "vanishing_grading", 2, DomainBox{}, [](const auto& t, const auto& x, const auto& F) {
        using S = std::decay_t<decltype(t)>;
        (void)t;
        const S f = 1.0 + (x[1] - 0.7) * x[0];
        return std::vector<S>{f * frobenius_sq(F), det3(F)};
      });
}

double max_step_gap(const TraceBranch& b) {
  double worst = 0.0;
  for (std::size_t i = 1; i < b.points.size(); ++i)
    worst = std::max(worst, (b.points[i] - b.points[i - 1]).norm());
  return worst;
}

}  // namespace

TEST_CASE("homogeneous pair: the time branch keeps the particle fixed") {
  const ConstitutiveLaw law = make_builtin("homog_pair");
  SamplingConfig cfg;
  const GridPoint seed{0.0, Vec3(0.3, -0.2, 0.1)};
  const std::vector<Vec4> dirs = leaf_directions(law, seed, LeafVariant::BodyMaterial, cfg);
  REQUIRE(dirs.size() == 4);  // the base fiber spans all four directions
  CHECK((dirs[0] - Vec4::Unit(0)).norm() < 1e-10);

  const LeafTrace trace =
      trace_leaf(law, seed, LeafVariant::BodyMaterial, {Vec4::Unit(0)}, 30, 0.02, cfg);
  REQUIRE(trace.branches.size() == 1);
  const TraceBranch& b = trace.branches[0];
  CHECK(b.abort == TraceAbort::None);
  REQUIRE(b.points.size() == 31);
  for (const Vec4& p : b.points) {
    CHECK((p.tail<3>() - seed.x).norm() < 1e-12);
    CHECK(max_step_gap(b) <= 2.0 * 0.02);
  }
  CHECK(b.points.back()[0] == doctest::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("aging law: the body leaf is a time slice") {
  const ConstitutiveLaw law = make_builtin("aging_pair");
  SamplingConfig cfg;
  const GridPoint seed{0.5, Vec3(0.1, 0.0, 0.0)};
  const std::vector<Vec4> dirs = leaf_directions(law, seed, LeafVariant::BodyMaterial, cfg);
  REQUIRE(dirs.size() == 3);  // no admissible time direction
  for (const Vec4& d : dirs) CHECK(std::abs(d[0]) < 1e-10);

  const LeafTrace trace = trace_leaf(law, seed, LeafVariant::BodyMaterial, 15, 0.02, cfg);
  for (const TraceBranch& b : trace.branches)
    for (const Vec4& p : b.points) CHECK(std::abs(p[0] - 0.5) < 1e-10);
}

TEST_CASE("graded law: state traces stay on the grading level set") {
  const ConstitutiveLaw law = make_builtin("graded");
  SamplingConfig cfg;
  const GridPoint seed{0.0, Vec3(0.5, 0.0, 0.0)};
  const int steps = 50;
  const double h = 0.01;
  const LeafTrace trace = trace_leaf(law, seed, LeafVariant::StateT, steps, h, cfg);
  REQUIRE(trace.branches.size() == 4);  // ± two slice directions
  for (const TraceBranch& b : trace.branches) {
    CHECK(b.abort == TraceAbort::None);
    CHECK(b.points.size() == static_cast<std::size_t>(steps) + 1);
    for (std::size_t i = 0; i < b.points.size(); ++i) {
      CHECK(std::abs(b.points[i][1] - 0.5) < 1e-4 * steps * h);
      CHECK(b.points[i][0] == 0.0);  // state traces never move in time
      CHECK(b.dims[i] == 2);
    }
  }
}

TEST_CASE("pure-symmetry fibers project to nothing") {
  // Isotropy survives but every base direction is pinned: the full fiber
  // is nonzero while its projection must be empty, not noise-rank.
  const ConstitutiveLaw law = ConstitutiveLaw::make(
      "pinned_skew", 6, DomainBox{}, [](const auto& t, const auto& x, const auto& F) {
        using S = std::decay_t<decltype(t)>;
        return std::vector<S>{frobenius_sq(F), det3(F), sin(x[0]), sin(x[1]), sin(x[2]), t};
      });
  SamplingConfig cfg;
  const GridPoint seed{0.1, Vec3(0.2, 0.0, 0.0)};
  const FiberReport f = fiber_report(law, seed.t, seed.x, cfg);
  CHECK(f.dim_full == 3);  // skew rotations remain admissible
  CHECK(f.dim_base == 0);
  CHECK(projected_fiber(law, seed, LeafVariant::BodyMaterial, cfg).cols() == 0);
  CHECK_THROWS_AS(
      (void)trace_leaf(law, seed, LeafVariant::BodyMaterial, 5, 0.01, cfg), FoliationError);
}

TEST_CASE("zero-dimensional projected fiber refuses to trace") {
  const ConstitutiveLaw law = rigid_graded_law();
  SamplingConfig cfg;
  const GridPoint seed{0.0, Vec3(0.1, 0.0, 0.0)};
  CHECK(projected_fiber(law, seed, LeafVariant::StateT, cfg).cols() == 0);
  CHECK_THROWS_AS(
      (void)trace_leaf(law, seed, LeafVariant::StateT, 10, 0.01, cfg), FoliationError);
}

TEST_CASE("singular crossing aborts the branch and keeps the prefix") {
  const ConstitutiveLaw law = vanishing_grading_law();
  SamplingConfig cfg;
  // x1 = 0 puts the seed on the invariant axis; the grading coefficient
  // vanishes 0.2 ahead along +x2, where the projected rank jumps 2 -> 3.
  const GridPoint seed{0.0, Vec3(0.0, 0.5, 0.0)};
  const LeafTrace trace =
      trace_leaf(law, seed, LeafVariant::StateT, {Vec4::Unit(2)}, 40, 0.01, cfg);
  REQUIRE(trace.branches.size() == 1);
  const TraceBranch& b = trace.branches[0];
  CHECK(b.abort == TraceAbort::SingularCrossing);
  CHECK(b.abort_detail.find("2 to 3") != std::string::npos);
  CHECK(b.points.size() > 10);
  CHECK(b.points.size() < 41);
  for (const int d : b.dims) CHECK(d == 2);  // recorded points stay on the stratum
}

TEST_CASE("leaving the domain box aborts with DomainExit") {
  const ConstitutiveLaw law = make_builtin("graded");
  SamplingConfig cfg;
  const GridPoint seed{0.0, Vec3(0.5, 2.9, 0.0)};  // box ends at x2 = 3
  const LeafTrace trace =
      trace_leaf(law, seed, LeafVariant::StateT, {Vec4::Unit(2)}, 40, 0.01, cfg);
  const TraceBranch& b = trace.branches[0];
  CHECK(b.abort == TraceAbort::DomainExit);
  CHECK(b.points.size() < 15);
  CHECK(b.points.size() > 5);
}

TEST_CASE("radial grading: traces follow the circular level set") {
  const ConstitutiveLaw law = make_builtin("graded_radial");
  SamplingConfig cfg;
  const GridPoint seed{0.0, Vec3(0.5, 0.0, 0.0)};
  const LeafTrace trace =
      trace_leaf(law, seed, LeafVariant::StateT, {Vec4::Unit(2)}, 40, 0.02, cfg);
  const TraceBranch& b = trace.branches[0];
  REQUIRE(b.abort == TraceAbort::None);
  REQUIRE(b.points.size() == 41);
  CHECK(max_step_gap(b) <= 2.0 * 0.02);
  for (const Vec4& p : b.points) {
    const double r = std::hypot(p[1], p[2]);
    CHECK(std::abs(r - 0.5) < 1e-5);
  }
  // The trace actually went around the circle (1.6 rad), not along a
  // chord: x1 falls from 0.5 to about 0.5*cos(1.6).
  CHECK(b.points.back()[1] < 0.05);
  CHECK(std::abs(b.points.back()[2] - 0.5 * std::sin(1.6)) < 1e-3);
}

TEST_CASE("freeze-time consistency on the graded law") {
  const ConstitutiveLaw law = make_builtin("graded");
  SamplingConfig cfg;
  const double h = 0.01;
  const FreezeTimeReport r =
      freeze_time_check(law, GridPoint{0.0, Vec3(0.5, 0.0, 0.0)}, 40, h, cfg);
  CHECK(r.body_dim == 3);
  CHECK(r.state_dim == 2);
  CHECK(r.n_state > 1);
  CHECK(r.hausdorff <= 5.0 * h);
}

TEST_CASE("freeze-time consistency on the homogeneous pair") {
  const ConstitutiveLaw law = make_builtin("homog_pair");
  SamplingConfig cfg;
  const double h = 0.01;
  const FreezeTimeReport r =
      freeze_time_check(law, GridPoint{0.2, Vec3(0.1, 0.0, 0.0)}, 30, h, cfg);
  CHECK(r.body_dim == 4);
  CHECK(r.state_dim == 3);
  CHECK(r.hausdorff <= 5.0 * h);
}

TEST_CASE("freeze-time check degenerates to the seed for rigid laws") {
  const ConstitutiveLaw law = rigid_graded_law();
  SamplingConfig cfg;
  const FreezeTimeReport r =
      freeze_time_check(law, GridPoint{0.0, Vec3(0.1, 0.0, 0.0)}, 10, 0.01, cfg);
  CHECK(r.state_dim == 0);
  CHECK(r.n_state == 1);
  CHECK(r.hausdorff == 0.0);
}
