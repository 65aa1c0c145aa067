#include "doctest.h"

#include "matdist/distribution.hpp"
#include "matdist/report_io.hpp"

using namespace matdist;

namespace {

/// Analytic state-T fiber of the graded pair at x1 (12 unknowns:
/// Θ¹..Θ³ then Θ row-major): the det component pins tr Θ = 0, the graded
/// component then forces Θ¹ = 0 and sym Θ = 0 wherever f' ≠ 0.
MatX graded_state_oracle(double x1) {
  const bool flat = x1 == 0.0;
  const int dim = flat ? 6 : 5;
  MatX basis = MatX::Zero(12, dim);
  int c = 0;
  if (flat) basis(0, c++) = 1.0;  // Θ¹ only free where f' vanishes
  basis(1, c++) = 1.0;
  basis(2, c++) = 1.0;
  const int theta0 = 3;
  const int skew[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    basis(theta0 + 3 * skew[k][0] + skew[k][1], c) = 1.0;
    basis(theta0 + 3 * skew[k][1] + skew[k][0], c) = -1.0;
    ++c;
  }
  return basis;
}

double subspace_gap(const MatX& a, const MatX& b) {
  const auto projector = [](const MatX& m) {
    Eigen::JacobiSVD<MatX> svd(m, Eigen::ComputeThinU);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-12 * svd.singularValues()[0]) ++rank;
    const MatX u = svd.matrixU().leftCols(rank);
    return MatX(u * u.transpose());
  };
  return (projector(a) - projector(b)).norm();
}

/// λ-flag recomputed from the Full basis: restrict to combinations with
/// zero Θⁱ rows and test whether λ survives.
int lambda_flag_from_full(const FiberReport& f, double tol = 1e-8) {
  const MatX& basis = f.full.basis;
  if (basis.cols() == 0) return 0;
  const MatX theta_rows = basis.middleRows(1, 3);
  Eigen::JacobiSVD<MatX> svd(theta_rows, Eigen::ComputeFullV);
  const VecX sigma = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > tol * std::max(1.0, sigma[0])) ++rank;
  const Eigen::Index null_dim = basis.cols() - rank;
  if (null_dim == 0) return 0;
  const MatX combos = svd.matrixV().rightCols(null_dim);
  const MatX lambda_row = basis.row(0) * combos;
  return lambda_row.cwiseAbs().maxCoeff() > tol ? 1 : 0;
}

}  // namespace

TEST_CASE("fiber report of the homogeneous pair") {
  const ConstitutiveLaw law = make_builtin("homog_pair");
  SamplingConfig cfg;
  const FiberReport f = fiber_report(law, 0.3, Vec3(0.5, -0.2, 0.1), cfg);
  CHECK(f.dim_full == 7);
  CHECK(f.dim_base == 4);
  CHECK(f.dim_state_t_base == 3);
  CHECK(f.dim_particle_x_base == 1);
  CHECK(f.dim_isotropy == 3);
  CHECK(f.dim_full == f.dim_base + f.proj_kernel_dim);
}

TEST_CASE("fiber report of the aging pair shows the lambda obstruction") {
  const ConstitutiveLaw law = make_builtin("aging_pair");
  SamplingConfig cfg;
  const FiberReport f = fiber_report(law, 0.5, Vec3(0.2, 0.0, 0.0), cfg);
  CHECK(f.dim_full == 6);
  CHECK(f.dim_base == 3);
  CHECK(f.dim_particle_x_base == 0);
  CHECK(f.dim_state_t_base == 3);

  // Brute-force cross-check with a five-fold sample count.
  SamplingConfig heavy = cfg;
  heavy.n_f = 200;
  const FiberReport g = fiber_report(law, 0.5, Vec3(0.2, 0.0, 0.0), heavy);
  CHECK(g.dim_full == f.dim_full);
  CHECK(g.dim_particle_x_base == 0);
}

TEST_CASE("graded sweep dims against the symbolic constraint oracle") {
  const ConstitutiveLaw law = make_builtin("graded");
  SamplingConfig cfg;
  Grid grid;
  grid.t_values = {0.0};
  grid.x1_values = {-1.0, 0.0, 1.0};
  const SweepResult sweep = grid_sweep(law, grid, cfg);
  REQUIRE(sweep.complete());

  const int expect_state_base[3] = {2, 3, 2};
  for (int i = 0; i < 3; ++i) {
    const FiberReport& f = *sweep.points[static_cast<std::size_t>(i)].report;
    CAPTURE(f.point.x[0]);
    CHECK(f.dim_state_t_base == expect_state_base[i]);
    CHECK(subspace_gap(f.state_t.basis, graded_state_oracle(f.point.x[0])) < 1e-8);
  }
}

TEST_CASE("rank-nullity bookkeeping holds exactly across sweeps") {
  SamplingConfig cfg;
  const Grid grid{Grid::linspace(0.0, 1.0, 3), Grid::linspace(-1.0, 1.0, 3)};
  for (const char* name : {"homog_pair", "graded", "aging_pair", "implant"}) {
    const SweepResult sweep = grid_sweep(make_builtin(name), grid, cfg);
    REQUIRE(sweep.complete());
    for (const PointOutcome& p : sweep.points) {
      CHECK(p.report->dim_full == p.report->dim_base + p.report->proj_kernel_dim);
      CHECK(p.report->dim_base <= 4);
      CHECK(p.report->dim_state_t_base <= 3);
      CHECK((p.report->dim_particle_x_base == 0 || p.report->dim_particle_x_base == 1));
      // Sub-distribution solutions extend by zero into the full kernel,
      // so their base projections embed.
      CHECK(p.report->dim_base >= p.report->dim_state_t_base);
      CHECK(p.report->dim_base >= p.report->dim_particle_x_base);
      CHECK(p.report->dim_full >= p.report->dim_isotropy);
    }
  }
}

TEST_CASE("particle-x lambda rank agrees with the Full-basis cross-check") {
  SamplingConfig cfg;
  for (const char* name : {"homog_isotropic", "homog_pair", "graded", "aging_pair", "implant"}) {
    CAPTURE(name);
    const FiberReport f = fiber_report(make_builtin(name), 0.4, Vec3(0.3, 0.1, 0.0), cfg);
    CHECK(f.dim_particle_x_base == lambda_flag_from_full(f));
  }
}

TEST_CASE("single-point grid equals a direct fiber report") {
  const ConstitutiveLaw law = make_builtin("homog_pair");
  SamplingConfig cfg;
  Grid grid;
  grid.t_values = {0.25};
  grid.x1_values = {0.5};
  const SweepResult sweep = grid_sweep(law, grid, cfg);
  REQUIRE(sweep.points.size() == 1);
  const FiberReport direct = fiber_report(law, 0.25, Vec3(0.5, 0.0, 0.0), cfg);
  CHECK(sweep.points[0].report->dim_full == direct.dim_full);
  CHECK(sweep.points[0].report->full.basis == direct.full.basis);
}

TEST_CASE("out-of-domain points are flagged and the sweep continues") {
  const ConstitutiveLaw law = make_builtin("aging_pair");  // t_min = -0.9
  SamplingConfig cfg;
  Grid grid;
  grid.t_values = {-2.0, 0.5};
  grid.x1_values = {0.0};
  const SweepResult sweep = grid_sweep(law, grid, cfg);
  CHECK_FALSE(sweep.complete());
  CHECK_FALSE(sweep.points[0].ok());
  CHECK(sweep.points[0].error.find("domain") != std::string::npos);
  CHECK(sweep.points[1].ok());
}

TEST_CASE("grids enumerate row-major with t outermost") {
  Grid grid;
  grid.t_values = {0.0, 1.0};
  grid.x1_values = {-1.0, 1.0};
  grid.x2_values = {0.25, 0.75};
  grid.x3_values = {0.5};
  REQUIRE(grid.size() == 8);
  CHECK(grid.point(0).t == 0.0);
  CHECK(grid.point(0).x == Vec3(-1.0, 0.25, 0.5));
  CHECK(grid.point(1).x == Vec3(-1.0, 0.75, 0.5));  // x2 fastest after x3
  CHECK(grid.point(2).x == Vec3(1.0, 0.25, 0.5));
  CHECK(grid.point(4).t == 1.0);
  CHECK(grid.point(7).x == Vec3(1.0, 0.75, 0.5));
}

TEST_CASE("fiber dimensions are independent of the sampling seed") {
  const GridPoint p{0.4, Vec3(0.6, -0.3, 0.2)};
  for (const auto& [name, law] : builtin_registry()) {
    CAPTURE(name);
    SamplingConfig cfg;
    const FiberReport reference = fiber_report(law, p.t, p.x, cfg);
    for (const std::uint64_t seed : {19ULL, 23571113ULL, 0xFEEDULL}) {
      cfg.seed = seed;
      const FiberReport f = fiber_report(law, p.t, p.x, cfg);
      CHECK(f.dim_full == reference.dim_full);
      CHECK(f.dim_base == reference.dim_base);
      CHECK(f.dim_state_t_base == reference.dim_state_t_base);
      CHECK(f.dim_particle_x_base == reference.dim_particle_x_base);
      CHECK(f.dim_isotropy == reference.dim_isotropy);
    }
  }
}

TEST_CASE("sweeps are bitwise reproducible and independent of the worker count") {
  const ConstitutiveLaw law = make_builtin("graded");
  SamplingConfig cfg;
  const Grid grid{Grid::linspace(0.0, 1.0, 3), Grid::linspace(-1.0, 1.0, 4)};
  const SweepResult serial = grid_sweep(law, grid, cfg, 1);
  const SweepResult parallel = grid_sweep(law, grid, cfg, 4);
  REQUIRE(serial.points.size() == parallel.points.size());
  for (std::size_t i = 0; i < serial.points.size(); ++i) {
    CHECK(serial.points[i].report->full.basis == parallel.points[i].report->full.basis);
    CHECK(serial.points[i].report->dim_full == parallel.points[i].report->dim_full);
  }
  CHECK(sweep_to_json(serial, true).dump() == sweep_to_json(parallel, true).dump());
}
