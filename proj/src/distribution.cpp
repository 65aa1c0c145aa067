#include "matdist/distribution.hpp"

#include <atomic>
#include <thread>

#include <Eigen/QR>

namespace matdist {

int projected_rank(const MatX& basis, int rows, double tau_rank) {
  if (basis.cols() == 0) return 0;
  const MatX block = basis.topRows(rows);
  // The basis is orthonormal, so the block's natural scale is 1 and the
  // pivot threshold is absolute; a block-relative threshold would count
  // a pure-noise row as rank 1.
  Eigen::ColPivHouseholderQR<MatX> qr(block);
  const Eigen::Index n = std::min<Eigen::Index>(block.rows(), block.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(qr.matrixR()(i, i)) > tau_rank) ++rank;
  return rank;
}

FiberReport fiber_report(const ConstitutiveLaw& law, double t, const Vec3& x,
                         const SamplingConfig& cfg) {
  FiberReport r;
  r.point = GridPoint{t, x};

  const auto solve = [&](KernelVariant variant) {
    const KernelProblem problem = make_problem(variant, r.point, cfg);
    try {
      return solve_kernel(law, problem, cfg);
    } catch (const RankUnstableError& e) {
      throw RankUnstableError(std::string(variant_name(variant)) + " variant: " + e.what(),
                              e.sigma, e.threshold);
    }
  };

  r.full = solve(KernelVariant::Full);
  r.state_t = solve(KernelVariant::StateT);
  r.particle_x = solve(KernelVariant::ParticleX);
  r.isotropy = solve(KernelVariant::Isotropy);

  r.dim_full = r.full.dim;
  r.dim_base = projected_rank(r.full.basis, 4, cfg.tau_rank);
  r.proj_kernel_dim = r.dim_full - r.dim_base;
  r.dim_state_t = r.state_t.dim;
  r.dim_state_t_base = projected_rank(r.state_t.basis, 3, cfg.tau_rank);
  r.dim_particle_x = r.particle_x.dim;
  r.dim_particle_x_base = projected_rank(r.particle_x.basis, 1, cfg.tau_rank);
  r.dim_isotropy = r.isotropy.dim;
  return r;
}

std::vector<double> Grid::linspace(double lo, double hi, int count) {
  std::vector<double> v;
  if (count <= 1) {
    v.push_back(lo);
    return v;
  }
  v.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return v;
}

GridPoint Grid::point(std::size_t index) const {
  const std::size_t n3 = x3_values.size();
  const std::size_t n2 = x2_values.size();
  const std::size_t n1 = x1_values.size();
  const std::size_t i3 = index % n3;
  const std::size_t i2 = (index / n3) % n2;
  const std::size_t i1 = (index / (n3 * n2)) % n1;
  const std::size_t it = index / (n3 * n2 * n1);
  GridPoint p;
  p.t = t_values[it];
  p.x = Vec3(x1_values[i1], x2_values[i2], x3_values[i3]);
  return p;
}

bool SweepResult::complete() const {
  for (const PointOutcome& p : points)
    if (!p.ok()) return false;
  return !points.empty();
}

SweepResult grid_sweep(const ConstitutiveLaw& law, const Grid& grid,
                       const SamplingConfig& cfg, int jobs) {
  SweepResult result;
  result.grid = grid;
  const std::size_t n = grid.size();
  result.points.resize(n);

  const auto run_point = [&](std::size_t i) {
    PointOutcome& out = result.points[i];
    out.point = grid.point(i);
    try {
      out.report = fiber_report(law, out.point.t, out.point.x, cfg);
    } catch (const Error& e) {
      out.error = e.what();
    }
  };

  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_point(i);
    return result;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const int worker_count = std::min<int>(jobs, static_cast<int>(n));
  workers.reserve(static_cast<std::size_t>(worker_count));
  for (int w = 0; w < worker_count; ++w)
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) run_point(i);
    });
  for (std::thread& w : workers) w.join();
  return result;
}

}  // namespace matdist
