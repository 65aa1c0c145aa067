#include "matdist/kernel.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "matdist/rng.hpp"

namespace matdist {

namespace {

MatX assemble_at(const ConstitutiveLaw& law, KernelVariant variant, const GridPoint& p,
                 const std::vector<Mat3>& samples) {
  const int m = law.output_dim();
  const int cols = unknown_dim(variant);
  MatX a(static_cast<Eigen::Index>(m) * static_cast<Eigen::Index>(samples.size()), cols);

  const bool has_lambda = variant == KernelVariant::Full || variant == KernelVariant::ParticleX;
  const bool has_theta_x = variant == KernelVariant::Full || variant == KernelVariant::StateT;

  for (std::size_t r = 0; r < samples.size(); ++r) {
    const Mat3& F = samples[r];
    const LawJet j = jet(law, p.t, p.x, F);
    const Eigen::Index row0 = static_cast<Eigen::Index>(r) * m;
    int c = 0;
    if (has_lambda) a.block(row0, c++, m, 1) = j.d_t;
    if (has_theta_x)
      for (int i = 0; i < 3; ++i) a.block(row0, c++, m, 1) = j.d_x.col(i);
    // Θˡⱼ column: the equation contracts (F·Θ)ⁱⱼ with ∂W/∂Fⁱⱼ, so the
    // coefficient of Θˡⱼ is Σᵢ F(i,l)·∂W/∂F(i,j).
    for (int l = 0; l < 3; ++l)
      for (int jj = 0; jj < 3; ++jj) {
        VecX col = VecX::Zero(m);
        for (int i = 0; i < 3; ++i) col += F(i, l) * j.d_F.col(3 * i + jj);
        a.block(row0, c++, m, 1) = col;
      }
  }
  return a;
}

}  // namespace

const char* variant_name(KernelVariant v) {
  switch (v) {
    case KernelVariant::Full: return "full";
    case KernelVariant::StateT: return "state_t";
    case KernelVariant::ParticleX: return "particle_x";
    case KernelVariant::Isotropy: return "isotropy";
  }
  return "?";
}

int unknown_dim(KernelVariant v) {
  switch (v) {
    case KernelVariant::Full: return 13;
    case KernelVariant::StateT: return 12;
    case KernelVariant::ParticleX: return 10;
    case KernelVariant::Isotropy: return 9;
  }
  return 0;
}

std::vector<Mat3> sample_gl3(int n, std::uint64_t seed, double spread) {
  std::vector<Mat3> samples;
  samples.reserve(static_cast<std::size_t>(n));
  samples.push_back(Mat3::Identity());
  SplitMix64 rng(seed);
  for (int k = 1; k < n; ++k) {
    Mat3T<double> s;
    for (int e = 0; e < 9; ++e) s.e[static_cast<std::size_t>(e)] = spread * rng.gaussian();
    samples.push_back(to_eigen(matexp(s)));
  }
  return samples;
}

std::uint64_t validation_seed(std::uint64_t seed) {
  // One splitmix step decorrelates training and held-out streams.
  return SplitMix64(seed ^ 0xDA3E39CB94B95BDBULL).next();
}

KernelProblem make_problem(KernelVariant variant, const GridPoint& point,
                           const SamplingConfig& cfg) {
  KernelProblem p;
  p.variant = variant;
  p.point = point;
  p.f_samples = sample_gl3(cfg.n_f, cfg.seed, cfg.spread);
  for (const Mat3& f : p.f_samples)
    if (!(f.determinant() > kDetFloor))
      throw DomainError("GL+(3) sample fell below the determinant floor");
  return p;
}

MatX assemble(const ConstitutiveLaw& law, const KernelProblem& problem) {
  const int m = law.output_dim();
  if (m * static_cast<int>(problem.f_samples.size()) < problem.unknowns()) {
    std::ostringstream os;
    os << "kernel system underdetermined: " << m << "*" << problem.f_samples.size()
       << " rows < " << problem.unknowns() << " unknowns";
    throw std::invalid_argument(os.str());
  }
  return assemble_at(law, problem.variant, problem.point, problem.f_samples);
}

NullspaceResult nullspace(const MatX& a, double tau_rank,
                          const std::function<double(const MatX&)>& validator) {
  Eigen::JacobiSVD<MatX> svd(a, Eigen::ComputeFullV);
  const VecX sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
  const double threshold = tau_rank * sigma_max;

  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > threshold / 10.0 && sigma[i] < threshold * 10.0) {
      std::ostringstream os;
      os << "ambiguous rank: singular value " << sigma[i] << " within a decade of threshold "
         << threshold;
      throw RankUnstableError(os.str(), sigma[i], threshold);
    }
  }

  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > threshold) ++rank;

  NullspaceResult r;
  r.dim = static_cast<int>(a.cols()) - rank;
  r.singular_values = sigma;
  r.sigma_max = sigma_max;
  r.basis = svd.matrixV().rightCols(r.dim);
  if (validator) {
    r.validation_residual = validator(r.basis);
    r.validated = true;
  }
  return r;
}

NullspaceResult solve_kernel(const ConstitutiveLaw& law, const KernelProblem& problem,
                             const SamplingConfig& cfg) {
  const auto solve_once = [&](const KernelProblem& p) {
    NullspaceResult r = nullspace(assemble(law, p), cfg.tau_rank);
    r.validated = true;
    if (r.dim > 0) {
      const std::vector<Mat3> fresh =
          sample_gl3(cfg.validation_count(), validation_seed(cfg.seed), cfg.spread);
      const MatX a_fresh = assemble_at(law, p.variant, p.point, fresh);
      const double residual = (a_fresh * r.basis).cwiseAbs().maxCoeff();
      r.validation_residual = r.sigma_max > 0.0 ? residual / r.sigma_max : residual;
    }
    return r;
  };

  if (!cfg.retry_on_unstable) return solve_once(problem);
  try {
    return solve_once(problem);
  } catch (const RankUnstableError&) {
    // One resample with doubled coverage; a second failure propagates.
    SamplingConfig wider = cfg;
    wider.n_f = 2 * cfg.n_f;
    wider.seed = validation_seed(validation_seed(cfg.seed));
    const KernelProblem retry = make_problem(problem.variant, problem.point, wider);
    return solve_once(retry);
  }
}

}  // namespace matdist
