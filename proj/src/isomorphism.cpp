#include "matdist/isomorphism.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "matdist/rng.hpp"

namespace matdist {

namespace {

Mat3 unflatten(const VecX& v) {
  Mat3 p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p(i, j) = v[3 * i + j];
  return p;
}

/// Residual blocks W(t,x,F·P) − W(s,y,F) stacked over samples.
VecX residual_vector(const ConstitutiveLaw& law, const GridPoint& from, const GridPoint& to,
                     const Mat3& p, const std::vector<Mat3>& samples) {
  const int m = law.output_dim();
  VecX r(static_cast<Eigen::Index>(m) * static_cast<Eigen::Index>(samples.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const VecX lhs = law.eval(from.t, from.x, samples[k] * p);
    const VecX rhs = law.eval(to.t, to.x, samples[k]);
    r.segment(static_cast<Eigen::Index>(k) * m, m) = lhs - rhs;
  }
  return r;
}

/// Jacobian of the stacked residual wrt the nine entries of P, by
/// forward-mode duals seeded on P (slots 0..8, row-major).
MatX residual_jacobian(const ConstitutiveLaw& law, const GridPoint& from, const Mat3& p,
                       const std::vector<Mat3>& samples) {
  const int m = law.output_dim();
  MatX jac(static_cast<Eigen::Index>(m) * static_cast<Eigen::Index>(samples.size()), 9);

  const Dual13 t(from.t);
  Vec3T<Dual13> x;
  for (int i = 0; i < 3; ++i) x[i] = Dual13(from.x[i]);
  Mat3T<Dual13> pd;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) pd(i, j) = Dual13::seeded(p(i, j), 3 * i + j);

  for (std::size_t k = 0; k < samples.size(); ++k) {
    Mat3T<Dual13> fd;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) fd(i, j) = Dual13(samples[k](i, j));
    const std::vector<Dual13> out = law.eval_dual(t, x, fd * pd);
    const Eigen::Index row0 = static_cast<Eigen::Index>(k) * m;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < 9; ++c)
        jac(row0 + r, c) = out[static_cast<std::size_t>(r)].grad[static_cast<std::size_t>(c)];
  }
  return jac;
}

double relative_residual(const ConstitutiveLaw& law, const GridPoint& from, const GridPoint& to,
                         const Mat3& p, const std::vector<Mat3>& samples) {
  double worst = 0.0;
  for (const Mat3& f : samples) {
    const VecX lhs = law.eval(from.t, from.x, f * p);
    const VecX rhs = law.eval(to.t, to.x, f);
    worst = std::max(worst, (lhs - rhs).norm() / (1.0 + rhs.norm()));
  }
  return worst;
}

/// One damped Gauss-Newton descent from a given start.  Returns the local
/// minimizer; never accepts a step leaving GL⁺(3).
Mat3 descend(const ConstitutiveLaw& law, const GridPoint& from, const GridPoint& to,
             Mat3 p, const std::vector<Mat3>& samples, const IsoConfig& cfg) {
  double cost = residual_vector(law, from, to, p, samples).squaredNorm();
  double damping = 1e-3;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const VecX r = residual_vector(law, from, to, p, samples);
    const MatX jac = residual_jacobian(law, from, p, samples);
    const VecX grad = jac.transpose() * r;
    if (cost <= 1e-30 || grad.lpNorm<Eigen::Infinity>() < 1e-16) break;

    const MatX jtj = jac.transpose() * jac;
    bool accepted = false;
    while (!accepted && damping < 1e12) {
      MatX lhs = jtj;
      lhs.diagonal().array() += damping;
      const VecX step = Eigen::LDLT<MatX>(lhs).solve(-grad);
      const Mat3 candidate = p + unflatten(step);
      if (candidate.determinant() > kDetFloor) {
        const double new_cost =
            residual_vector(law, from, to, candidate, samples).squaredNorm();
        if (new_cost < cost) {
          p = candidate;
          cost = new_cost;
          damping /= 3.0;
          accepted = true;
          if (step.lpNorm<Eigen::Infinity>() < 1e-13 * (1.0 + p.norm())) return p;
          continue;
        }
      }
      damping *= 3.0;
    }
    if (!accepted) break;
  }
  return p;
}

}  // namespace

const char* iso_status_name(IsoStatus s) {
  switch (s) {
    case IsoStatus::Found: return "found";
    case IsoStatus::NotFound: return "not_found";
    case IsoStatus::NonConverged: return "non_converged";
  }
  return "?";
}

double membership_test(const ConstitutiveLaw& law, const MaterialIsomorphism& candidate,
                       int n_validation, std::uint64_t seed, double spread) {
  const std::vector<Mat3> samples = sample_gl3(n_validation, seed, spread);
  return relative_residual(law, candidate.from, candidate.to, candidate.P, samples);
}

IsoSearchResult find_isomorphism(const ConstitutiveLaw& law, const GridPoint& from,
                                 const GridPoint& to, const IsoConfig& cfg) {
  if (!law.domain().contains(from.t, from.x) || !law.domain().contains(to.t, to.x))
    throw DomainError("find_isomorphism: endpoint outside the law's domain box");

  const std::vector<Mat3> train = sample_gl3(cfg.n_f, cfg.seed, cfg.spread);
  const std::vector<Mat3> held =
      sample_gl3(cfg.n_validation, validation_seed(cfg.seed), cfg.spread);

  Mat3 best_p = Mat3::Identity();
  double best_residual = relative_residual(law, from, to, best_p, held);

  SplitMix64 rng(mix_seed(cfg.seed, 0x15CDULL));
  for (int start = 0; start < cfg.n_starts; ++start) {
    Mat3 p0 = Mat3::Identity();
    if (start > 0) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p0(i, j) += cfg.start_sigma * rng.gaussian();
      if (!(p0.determinant() > kDetFloor)) continue;
    }
    const Mat3 p = descend(law, from, to, p0, train, cfg);
    const double validated = relative_residual(law, from, to, p, held);
    if (validated < best_residual) {
      best_residual = validated;
      best_p = p;
    }
    if (best_residual <= cfg.tau_iso) break;
  }

  IsoSearchResult out;
  out.best.from = from;
  out.best.to = to;
  out.best.P = best_p;
  out.best.residual = best_residual;
  if (best_residual <= cfg.tau_iso) {
    out.status = IsoStatus::Found;
    out.best.converged = true;
    MaterialIsomorphism inverse;
    inverse.from = to;
    inverse.to = from;
    inverse.P = best_p.inverse();
    out.best.inverse_residual =
        membership_test(law, inverse, cfg.n_validation, validation_seed(cfg.seed), cfg.spread);
  } else {
    out.status = best_residual > 1e3 * cfg.tau_iso ? IsoStatus::NotFound
                                                   : IsoStatus::NonConverged;
  }
  return out;
}

SymmetryAlgebra symmetry_algebra(const ConstitutiveLaw& law, const GridPoint& at,
                                 const SamplingConfig& cfg) {
  SymmetryAlgebra out;
  out.at = at;
  const KernelProblem problem = make_problem(KernelVariant::Isotropy, at, cfg);
  try {
    out.algebra = solve_kernel(law, problem, cfg);
  } catch (const RankUnstableError& e) {
    throw RankUnstableError(std::string("isotropy variant: ") + e.what(), e.sigma, e.threshold);
  }

  for (int c = 0; c < out.algebra.dim; ++c) {
    const Mat3 theta = unflatten(out.algebra.basis.col(c));
    ExpCheck check;
    for (const auto& [eps, slot] : {std::pair{1e-2, &ExpCheck::residual_eps2},
                                    std::pair{1e-3, &ExpCheck::residual_eps3}}) {
      MaterialIsomorphism cand;
      cand.from = at;
      cand.to = at;
      cand.P = matrix_exp(eps * theta);
      check.*slot = membership_test(law, cand, cfg.validation_count(),
                                    validation_seed(cfg.seed), cfg.spread);
    }
    out.checks.push_back(check);
  }
  return out;
}

TransitivityEvidence transitivity_probe(const ConstitutiveLaw& law, const Grid& grid,
                                        const IsoConfig& cfg) {
  TransitivityEvidence out;
  out.criterion =
      "uniform remodeling evidence <=> every grid point connected to the anchor by a found "
      "isomorphism";
  const std::size_t n = grid.size();
  if (n == 0) throw std::invalid_argument("transitivity_probe: empty grid");
  out.anchor = grid.point(0);
  out.uniform_remodeling_evidence = true;

  for (std::size_t i = 1; i < n; ++i) {
    IsoConfig pair_cfg = cfg;
    pair_cfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(i));
    PairProbe probe;
    probe.index = i;
    probe.to = grid.point(i);
    try {
      const IsoSearchResult r = find_isomorphism(law, out.anchor, probe.to, pair_cfg);
      probe.status = r.status;
      probe.residual = r.best.residual;
    } catch (const Error&) {
      probe.status = IsoStatus::NotFound;
      probe.residual = std::numeric_limits<double>::infinity();
    }
    if (probe.status != IsoStatus::Found) out.uniform_remodeling_evidence = false;
    out.pairs.push_back(probe);
  }
  return out;
}

Mat3 matrix_exp(const Mat3& a) { return to_eigen(matexp(from_eigen(a))); }

}  // namespace matdist
