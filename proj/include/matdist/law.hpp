#pragma once

// Mechanical responses W(t, x, F) on the body-time manifold, with first
// derivatives in t, x and F.  A law is authored once over a generic
// scalar type; dual numbers then deliver exact first partials, with a
// central-difference fallback for cross-checks.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "matdist/dual.hpp"
#include "matdist/errors.hpp"
#include "matdist/smallmat.hpp"

namespace matdist {

/// Determinant floor keeping F inside GL⁺(3).
inline constexpr double kDetFloor = 1e-6;

struct DomainBox {
  double t_min = -4.0;
  double t_max = 4.0;
  Vec3 x_min = Vec3::Constant(-3.0);
  Vec3 x_max = Vec3::Constant(3.0);

  bool contains(double t, const Vec3& x) const {
    if (!(t >= t_min && t <= t_max)) return false;
    for (int i = 0; i < 3; ++i)
      if (!(x[i] >= x_min[i] && x[i] <= x_max[i])) return false;
    return true;
  }
};

/// A mechanical response W : (t, x, F) → ℝᵐ.  Value semantics; cheap to
/// copy and safe to evaluate concurrently (evaluation is pure).
class ConstitutiveLaw {
 public:
  ConstitutiveLaw() = default;

  template <class Fn>
  static ConstitutiveLaw make(std::string name, int output_dim, DomainBox box, Fn fn) {
    ConstitutiveLaw law;
    law.name_ = std::move(name);
    law.m_ = output_dim;
    law.box_ = box;
    law.impl_ = std::make_shared<Model<Fn>>(std::move(fn));
    return law;
  }

  const std::string& name() const { return name_; }
  int output_dim() const { return m_; }
  const DomainBox& domain() const { return box_; }
  bool valid() const { return impl_ != nullptr; }

  /// Raw evaluation; callers enforce domain/finiteness where contracts
  /// require it.
  VecX eval(double t, const Vec3& x, const Mat3& F) const {
    Vec3T<double> xv;
    for (int i = 0; i < 3; ++i) xv[i] = x[i];
    const std::vector<double> out = impl_->eval_plain(t, xv, from_eigen(F));
    VecX v(static_cast<Eigen::Index>(out.size()));
    for (std::size_t i = 0; i < out.size(); ++i) v[static_cast<Eigen::Index>(i)] = out[i];
    return v;
  }

  std::vector<Dual13> eval_dual(const Dual13& t, const Vec3T<Dual13>& x,
                                const Mat3T<Dual13>& F) const {
    return impl_->eval_grad(t, x, F);
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual std::vector<double> eval_plain(double t, const Vec3T<double>& x,
                                           const Mat3T<double>& F) const = 0;
    virtual std::vector<Dual13> eval_grad(const Dual13& t, const Vec3T<Dual13>& x,
                                          const Mat3T<Dual13>& F) const = 0;
  };

  template <class Fn>
  struct Model final : Concept {
    explicit Model(Fn fn) : fn(std::move(fn)) {}
    std::vector<double> eval_plain(double t, const Vec3T<double>& x,
                                   const Mat3T<double>& F) const override {
      return fn(t, x, F);
    }
    std::vector<Dual13> eval_grad(const Dual13& t, const Vec3T<Dual13>& x,
                                  const Mat3T<Dual13>& F) const override {
      return fn(t, x, F);
    }
    Fn fn;
  };

  std::string name_;
  int m_ = 0;
  DomainBox box_;
  std::shared_ptr<const Concept> impl_;
};

enum class JetMode { Dual, FiniteDifference };

/// Value and first partials of a law at one (t, x, F).
struct LawJet {
  VecX value;  // m
  VecX d_t;    // m
  MatX d_x;    // m × 3
  MatX d_F;    // m × 9, column 3i+j holds ∂W/∂F(i,j)
  JetMode mode = JetMode::Dual;
};

/// Evaluates the law and all 13 first partials at (t, x, F).
/// Throws DomainError outside the domain box or below the det floor,
/// NonFiniteError when the law emits NaN/Inf.
LawJet jet(const ConstitutiveLaw& law, double t, const Vec3& x, const Mat3& F,
           JetMode mode = JetMode::Dual);

using LawParams = std::map<std::string, double>;

/// Built-in laws under their default parameters.
const std::map<std::string, ConstitutiveLaw>& builtin_registry();

/// Built-in law by name with parameter overrides.  Throws NotFoundError
/// for unknown names, std::invalid_argument for unknown parameter keys.
ConstitutiveLaw make_builtin(const std::string& name, const LawParams& params = {});

/// Traceless direction used by the default implant placement field
/// K(x) = exp(coef·x¹·D).
Mat3 implant_default_direction();

/// Implant-style response Ŵ(F·K(x)) for a user-supplied placement field K.
template <class KFn>
ConstitutiveLaw make_implant_law(std::string name, DomainBox box, KFn k_field) {
  return ConstitutiveLaw::make(
      std::move(name), 2, box, [k = std::move(k_field)](const auto& t, const auto& x, const auto& F) {
        using S = std::decay_t<decltype(t)>;
        const Mat3T<S> G = F * k(x);
        return std::vector<S>{frobenius_sq(G), det3(G)};
      });
}

}  // namespace matdist
