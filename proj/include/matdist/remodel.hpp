#pragma once

// Remodeling processes P(t) at a fixed particle: membership against a
// law, mass consistency ρ(t) = |det P(t)|⁻¹ ρ(0), the remodeling
// velocity gradient L = P⁻¹Ṗ, and the growth/resorption sign rule
// (growth ⟺ tr L < 0, density increasing).

#include <optional>
#include <string>
#include <vector>

#include "matdist/isomorphism.hpp"

namespace matdist {

struct RemodelingProcess {
  Vec3 particle = Vec3::Zero();
  std::vector<double> times;  // strictly increasing
  std::vector<Mat3> P;        // P(times[0]) = I, det > 0 throughout
  double rho0 = 1.0;
  std::optional<std::vector<double>> rho;

  /// Enforces the construction invariants; throws invalid_argument.
  void validate() const;
};

inline constexpr double kTauMass = 1e-6;  // relative density tolerance
inline constexpr double kTauTrace = 1e-8; // dead band around tr L = 0

struct MembershipReport {
  std::vector<double> residuals;  // one per time sample
  bool pass = false;              // all within tau_iso
};

/// Each P(t_k) checked as an isomorphism from (t₀, particle) to
/// (t_k, particle) on fresh seeded samples.
MembershipReport check_membership(const ConstitutiveLaw& law, const RemodelingProcess& proc,
                                  const IsoConfig& cfg);

struct MassConsistencyEntry {
  double time = 0.0;
  double rho_measured = 0.0;
  double rho_predicted = 0.0;  // |det P|⁻¹ ρ(0)
  bool pass = false;
};

struct MassConsistencyReport {
  std::vector<MassConsistencyEntry> entries;
  bool pass = false;
};

/// Throws MissingDensityError when the process has no measured ρ.
MassConsistencyReport mass_consistency(const RemodelingProcess& proc);

/// L(t_k) = P(t_k)⁻¹ Ṗ(t_k); Ṗ by central differences inside, second-
/// order one-sided at the endpoints.  Throws SingularMatrixError.
std::vector<Mat3> velocity_gradient(const RemodelingProcess& proc);

enum class GrowthClass { Growth, Resorption, Neutral };

const char* growth_class_name(GrowthClass g);

struct GrowthEntry {
  double time = 0.0;
  double trace_L = 0.0;
  GrowthClass verdict = GrowthClass::Neutral;
  /// −ρ·tr L vs finite-difference ρ̇, when ρ is available.
  std::optional<double> rho_rate_gap;
};

struct GrowthReport {
  std::vector<GrowthEntry> entries;
  std::string criterion;
};

/// Growth ⟺ tr L < −τ, resorption ⟺ tr L > τ, neutral inside the band;
/// the ρ̇ = −ρ·tr L cross-check is recorded per sample when ρ is given.
GrowthReport classify_growth(const RemodelingProcess& proc);

/// Process file: CSV columns t,p11,p12,p13,p21,p22,p23,p31,p32,p33[,rho].
RemodelingProcess read_process_csv(const std::string& path, const Vec3& particle,
                                   double rho0);

}  // namespace matdist
