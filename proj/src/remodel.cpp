#include "matdist/remodel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "matdist/rng.hpp"

namespace matdist {

namespace {

/// Time derivative of a sampled matrix path: central differences inside,
/// second-order one-sided at the ends (uneven spacing handled exactly).
/// Two-sample paths fall back to the single first-order slope.
Mat3 path_derivative(const std::vector<double>& t, const std::vector<Mat3>& p, std::size_t k) {
  const std::size_t n = t.size();
  if (n == 2) return (1.0 / (t[1] - t[0])) * (p[1] - p[0]);
  if (k > 0 && k + 1 < n) {
    const double h1 = t[k] - t[k - 1];
    const double h2 = t[k + 1] - t[k];
    // Three-point stencil exact for quadratics on uneven grids.
    const double a = -h2 / (h1 * (h1 + h2));
    const double b = (h2 - h1) / (h1 * h2);
    const double c = h1 / (h2 * (h1 + h2));
    return a * p[k - 1] + b * p[k] + c * p[k + 1];
  }
  if (k == 0) {
    const double h1 = t[1] - t[0];
    const double h2 = t[2] - t[1];
    const double a = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
    const double b = (h1 + h2) / (h1 * h2);
    const double c = -h1 / (h2 * (h1 + h2));
    return a * p[0] + b * p[1] + c * p[2];
  }
  const double h1 = t[n - 2] - t[n - 3];
  const double h2 = t[n - 1] - t[n - 2];
  const double a = h2 / (h1 * (h1 + h2));
  const double b = -(h1 + h2) / (h1 * h2);
  const double c = (h1 + 2.0 * h2) / (h2 * (h1 + h2));
  return a * p[n - 3] + b * p[n - 2] + c * p[n - 1];
}

double scalar_path_derivative(const std::vector<double>& t, const std::vector<double>& v,
                              std::size_t k) {
  std::vector<Mat3> lifted(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) lifted[i] = v[i] * Mat3::Identity();
  return path_derivative(t, lifted, k)(0, 0);
}

}  // namespace

void RemodelingProcess::validate() const {
  if (times.size() != P.size())
    throw std::invalid_argument("process: times and P must have equal length");
  if (times.size() < 2) throw std::invalid_argument("process: need at least two samples");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw std::invalid_argument("process: times must be strictly increasing");
  if (!P.front().isApprox(Mat3::Identity(), 0.0))
    throw std::invalid_argument("process: P at the first time must be the identity");
  for (const Mat3& p : P)
    if (!(p.determinant() > 0.0))
      throw std::invalid_argument("process: every P must be orientation-preserving");
  if (!(rho0 > 0.0)) throw std::invalid_argument("process: rho0 must be positive");
  if (rho && rho->size() != times.size())
    throw std::invalid_argument("process: rho and times must have equal length");
}

MembershipReport check_membership(const ConstitutiveLaw& law, const RemodelingProcess& proc,
                                  const IsoConfig& cfg) {
  proc.validate();
  MembershipReport report;
  report.pass = true;
  const GridPoint from{proc.times.front(), proc.particle};
  for (std::size_t k = 0; k < proc.times.size(); ++k) {
    MaterialIsomorphism cand;
    cand.from = from;
    cand.to = GridPoint{proc.times[k], proc.particle};
    cand.P = proc.P[k];
    const double r = membership_test(law, cand, cfg.n_validation,
                                     validation_seed(cfg.seed), cfg.spread);
    report.residuals.push_back(r);
    if (r > cfg.tau_iso) report.pass = false;
  }
  return report;
}

MassConsistencyReport mass_consistency(const RemodelingProcess& proc) {
  proc.validate();
  if (!proc.rho) throw MissingDensityError("mass_consistency: process has no density samples");

  MassConsistencyReport report;
  report.pass = true;
  for (std::size_t k = 0; k < proc.times.size(); ++k) {
    MassConsistencyEntry e;
    e.time = proc.times[k];
    e.rho_measured = (*proc.rho)[k];
    e.rho_predicted = proc.rho0 / std::abs(proc.P[k].determinant());
    e.pass = std::abs(e.rho_measured - e.rho_predicted) <= kTauMass * e.rho_predicted;
    if (!e.pass) report.pass = false;
    report.entries.push_back(e);
  }
  return report;
}

std::vector<Mat3> velocity_gradient(const RemodelingProcess& proc) {
  proc.validate();
  const std::size_t n = proc.times.size();
  std::vector<Mat3> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double det = proc.P[k].determinant();
    if (std::abs(det) <= kDetFloor)
      throw SingularMatrixError("velocity_gradient: P(t_" + std::to_string(k) +
                                ") is numerically singular");
    out[k] = proc.P[k].inverse() * path_derivative(proc.times, proc.P, k);
  }
  return out;
}

const char* growth_class_name(GrowthClass g) {
  switch (g) {
    case GrowthClass::Growth: return "growth";
    case GrowthClass::Resorption: return "resorption";
    case GrowthClass::Neutral: return "neutral";
  }
  return "?";
}

GrowthReport classify_growth(const RemodelingProcess& proc) {
  const std::vector<Mat3> vel = velocity_gradient(proc);

  GrowthReport report;
  report.criterion =
      "growth <=> tr(P^-1 dP/dt) < 0 (density increasing, d(rho)/dt = -rho tr L); resorption "
      "<=> tr > 0; |tr| <= 1e-08 is neutral";
  for (std::size_t k = 0; k < proc.times.size(); ++k) {
    GrowthEntry e;
    e.time = proc.times[k];
    e.trace_L = vel[k].trace();
    if (e.trace_L < -kTauTrace)
      e.verdict = GrowthClass::Growth;
    else if (e.trace_L > kTauTrace)
      e.verdict = GrowthClass::Resorption;
    else
      e.verdict = GrowthClass::Neutral;
    if (proc.rho) {
      const double rho_dot = scalar_path_derivative(proc.times, *proc.rho, k);
      e.rho_rate_gap = std::abs(rho_dot + (*proc.rho)[k] * e.trace_L);
    }
    report.entries.push_back(e);
  }
  return report;
}

RemodelingProcess read_process_csv(const std::string& path, const Vec3& particle,
                                   double rho0) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open process file '" + path + "'");

  RemodelingProcess proc;
  proc.particle = particle;
  proc.rho0 = rho0;
  std::vector<double> rho;
  bool any_rho = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    // Header row allowed; detected by a non-numeric first field.
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string fld;
    while (std::getline(ss, fld, ',')) fields.push_back(fld);
    if (line_no == 1 && !fields.empty()) {
      try {
        (void)std::stod(fields[0]);
      } catch (...) {
        continue;
      }
    }
    if (fields.size() != 10 && fields.size() != 11)
      throw std::invalid_argument("process file '" + path + "' line " +
                                  std::to_string(line_no) +
                                  ": expected 10 or 11 comma-separated values");
    std::vector<double> vals;
    for (const std::string& f : fields) {
      try {
        vals.push_back(std::stod(f));
      } catch (...) {
        throw std::invalid_argument("process file '" + path + "' line " +
                                    std::to_string(line_no) + ": bad number '" + f + "'");
      }
    }
    proc.times.push_back(vals[0]);
    Mat3 p;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) p(i, j) = vals[static_cast<std::size_t>(1 + 3 * i + j)];
    proc.P.push_back(p);
    if (vals.size() == 11) {
      rho.push_back(vals[10]);
      any_rho = true;
    } else if (any_rho) {
      throw std::invalid_argument("process file '" + path + "' line " +
                                  std::to_string(line_no) + ": rho column must be consistent");
    }
  }
  if (any_rho) {
    if (rho.size() != proc.times.size())
      throw std::invalid_argument("process file '" + path + "': rho column must be consistent");
    proc.rho = rho;
  }
  proc.validate();
  return proc;
}

}  // namespace matdist
