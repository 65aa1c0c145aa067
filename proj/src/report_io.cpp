#include "matdist/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace matdist {

namespace {

Json matrix_to_json(const MatX& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["value"] = v.value;
  j["criterion"] = v.criterion;
  if (v.witness) j["witness"] = point_to_json(*v.witness);
  if (v.counterexample) j["counterexample"] = point_to_json(*v.counterexample);
  return j;
}

}  // namespace

Json point_to_json(const GridPoint& p) {
  Json j;
  j["t"] = p.t;
  j["x"] = {p.x[0], p.x[1], p.x[2]};
  return j;
}

Json sampling_to_json(const SamplingConfig& cfg) {
  Json j;
  j["n_f"] = cfg.n_f;
  j["seed"] = cfg.seed;
  j["spread"] = cfg.spread;
  j["tau_rank"] = cfg.tau_rank;
  j["tau_accept"] = cfg.tau_accept;
  j["n_validation"] = cfg.validation_count();
  return j;
}

Json grid_to_json(const Grid& grid) {
  Json j;
  j["t"] = grid.t_values;
  j["x1"] = grid.x1_values;
  j["x2"] = grid.x2_values;
  j["x3"] = grid.x3_values;
  return j;
}

Json sweep_to_json(const SweepResult& sweep, bool include_bases) {
  Json points = Json::array();
  for (const PointOutcome& p : sweep.points) {
    Json j;
    j["point"] = point_to_json(p.point);
    if (p.ok()) {
      const FiberReport& f = *p.report;
      j["dim_full"] = f.dim_full;
      j["dim_base"] = f.dim_base;
      j["proj_kernel_dim"] = f.proj_kernel_dim;
      j["dim_state_t"] = f.dim_state_t;
      j["dim_state_t_base"] = f.dim_state_t_base;
      j["dim_particle_x"] = f.dim_particle_x;
      j["dim_particle_x_base"] = f.dim_particle_x_base;
      j["dim_isotropy"] = f.dim_isotropy;
      j["validation_residuals"] = {f.full.validation_residual, f.state_t.validation_residual,
                                   f.particle_x.validation_residual,
                                   f.isotropy.validation_residual};
      if (include_bases) {
        j["bases"]["full"] = matrix_to_json(f.full.basis);
        j["bases"]["state_t"] = matrix_to_json(f.state_t.basis);
        j["bases"]["particle_x"] = matrix_to_json(f.particle_x.basis);
        j["bases"]["isotropy"] = matrix_to_json(f.isotropy.basis);
      }
    } else {
      j["error"] = p.error;
    }
    points.push_back(j);
  }
  Json out;
  out["grid"] = grid_to_json(sweep.grid);
  out["complete"] = sweep.complete();
  out["points"] = points;
  return out;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "t,x1,x2,x3,dim_full,dim_base,dim_state_t,dim_state_t_base,dim_particle_x,"
        "dim_particle_x_base,dim_isotropy,status\n";
  for (const PointOutcome& p : sweep.points) {
    os << format_double(p.point.t) << ',' << format_double(p.point.x[0]) << ','
       << format_double(p.point.x[1]) << ',' << format_double(p.point.x[2]) << ',';
    if (p.ok()) {
      const FiberReport& f = *p.report;
      os << f.dim_full << ',' << f.dim_base << ',' << f.dim_state_t << ','
         << f.dim_state_t_base << ',' << f.dim_particle_x << ',' << f.dim_particle_x_base
         << ',' << f.dim_isotropy << ",ok\n";
    } else {
      os << ",,,,,,,failed\n";
    }
  }
  return os.str();
}

Json classification_to_json(const ClassificationReport& report) {
  Json per_point = Json::array();
  for (const PointSummary& p : report.per_point) {
    Json j;
    j["point"] = point_to_json(p.point);
    j["dim_full"] = p.dim_full;
    j["dim_base"] = p.dim_base;
    j["dim_state_t"] = p.dim_state_t;
    j["dim_state_t_base"] = p.dim_state_t_base;
    j["dim_particle_x"] = p.dim_particle_x;
    j["dim_particle_x_base"] = p.dim_particle_x_base;
    j["dim_isotropy"] = p.dim_isotropy;
    per_point.push_back(j);
  }

  Json j;
  j["complete"] = report.complete;
  j["dims_constant"] = report.dims_constant;
  j["smooth_uniform_remodeling"] = verdict_to_json(report.smooth_uniform_remodeling);
  j["smooth_remodeling"] = verdict_to_json(report.smooth_remodeling);
  j["smooth_aging"] = verdict_to_json(report.smooth_aging);
  j["uniform_aging"] = verdict_to_json(report.uniform_aging);
  j["thresholds_used"] = sampling_to_json(report.thresholds_used);
  j["caveats"] = report.caveats;
  j["per_point"] = per_point;
  return j;
}

Json isomorphism_to_json(const IsoSearchResult& result) {
  Json j;
  j["status"] = iso_status_name(result.status);
  j["from"] = point_to_json(result.best.from);
  j["to"] = point_to_json(result.best.to);
  j["residual"] = result.best.residual;
  j["converged"] = result.best.converged;
  if (result.status == IsoStatus::Found) {
    Json p = Json::array();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) p.push_back(result.best.P(i, k));
    j["P_row_major"] = p;
    j["det_P"] = result.best.P.determinant();
    j["inverse_residual"] = result.best.inverse_residual;
  }
  return j;
}

Json evidence_to_json(const TransitivityEvidence& evidence) {
  Json pairs = Json::array();
  for (const PairProbe& p : evidence.pairs) {
    Json j;
    j["index"] = p.index;
    j["to"] = point_to_json(p.to);
    j["status"] = iso_status_name(p.status);
    j["residual"] = p.residual;
    pairs.push_back(j);
  }
  Json j;
  j["anchor"] = point_to_json(evidence.anchor);
  j["uniform_remodeling_evidence"] = evidence.uniform_remodeling_evidence;
  j["criterion"] = evidence.criterion;
  j["pairs"] = pairs;
  return j;
}

std::string evidence_to_csv(const TransitivityEvidence& evidence) {
  std::ostringstream os;
  os << "pair,found,residual\n";
  for (const PairProbe& p : evidence.pairs)
    os << "0->" << p.index << ',' << (p.status == IsoStatus::Found ? 1 : 0) << ','
       << format_double(p.residual) << '\n';
  return os.str();
}

Json trace_to_json(const LeafTrace& trace) {
  Json branches = Json::array();
  for (const TraceBranch& b : trace.branches) {
    Json j;
    j["direction"] = {b.direction[0], b.direction[1], b.direction[2], b.direction[3]};
    j["abort"] = trace_abort_name(b.abort);
    if (!b.abort_detail.empty()) j["abort_detail"] = b.abort_detail;
    Json pts = Json::array();
    for (std::size_t i = 0; i < b.points.size(); ++i) {
      const Vec4& q = b.points[i];
      pts.push_back({q[0], q[1], q[2], q[3], b.dims[i]});
    }
    j["points"] = pts;
    branches.push_back(j);
  }
  Json j;
  j["seed"] = point_to_json(trace.seed);
  j["variant"] = leaf_variant_name(trace.variant);
  j["step_size"] = trace.step_size;
  j["steps"] = trace.steps;
  j["branches"] = branches;
  return j;
}

std::string trace_to_csv(const LeafTrace& trace) {
  std::ostringstream os;
  os << "step,t,x1,x2,x3,dim\n";
  for (std::size_t bi = 0; bi < trace.branches.size(); ++bi) {
    const TraceBranch& b = trace.branches[bi];
    os << "# branch " << bi << " direction=(" << format_double(b.direction[0]) << ' '
       << format_double(b.direction[1]) << ' ' << format_double(b.direction[2]) << ' '
       << format_double(b.direction[3]) << ") abort=" << trace_abort_name(b.abort) << '\n';
    for (std::size_t i = 0; i < b.points.size(); ++i) {
      const Vec4& q = b.points[i];
      os << i << ',' << format_double(q[0]) << ',' << format_double(q[1]) << ','
         << format_double(q[2]) << ',' << format_double(q[3]) << ',' << b.dims[i] << '\n';
    }
  }
  return os.str();
}

Json membership_to_json(const MembershipReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["residuals"] = report.residuals;
  return j;
}

Json mass_to_json(const MassConsistencyReport& report) {
  Json entries = Json::array();
  for (const MassConsistencyEntry& e : report.entries) {
    Json j;
    j["time"] = e.time;
    j["rho_measured"] = e.rho_measured;
    j["rho_predicted"] = e.rho_predicted;
    j["pass"] = e.pass;
    entries.push_back(j);
  }
  Json j;
  j["pass"] = report.pass;
  j["rule"] = "rho(t) = |det P(t)|^-1 rho(0)";
  j["entries"] = entries;
  return j;
}

Json growth_to_json(const GrowthReport& report) {
  Json entries = Json::array();
  for (const GrowthEntry& e : report.entries) {
    Json j;
    j["time"] = e.time;
    j["trace_L"] = e.trace_L;
    j["verdict"] = growth_class_name(e.verdict);
    if (e.rho_rate_gap) j["rho_rate_gap"] = *e.rho_rate_gap;
    entries.push_back(j);
  }
  Json j;
  j["criterion"] = report.criterion;
  j["entries"] = entries;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path + "'");
  out << content;
}

}  // namespace matdist
