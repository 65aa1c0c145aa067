#include "matdist/cli.hpp"

#include <filesystem>
#include <optional>

#include "CLI11.hpp"

#include "matdist/log.hpp"
#include "matdist/report_io.hpp"

namespace matdist {

namespace {

Json document_header(const char* command, const RunConfig& cfg) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["law"] = cfg.law_name;
  Json params = Json::object();
  for (const auto& [key, value] : cfg.law_params) params[key] = value;
  j["law_params"] = params;
  j["sampling"] = sampling_to_json(cfg.sampling);
  j["tau_iso"] = cfg.iso.tau_iso;
  return j;
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
  return (std::filesystem::path(cfg.out_dir) / file).string();
}

void emit(const RunConfig& cfg, const std::string& stem, const Json& doc,
          const std::optional<std::string>& csv = std::nullopt) {
  if (cfg.emit_json) {
    write_text_file(out_path(cfg, stem + ".json"), doc.dump(2) + "\n");
    log_info("wrote " + out_path(cfg, stem + ".json"));
  }
  if (cfg.emit_csv && csv) {
    write_text_file(out_path(cfg, stem + ".csv"), *csv);
    log_info("wrote " + out_path(cfg, stem + ".csv"));
  }
}

}  // namespace

int cmd_dims(const RunConfig& cfg) {
  try {
    const ConstitutiveLaw law = law_from_config(cfg);
    const SweepResult sweep = grid_sweep(law, make_grid(cfg), cfg.sampling, cfg.jobs);

    Json doc = document_header("dims", cfg);
    doc["result"] = sweep_to_json(sweep, /*include_bases=*/true);
    emit(cfg, "dims", doc, sweep_to_csv(sweep));
    return sweep.complete() ? kExitOk : kExitCompute;
  } catch (const NotFoundError& e) {
    log_error(e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log_error(e.what());
    return kExitCompute;
  }
}

int cmd_classify(const RunConfig& cfg) {
  try {
    const ConstitutiveLaw law = law_from_config(cfg);
    const SweepResult sweep = grid_sweep(law, make_grid(cfg), cfg.sampling, cfg.jobs);
    const ClassificationReport report =
        classify(sweep, cfg.sampling, /*allow_incomplete=*/true);

    Json doc = document_header("classify", cfg);
    doc["grid"] = grid_to_json(sweep.grid);
    doc["report"] = classification_to_json(report);
    if (!report.complete) doc["report"]["status"] = "incomplete";
    emit(cfg, "classification", doc);
    return report.complete ? kExitOk : kExitCompute;
  } catch (const NotFoundError& e) {
    log_error(e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log_error(e.what());
    return kExitCompute;
  }
}

int cmd_isomorphism(const RunConfig& cfg) {
  try {
    const ConstitutiveLaw law = law_from_config(cfg);
    Json doc = document_header("isomorphism", cfg);
    if (cfg.isomorphism.probe) {
      const TransitivityEvidence evidence =
          transitivity_probe(law, make_grid(cfg), cfg.iso);
      doc["evidence"] = evidence_to_json(evidence);
      emit(cfg, "evidence", doc, evidence_to_csv(evidence));
    } else {
      const IsoSearchResult result =
          find_isomorphism(law, cfg.isomorphism.from, cfg.isomorphism.to, cfg.iso);
      doc["result"] = isomorphism_to_json(result);
      emit(cfg, "isomorphism", doc);
    }
    return kExitOk;
  } catch (const NotFoundError& e) {
    log_error(e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log_error(e.what());
    return kExitCompute;
  }
}

int cmd_trace(const RunConfig& cfg) {
  try {
    const ConstitutiveLaw law = law_from_config(cfg);
    const LeafTrace trace = trace_leaf(law, cfg.trace.seed, cfg.trace.variant,
                                       cfg.trace.steps, cfg.trace.step_size, cfg.sampling);
    Json doc = document_header("trace", cfg);
    doc["trace"] = trace_to_json(trace);
    emit(cfg, "trace", doc, trace_to_csv(trace));
    return kExitOk;
  } catch (const NotFoundError& e) {
    log_error(e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log_error(e.what());
    return kExitCompute;
  }
}

int cmd_remodel(const RunConfig& cfg) {
  try {
    if (cfg.remodel.process_csv.empty()) {
      log_error("remodel: missing 'remodel.process_csv' in config");
      return kExitConfig;
    }
    const RemodelingProcess proc =
        read_process_csv(cfg.remodel.process_csv, cfg.remodel.particle, cfg.remodel.rho0);

    Json doc = document_header("remodel", cfg);
    doc["particle"] = {proc.particle[0], proc.particle[1], proc.particle[2]};
    doc["growth"] = growth_to_json(classify_growth(proc));
    if (proc.rho) doc["mass_consistency"] = mass_to_json(mass_consistency(proc));
    if (!cfg.law_name.empty()) {
      const ConstitutiveLaw law = law_from_config(cfg);
      doc["membership"] = membership_to_json(check_membership(law, proc, cfg.iso));
    }
    emit(cfg, "remodel", doc);
    return kExitOk;
  } catch (const NotFoundError& e) {
    log_error(e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    log_error(e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log_error(e.what());
    return kExitCompute;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"material evolution toolkit: distribution fibers, evolution classification, "
               "isomorphism search, leaf tracing, remodeling analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file path")->required();
    sub->add_option("--seed", seed, "override the sampling seed");
    sub->add_option("--out", out_dir, "override the output directory");
    sub->add_option("--jobs", jobs, "worker count for sweeps");
  };

  CLI::App* dims = app.add_subcommand("dims", "fiber dimensions over the grid");
  CLI::App* classify_cmd = app.add_subcommand("classify", "evolution classification verdicts");
  CLI::App* iso = app.add_subcommand("isomorphism", "isomorphism search / transitivity probe");
  CLI::App* trace = app.add_subcommand("trace", "leaf trace from a seed point");
  CLI::App* remodel = app.add_subcommand("remodel", "remodeling-process analysis");
  for (CLI::App* sub : {dims, classify_cmd, iso, trace, remodel}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const ConfigError& e) {
    log_error("config '" + config_path + "' line " + std::to_string(e.line) + ": " + e.what());
    return kExitConfig;
  }
  if (seed) cfg.override_seed(*seed);
  if (out_dir) cfg.out_dir = *out_dir;
  if (jobs) cfg.jobs = *jobs;

  if (dims->parsed()) return cmd_dims(cfg);
  if (classify_cmd->parsed()) return cmd_classify(cfg);
  if (iso->parsed()) return cmd_isomorphism(cfg);
  if (trace->parsed()) return cmd_trace(cfg);
  if (remodel->parsed()) return cmd_remodel(cfg);
  return kExitConfig;
}

}  // namespace matdist
