#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "matdist/cli.hpp"
#include "matdist/report_io.hpp"

using namespace matdist;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string base_config(const std::string& law, const std::string& extra = "") {
  return "[law]\nname = \"" + law +
         "\"\n[grid]\nt_min = 0.0\nt_max = 1.0\nt_count = 2\n"
         "x1_min = -0.5\nx1_max = 0.5\nx1_count = 2\n[sampling]\nseed = 7\n" +
         extra;
}

}  // namespace

TEST_CASE("config parsing: full round trip") {
  const std::string path = write_temp("matdist_full.toml", R"(
# comment
[law]
name = "implant"
[law.params]
coef = 0.25

[grid]
t_min = 0.0
t_max = 2.0
t_count = 4
x1 = 0.5
x2 = 0.25
x3 = -0.25

[sampling]
n_f = 24
seed = 99
spread = 0.5
tau_iso = 1e-7

[trace]
variant = "body_material"
seed_t = 0.5
seed_x = [0.1, 0.2, 0.3]
steps = 12
step_size = 0.02

[output]
dir = "somewhere"
formats = ["json"]
)");
  const RunConfig cfg = parse_config(path);
  CHECK(cfg.law_name == "implant");
  CHECK(cfg.law_params.at("coef") == 0.25);
  CHECK(cfg.t.count == 4);
  CHECK(cfg.x1.count == 1);
  CHECK(cfg.x1.lo == 0.5);
  CHECK(cfg.x2.lo == 0.25);
  CHECK(cfg.sampling.n_f == 24);
  CHECK(cfg.sampling.seed == 99);
  CHECK(cfg.iso.seed == 99);
  CHECK(cfg.iso.tau_iso == 1e-7);
  CHECK(cfg.trace.variant == LeafVariant::BodyMaterial);
  CHECK(cfg.trace.steps == 12);
  CHECK(cfg.out_dir == "somewhere");
  CHECK(cfg.emit_json);
  CHECK_FALSE(cfg.emit_csv);
}

TEST_CASE("config parsing: comments, duplicates, and strings with hashes") {
  const std::string ok = write_temp("matdist_edge.toml",
                                    "[law]\nname = \"graded\"  # inline comment\n"
                                    "[output]\ndir = \"out#1\"\n"
                                    "[sampling]\nn_f = 24 # trailing\n");
  const RunConfig cfg = parse_config(ok);
  CHECK(cfg.law_name == "graded");
  CHECK(cfg.out_dir == "out#1");
  CHECK(cfg.sampling.n_f == 24);

  const std::string dup = write_temp("matdist_dup.toml",
                                     "[law]\nname = \"graded\"\n[sampling]\nn_f = 1\nn_f = 2\n");
  try {
    (void)parse_config(dup);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 5);
  }
}

TEST_CASE("config parsing: malformed input carries the line number") {
  const std::string path =
      write_temp("matdist_bad.toml", "[law]\nname = \"graded\"\nbroken line here\n");
  try {
    (void)parse_config(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("key = value") != std::string::npos);
  }

  const std::string unknown =
      write_temp("matdist_unknown.toml", "[law]\nname = \"graded\"\nnonsense = 3\n");
  CHECK_THROWS_AS((void)parse_config(unknown), ConfigError);
}

TEST_CASE("cmd_dims writes the dimension table") {
  const std::string path = write_temp("matdist_dims.toml", base_config("homog_pair"));
  RunConfig cfg = parse_config(path);
  cfg.out_dir = (fs::temp_directory_path() / "matdist_dims_out").string();
  fs::remove_all(cfg.out_dir);

  CHECK(cmd_dims(cfg) == kExitOk);
  const Json doc = Json::parse(slurp(cfg.out_dir + "/dims.json"));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["result"]["points"].size() == 4);
  for (const auto& p : doc["result"]["points"]) CHECK(p["dim_base"] == 4);

  const std::string csv = slurp(cfg.out_dir + "/dims.csv");
  CHECK(csv.find("dim_full") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
}

TEST_CASE("cmd_classify is byte-identical across runs and worker counts") {
  const std::string path = write_temp("matdist_cls.toml", base_config("aging_pair"));
  RunConfig cfg = parse_config(path);

  cfg.out_dir = (fs::temp_directory_path() / "matdist_cls_a").string();
  cfg.jobs = 1;
  REQUIRE(cmd_classify(cfg) == kExitOk);
  const std::string a = slurp(cfg.out_dir + "/classification.json");

  cfg.out_dir = (fs::temp_directory_path() / "matdist_cls_b").string();
  cfg.jobs = 4;
  REQUIRE(cmd_classify(cfg) == kExitOk);
  const std::string b = slurp(cfg.out_dir + "/classification.json");

  CHECK(a == b);
  const Json doc = Json::parse(a);
  CHECK(doc["report"]["smooth_aging"]["value"] == true);
  CHECK(doc["report"]["uniform_aging"]["value"] == true);
}

TEST_CASE("cmd_classify flags incomplete sweeps with exit 3") {
  const std::string path = write_temp(
      "matdist_incomplete.toml",
      "[law]\nname = \"aging_pair\"\n[grid]\nt_min = -2.0\nt_max = 0.5\nt_count = 2\n"
      "x1 = 0.0\n");
  RunConfig cfg = parse_config(path);
  cfg.out_dir = (fs::temp_directory_path() / "matdist_incomplete_out").string();
  CHECK(cmd_classify(cfg) == kExitCompute);
  const Json doc = Json::parse(slurp(cfg.out_dir + "/classification.json"));
  CHECK(doc["report"]["status"] == "incomplete");
}

TEST_CASE("cmd_trace emits the leaf CSV with a constant grading coordinate") {
  const std::string path = write_temp(
      "matdist_trace.toml",
      base_config("graded",
                  "[trace]\nvariant = \"state_t\"\nseed_t = 0.0\nseed_x = [0.5, 0.0, 0.0]\n"
                  "steps = 20\nstep_size = 0.01\n"));
  RunConfig cfg = parse_config(path);
  cfg.out_dir = (fs::temp_directory_path() / "matdist_trace_out").string();
  CHECK(cmd_trace(cfg) == kExitOk);

  const std::string csv = slurp(cfg.out_dir + "/trace.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "step,t,x1,x2,x3,dim");
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');  // step
    std::getline(ss, field, ',');  // t
    std::getline(ss, field, ',');  // x1
    CHECK(std::abs(std::stod(field) - 0.5) < 1e-6);
    ++rows;
  }
  CHECK(rows == 4 * 21);  // ± two directions, seed plus 20 steps each
}

TEST_CASE("cmd_remodel reports growth for the shrinking exponential process") {
  const std::string process = std::string(MATDIST_TEST_DATA) + "/growth_process.csv";
  const std::string path = write_temp(
      "matdist_remodel.toml",
      "[law]\nname = \"homog_isotropic\"\n[remodel]\nprocess_csv = \"" + process +
          "\"\nparticle = [0.1, 0.0, 0.0]\nrho0 = 1.5\n");
  RunConfig cfg = parse_config(path);
  cfg.out_dir = (fs::temp_directory_path() / "matdist_remodel_out").string();
  CHECK(cmd_remodel(cfg) == kExitOk);

  const Json doc = Json::parse(slurp(cfg.out_dir + "/remodel.json"));
  CHECK(doc["mass_consistency"]["pass"] == true);
  for (const auto& e : doc["growth"]["entries"]) CHECK(e["verdict"] == "growth");
  CHECK(doc["membership"]["pass"] == false);  // e^{at} I is not a symmetry of tr(F^T F)
}

TEST_CASE("cmd_isomorphism finds the implant transporter") {
  const std::string path = write_temp(
      "matdist_iso.toml",
      base_config("implant",
                  "[isomorphism]\nfrom_t = 0.0\nfrom_x = [-0.5, 0.0, 0.0]\n"
                  "to_t = 0.0\nto_x = [0.8, 0.0, 0.0]\n"));
  RunConfig cfg = parse_config(path);
  cfg.out_dir = (fs::temp_directory_path() / "matdist_iso_out").string();
  CHECK(cmd_isomorphism(cfg) == kExitOk);
  const Json doc = Json::parse(slurp(cfg.out_dir + "/isomorphism.json"));
  CHECK(doc["result"]["status"] == "found");
  CHECK(doc["result"]["P_row_major"].size() == 9);
  CHECK(doc["result"]["residual"].get<double>() <= 1e-6);
}

TEST_CASE("cmd_isomorphism probe mode emits the evidence matrix") {
  const std::string path = write_temp(
      "matdist_probe.toml",
      "[law]\nname = \"homog_pair\"\n[grid]\nt = 0.0\nx1_min = -0.5\nx1_max = 0.5\n"
      "x1_count = 3\n[isomorphism]\nprobe = true\n");
  RunConfig cfg = parse_config(path);
  cfg.out_dir = (fs::temp_directory_path() / "matdist_probe_out").string();
  CHECK(cmd_isomorphism(cfg) == kExitOk);
  const Json doc = Json::parse(slurp(cfg.out_dir + "/evidence.json"));
  CHECK(doc["evidence"]["uniform_remodeling_evidence"] == true);
  CHECK(doc["evidence"]["pairs"].size() == 2);
  const std::string csv = slurp(cfg.out_dir + "/evidence.csv");
  CHECK(csv.rfind("pair,found,residual\n", 0) == 0);
}

TEST_CASE("unknown law names exit with the config code") {
  const std::string path = write_temp("matdist_missing.toml", base_config("no_such_law"));
  RunConfig cfg = parse_config(path);
  cfg.out_dir = (fs::temp_directory_path() / "matdist_missing_out").string();
  CHECK(cmd_dims(cfg) == kExitConfig);
  CHECK(cmd_classify(cfg) == kExitConfig);
}

TEST_CASE("run_cli parses subcommands and flags") {
  const std::string config = write_temp("matdist_cli.toml", base_config("homog_pair"));
  const std::string out = (fs::temp_directory_path() / "matdist_cli_out").string();
  fs::remove_all(out);
  const char* argv[] = {"matdist", "dims",   "--config", config.c_str(),
                        "--out",   out.c_str(), "--jobs", "2",
                        "--seed",  "123"};
  CHECK(run_cli(10, argv) == kExitOk);
  CHECK(fs::exists(out + "/dims.json"));
  const Json doc = Json::parse(slurp(out + "/dims.json"));
  CHECK(doc["sampling"]["seed"] == 123);

  const char* bad[] = {"matdist", "dims", "--config", "/nonexistent.toml"};
  CHECK(run_cli(4, bad) == kExitConfig);
}
