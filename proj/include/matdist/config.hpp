#pragma once

// Run configuration: a TOML-style file with [section] headers and
// key = value lines (numbers, quoted strings, booleans, flat arrays).
// Parse errors carry the offending line number.

#include <optional>
#include <string>

#include "matdist/distribution.hpp"
#include "matdist/foliation.hpp"
#include "matdist/isomorphism.hpp"

namespace matdist {

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

struct RunConfig {
  std::string law_name;
  LawParams law_params;

  AxisRange t{0.0, 1.0, 5};
  AxisRange x1{-1.0, 1.0, 5};
  AxisRange x2{0.0, 0.0, 1};
  AxisRange x3{0.0, 0.0, 1};

  SamplingConfig sampling;
  IsoConfig iso;  // seed kept in sync with sampling.seed

  struct IsoBlock {
    bool probe = false;  // anchor-to-all transitivity probe over the grid
    GridPoint from;
    GridPoint to;
  } isomorphism;

  struct TraceBlock {
    LeafVariant variant = LeafVariant::StateT;
    GridPoint seed;
    int steps = 100;
    double step_size = 0.01;
  } trace;

  struct RemodelBlock {
    std::string process_csv;
    Vec3 particle = Vec3::Zero();
    double rho0 = 1.0;
  } remodel;

  std::string out_dir = "out";
  bool emit_json = true;
  bool emit_csv = true;
  int jobs = 1;

  void override_seed(std::uint64_t seed) {
    sampling.seed = seed;
    iso.seed = seed;
  }
};

/// Throws ConfigError (with line number) on malformed input or unknown
/// keys; throws on unreadable files too.
RunConfig parse_config(const std::string& path);

Grid make_grid(const RunConfig& cfg);

ConstitutiveLaw law_from_config(const RunConfig& cfg);

}  // namespace matdist
