#pragma once

// Command implementations behind the CLI: each takes a parsed config,
// writes reports under the output directory and returns the process
// exit code (0 success, 2 config error, 3 compute failure).

#include <string>

#include "matdist/config.hpp"

namespace matdist {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCompute = 3;

int cmd_dims(const RunConfig& cfg);
int cmd_classify(const RunConfig& cfg);
int cmd_isomorphism(const RunConfig& cfg);
int cmd_trace(const RunConfig& cfg);
int cmd_remodel(const RunConfig& cfg);

/// Full argv entry point: subcommands dims, classify, isomorphism,
/// trace, remodel; flags --config, --seed, --out, --jobs.
int run_cli(int argc, const char* const* argv);

}  // namespace matdist
