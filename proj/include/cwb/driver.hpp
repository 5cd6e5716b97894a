#pragma once

#include <iosfwd>
#include <string>

#include "cwb/config.hpp"

namespace cwb {

// Exit codes shared by the CLI and the drivers.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitRejected = 2;
inline constexpr int kExitMaxSteps = 3;
inline constexpr int kExitUsage = 64;

/// Single solve at the configured lambda. Writes trace.csv, summary.json and
/// q_final.txt under out_dir; exit code follows the verdict.
int cmd_run(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Independent runs over sampled lambda; aggregated sweep.csv + summary.json.
int cmd_sweep(const RunConfig& cfg, const std::string& out_dir,
              std::ostream& log);

/// Diophantine filter driver: per-sample pass/fail CSV, optional
/// interval-removal kept list as JSON.
int cmd_filter(const RunConfig& cfg, const std::string& out_dir,
               std::ostream& log);

/// Runs a named property suite with a fixed seed; nonzero exit on violation.
int cmd_verify(const std::string& suite, uint64_t seed, std::ostream& log);

/// Prints a human summary of a run/sweep output directory.
int cmd_report(const std::string& out_dir, std::ostream& log);

}  // namespace cwb
