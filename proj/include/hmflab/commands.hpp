#pragma once

// Experiment drivers behind the hmflab command line.  Each command writes
// CSV and gnuplot .dat files into cfg.out_dir and returns a short summary.

#include <string>
#include <vector>

#include "hmflab/config.hpp"

namespace hmf {

struct CommandResult {
  std::vector<std::string> files;    // paths written, in order
  std::vector<std::string> summary;  // human-readable lines for stdout
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"scan-beta",      "scan-distance", "series",       "selection-rules",
                                              "ent-compare",    "scan-coupling", "fit"};
  return names;
}

/// Runs cfg.command.  Throws UsageError for a bad config; numerical failures
/// carry the beta (and operator, where known) in their message.
CommandResult run_command(const RunConfig& cfg);

/// Metadata lines shared by every artifact of a run.
std::vector<std::string> provenance(const RunConfig& cfg);

}  // namespace hmf
