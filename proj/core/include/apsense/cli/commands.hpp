#pragma once

#include <string>
#include <vector>

#include "apsense/cli/config.hpp"

namespace apsense::cli {

/// Paths written by a command, in write order.
struct CommandResult {
  std::vector<std::string> outputs;
};

CommandResult cmd_cluster(const RunConfig& cfg);
CommandResult cmd_fetch(const RunConfig& cfg);
CommandResult cmd_train(const RunConfig& cfg);
CommandResult cmd_explain(const RunConfig& cfg);
CommandResult cmd_evaluate(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_monitor(const RunConfig& cfg);

/// Dispatches one subcommand, then appends a run-record line
/// ({command, config_hash, seed, duration_ms, outputs}) to the JSONL
/// file named by cfg "run_records". Unknown names are config errors.
CommandResult run_command(const std::string& name, const RunConfig& cfg);

}  // namespace apsense::cli
