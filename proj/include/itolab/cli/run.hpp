#pragma once

#include <optional>
#include <string>
#include <vector>

#include "itolab/cli/config.hpp"

namespace itolab::cli {

enum ExitCode : int { kPass = 0, kAssertionFailure = 1, kInvalidConfig = 2 };

struct RunResult {
  int exit_code = kPass;
  std::string message;  // one line: PASS / FAIL detail or the config error
  std::vector<std::string> written;
};

/// Runs `command` from a configuration text. Writes <command>.csv,
/// manifest.json and summary.json into out_dir (created if needed).
RunResult run(Command command, const std::string& config_text, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override = std::nullopt);

/// Entry point behind the binary: <binary> <command> --config <file>
/// [--out <dir>] [--seed <u64>]. The output directory defaults to
/// $ITOLAB_OUT, then the working directory.
int main_entry(int argc, char** argv);

}  // namespace itolab::cli
