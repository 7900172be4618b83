#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "fastflow/config.hpp"

namespace fastflow {

/// Command-line overrides: --seed, --out and --resume-registry take
/// precedence over the corresponding config keys.
struct CliOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> resume_registry;
};

// Commands throw ConfigError / NumericalError; dispatch maps exceptions to
// process exit codes (0 success, 1 config error, 2 numerical failure).
void cmd_train_toy(const Config& config, const CliOptions& options, std::ostream& log);
void cmd_run(const Config& config, const CliOptions& options, std::ostream& log);
void cmd_verify_bound(const Config& config, const CliOptions& options, std::ostream& log);
void cmd_regret(const Config& config, const CliOptions& options, std::ostream& log);
void cmd_report(const Config& config, const CliOptions& options, std::ostream& log);

int dispatch(const std::string& command, const Config& config, const CliOptions& options,
             std::ostream& log, std::ostream& err);

/// Parses the config file first so malformed files also map to exit code 1.
int dispatch_config_file(const std::string& command, const std::string& config_path,
                         const CliOptions& options, std::ostream& log, std::ostream& err);

}  // namespace fastflow
