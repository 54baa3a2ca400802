#pragma once

#include <string>

#include "risnet/config.hpp"

namespace risnet {

enum ExitCode { exit_ok = 0, exit_validation_failed = 1, exit_config_error = 2, exit_numeric_error = 3 };

struct CommandOutput {
    std::string data;    // CSV or JSON; written to --out, or stdout when no path is given
    std::string report;  // always printed to stdout
    int exit_code = exit_ok;
};

// Each command reads only the keys it needs and raises ConfigError on bad input.
CommandOutput cmd_rate_fixed(const RunConfig& cfg);
CommandOutput cmd_rate_spatial(const RunConfig& cfg);
CommandOutput cmd_optimize(const RunConfig& cfg);
CommandOutput cmd_rate_loss(const RunConfig& cfg);
CommandOutput cmd_validate(const RunConfig& cfg);

// Resolved parameters in linear units, one line per series point.
std::string dump_linear(const RunConfig& cfg);

}  // namespace risnet
