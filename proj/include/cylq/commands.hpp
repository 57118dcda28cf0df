#pragma once

// Subcommands behind the cylq binary. Each returns the process exit code.

#include <ostream>

#include "cylq/config.hpp"

namespace cylq {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,  // bad flags, config, expression or suite name
  kExitBand = 3,   // function band does not fit the operator band
  kExitIo = 4,
};

/// Weyl-quantizes cfg.function at band cfg.N and writes the operator JSON.
int cmd_quantize(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs cfg.suite and prints one line per check.
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Semiclassical sweep of cfg.function (paired with cfg.pair) at cfg.state; CSV by default.
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace cylq
