#pragma once

// Verification suites behind `cylq verify`: traces, trikernel, star, bridge, coherent.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylq/config.hpp"

namespace cylq {

struct UnknownSuite : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class CheckStatus { pass, fail, skip };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::fail;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

const std::vector<std::string>& suite_names();

/// Seed for randomized instances: CYLQ_SEED if set, otherwise a fixed default.
std::uint64_t run_seed();

/// Runs cfg.suite ("all" runs every suite); results are stably sorted by name.
/// Throws UnknownSuite for an unrecognized selector.
std::vector<CheckResult> run_verification(const RunConfig& cfg);

/// One report line: status, name, measured value, bound and detail.
std::string format_check(const CheckResult& r);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace cylq
