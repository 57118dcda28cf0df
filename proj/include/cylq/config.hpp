#pragma once

// Run configuration: defaults, flat "key = value" files, and validation.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "cylq/numerics.hpp"

namespace cylq {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double a = kTwoPi;
  double k = 0.0;
  double hbar = 1.0;
  bool hbar_set = false;  // a single sweep row instead of the default sequence
  int N = 16;
  int M = 64;
  double p_cutoff = 0.0;  // 0 picks a cutoff from the band and the Gaussian width
  double omega = 1.0;
  std::string format;  // empty: json for quantize, csv for sweep
  std::string out;  // empty writes to stdout
  std::string suite = "all";
  std::string function;
  std::string pair = "p";
  std::string state = "1.3,0.37,0.25";
  /// Bounds used by the verification suites, keyed by check family.
  std::map<std::string, double> tol = {
      {"bridge", 1e-10},     {"coherent_routes", 1e-10}, {"kernel_symbol", 1e-10}, {"modified_trace", 1e-9},
      {"pair_weak", 1e-6},   {"pptt_matrix", 1e-14},     {"resolution", 1e-6},     {"star", 1e-10},
      {"symbol", 1e-12},     {"trace", 1e-12},           {"trikernel", 1e-12},     {"weyl", 1e-10}};

  double tolerance(const std::string& name) const;
};

/// Sets one key; tolerances are addressed as tol.<name>. Throws ConfigError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Lines "key = value"; blank lines and lines starting with '#' are ignored.
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// N >= 4, M >= 2N + 1, positive tolerances, known format. Throws ConfigError.
void validate(const RunConfig& cfg);

struct StateSpec {
  double q = 0.0;
  double p = 0.0;
  double omega = 1.0;
};

/// "q,p,omega".
StateSpec parse_state(const std::string& text);

}  // namespace cylq
