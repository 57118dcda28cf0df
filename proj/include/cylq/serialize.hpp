#pragma once

// JSON layout for operators and symbols, sweep CSV, and atomic file output.
//
// CircleOperator: {"kind": "CircleOperator", "a", "k", "hbar", "N",
//                  "entries": [[re, im], ...]} row-major over m' then m, both in [-N, N].
// WeylSymbol:     {"kind": "WeylSymbol", "a", "k", "hbar", "n_max", "r_max",
//                  "entries": [[re, im], ...]} row-major over n in [-n_max, n_max]
//                  then r in [-r_max, r_max]; wrong-parity slots hold [0, 0].
// Doubles are written in shortest round-trip form, so reading back is bit-exact.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cylq/coherent.hpp"

namespace cylq {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const CircleOperator& op);
nlohmann::json to_json(const WeylSymbol& F);

/// Throw FormatError on a missing field, wrong kind, size mismatch or non-finite value.
CircleOperator operator_from_json(const nlohmann::json& j);
WeylSymbol symbol_from_json(const nlohmann::json& j);

/// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::json& j);

/// Header plus one line per row: hbar, band, norm, re/im of each expectation, each error.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// %.17g, with "-0" normalized to "0".
std::string format_double(double v);

/// Write to a sibling temporary file and rename it over path; no partial file on failure.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace cylq
