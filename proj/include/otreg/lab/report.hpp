#pragma once

#include "otreg/lab/config.hpp"

#include <filesystem>

namespace otreg::lab {

struct AggregateReport {
  Json json;
  int exit_code = 0;  // 3 if any solve failed, else 2 if anything failed
};

/// Collects every result.json below `dir` (sorted by relative path) into one
/// summary document. Timing files are ignored so the summary is
/// reproducible byte for byte.
AggregateReport aggregate_results(const std::filesystem::path& dir);

}  // namespace otreg::lab
