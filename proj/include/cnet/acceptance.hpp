#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cnet/params.hpp"

namespace cnet::acceptance {

/// Outcome of one seed-panel criterion.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Options {
  Parameters base;  // reference calibration unless overridden
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::filesystem::path scratch_dir;  // used for the byte-determinism check
  bool include_calibration = true;    // statistics-layer Monte Carlo checks
};

/// Evaluates every acceptance criterion over the seed panel.
std::vector<CriterionResult> run_acceptance(const Options& options);

/// True when any seed aborted on an accounting audit.
bool audit_failed(const std::vector<CriterionResult>& results);

std::string format_line(const CriterionResult& r);

}  // namespace cnet::acceptance
