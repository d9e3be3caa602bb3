#pragma once

// Acceptance criteria over the shipped scenarios. Each criterion reports one
// PASS/FAIL line with the measured numbers.

#include <filesystem>
#include <string>
#include <vector>

namespace rbk {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

constexpr int kCriterionCount = 12;

/// Runs one criterion (1..12) against the scenarios in scenario_dir.
CriterionResult run_criterion(int id, const std::filesystem::path& scenario_dir);

/// "PASS [ 1] name: detail (1.23 s)"
std::string format_result(const CriterionResult& r);

}  // namespace rbk
