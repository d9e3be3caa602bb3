#pragma once

// Scenario pipeline: sections, Gram, kernel, envelope, Monge-Ampere, volumes,
// and the CSV and text artifacts.

#include <filesystem>
#include <string>
#include <vector>

#include "rbk/scenario.hpp"
#include "rbk/volume.hpp"

namespace rbk {

struct RunResult {
  VolumeReport report;
  std::vector<std::filesystem::path> written;
};

/// Creates out_dir and checks that it is writable. Errors: IoOutDir.
void prepare_out_dir(const std::filesystem::path& out_dir);

/// Runs the pipeline and writes the requested artifacts into out_dir.
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Human-readable key=value report.
std::string report_text(const Scenario& scenario, const VolumeReport& report);

/// Rational string for exact volumes, 17 significant digits otherwise.
std::string volume_string(const VolumeFit& fit);

}  // namespace rbk
