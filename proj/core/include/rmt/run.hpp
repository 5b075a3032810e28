#pragma once

#include <string>
#include <vector>

#include "rmt/config.hpp"

namespace rmt {

// Runs the configured experiment and writes report.json, CSV tables, and
// manifest.json under config.out_dir. The report content is a pure
// function of (config, seed); wall-clock and thread count live only in
// the manifest. Returns the report path.
std::string run_experiment(const ExperimentConfig& config);

// Re-emits plot-ready CSVs from an existing report.json. Values are
// copied from the report, never recomputed. Returns the written paths.
std::vector<std::string> emit_plot_data(const std::string& report_path, const std::string& kind,
                                        const std::string& out_dir = "");

} // namespace rmt
