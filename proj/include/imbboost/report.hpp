#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "imbboost/experiments.hpp"

namespace imbboost::harness {

// "0.43 (0.03)"
std::string mean_std(double mean, double std, int decimals = 2);

std::string grid_csv(const std::vector<GridCell>& cells);
std::string sampling_csv(const std::vector<SamplingCell>& cells);
std::string objectives_csv(const std::vector<ObjectiveRow>& rows);
std::string drift_csv(const std::vector<DriftRun>& runs);

// Plain-text tables in the "mean (std)" style.
std::string report_tables(const ExperimentResult& results);
nlohmann::ordered_json results_json(const ExperimentResult& results);

// Writes a CSV per non-empty experiment, results.json, tables.txt and plot
// data (PR curves, F1 per drift section). Returns the written paths.
std::vector<std::filesystem::path> emit_report(const ExperimentResult& results, const std::filesystem::path& out_dir);

}  // namespace imbboost::harness
