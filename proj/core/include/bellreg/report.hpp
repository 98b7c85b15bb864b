#pragma once

#include <filesystem>
#include <string>

#include "bellreg/config.hpp"
#include "bellreg/simulation.hpp"
#include "bellreg/workflow.hpp"

namespace bellreg::report {

/// Identifies a run inside every emitted report.
struct RunMetadata {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string config_json;
};

RunMetadata metadata_for(const RunConfig& config);

/// report.json body for fit / compare / gof runs.
std::string compare_json(const CompareResult& result, const RunMetadata& meta, bool include_gof);
std::string simulation_json(const sim::SimResult& result, const RunMetadata& meta);

/// Aligned plain-text tables for the console.
std::string format_posterior(const FitResult& fit);
std::string format_criteria(const std::vector<FitResult>& fits);
std::string format_gof(const inference::GofReport& bell, const inference::GofReport& poisson);
std::string format_simulation(const sim::SimResult& result);

/// Writes report.json, table_posterior.csv, table_criteria.csv,
/// table_diagnostics.csv, table_gof.csv (when include_gof) and
/// chain_<model>_<c>.csv under out_dir.
void write_compare_outputs(const CompareResult& result, const RunMetadata& meta, bool include_gof,
                           const std::filesystem::path& out_dir);

/// Writes only report.json and table_gof.csv.
void write_gof_outputs(const inference::GofReport& bell, const inference::GofReport& poisson,
                       const RunMetadata& meta, const std::filesystem::path& out_dir);

/// Writes report.json, table_estimates.csv (per-coefficient summaries) and
/// table_errors.csv (MSE / MAE per cell) under out_dir.
void write_simulation_outputs(const sim::SimResult& result, const RunMetadata& meta,
                              const std::filesystem::path& out_dir);

}  // namespace bellreg::report
