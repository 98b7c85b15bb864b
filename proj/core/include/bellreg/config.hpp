#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellreg/model.hpp"
#include "bellreg/sampler.hpp"

namespace bellreg {

/// Prior choice plus hyperparameters, resolved into a PriorSpec once the
/// number of design columns is known.
struct PriorSettings {
  enum class Kind { GPrior, Flat };
  Kind kind = Kind::GPrior;
  double tau = 100.0;
  double a_mu = 1.0;
  double b_mu = 1.0;

  PriorSpec make(std::size_t p) const;
  std::string name() const;
  static Kind parse_kind(std::string_view text);
};

enum class Command { Fit, Simulate, Gof, Compare };

std::string_view to_string(Command command) noexcept;
Command parse_command(std::string_view text);

struct SimulationSettings {
  std::vector<std::size_t> sample_sizes{50, 100, 200};
  std::vector<std::size_t> dimensions{3, 6};
  std::vector<PriorSettings::Kind> priors{PriorSettings::Kind::GPrior, PriorSettings::Kind::Flat};
  std::size_t replications = 20;
  /// Overrides the default truth (0, -0.5, 1, ..., 1); must match every p in the grid.
  std::optional<std::vector<double>> beta_truth;
};

/// Everything one CLI invocation needs. Defaults reproduce the settings of
/// the original study: tau = 100, a_mu = b_mu = 1, 50000 iterations,
/// 10000 burn-in, thinning 20, two chains.
struct RunConfig {
  Command command = Command::Fit;
  std::string data_path;
  std::string response = "y";
  std::vector<std::string> covariates;  ///< empty: every non-response column
  bool add_intercept = true;
  bool standardize = false;
  std::vector<ModelKind> models{ModelKind::Bell};
  PriorSettings prior;
  mcmc::McmcConfig mcmc;
  double level = 0.95;
  std::size_t acf_lag = 20;
  double max_rhat = 1.1;
  bool allow_unconverged = false;
  SimulationSettings sim;
  std::string output_dir = "out";

  /// Command-specific checks; InputError on failure.
  void validate() const;
};

/// Parses "bell", "poisson" or "both".
std::vector<ModelKind> parse_models(std::string_view text);

/// Reads a JSON config; unknown keys are rejected. Fields absent from the
/// file keep the values already in `base`.
RunConfig config_from_json(std::string_view json_text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Canonical JSON form (sorted keys, full precision).
std::string config_to_json(const RunConfig& config);

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace bellreg
