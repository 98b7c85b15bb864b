#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bellreg/config.hpp"
#include "bellreg/inference.hpp"
#include "bellreg/model.hpp"
#include "bellreg/sampler.hpp"

namespace bellreg {

struct FitResult {
  ModelKind kind = ModelKind::Bell;
  std::string prior;
  mcmc::ChainSet chains;
  inference::PosteriorReport posterior;
  inference::CriteriaReport criteria;
  std::vector<double> rhat;        ///< per coefficient; empty with a single chain
  std::size_t acf_lag = 0;
  std::vector<double> acf_at_lag;  ///< per coefficient, largest |ACF(acf_lag)| over chains
  std::vector<std::string> warnings;

  double max_rhat() const;
  double max_abs_acf() const;
};

FitResult fit_model(ModelKind kind, const PriorSpec& prior, const Dataset& data, const mcmc::McmcConfig& mcmc,
                    double level = 0.95, std::size_t acf_lag = 20);

struct CompareResult {
  std::vector<FitResult> fits;
  inference::GofReport gof_bell;
  inference::GofReport gof_poisson;
};

/// Marginal chi-square goodness of fit under both laws.
std::pair<inference::GofReport, inference::GofReport> gof_both(const Dataset& data,
                                                               const inference::CellGrouping& cells = {});

/// Fits each requested model under the same prior settings and runs the
/// goodness-of-fit tests.
CompareResult run_compare(const Dataset& data, const PriorSettings& prior, const mcmc::McmcConfig& mcmc,
                          const std::vector<ModelKind>& models = {ModelKind::Bell, ModelKind::Poisson},
                          double level = 0.95, std::size_t acf_lag = 20);

/// Names of fits whose largest R-hat exceeds the limit.
std::vector<std::string> unconverged(const std::vector<FitResult>& fits, double max_rhat);

}  // namespace bellreg
