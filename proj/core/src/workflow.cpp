#include "bellreg/workflow.hpp"

#include <algorithm>
#include <cmath>

#include "bellreg/errors.hpp"

namespace bellreg {

double FitResult::max_rhat() const {
  return rhat.empty() ? std::nan("") : *std::max_element(rhat.begin(), rhat.end());
}

double FitResult::max_abs_acf() const {
  return acf_at_lag.empty() ? std::nan("") : *std::max_element(acf_at_lag.begin(), acf_at_lag.end());
}

FitResult fit_model(ModelKind kind, const PriorSpec& prior, const Dataset& data, const mcmc::McmcConfig& mcmc,
                    double level, std::size_t acf_lag) {
  FitResult fit;
  fit.kind = kind;
  fit.prior = std::string(prior_name(prior));
  fit.chains = mcmc::run_chains(kind, prior, data, mcmc);
  fit.posterior = inference::summarize(fit.chains, level, data.column_names());

  const auto table = make_table_for(data);
  fit.criteria = inference::criteria(kind, data, fit.chains, table);

  const std::size_t p = data.p();
  if (fit.chains.n_chains() >= 2) {
    for (std::size_t j = 0; j < p; ++j) fit.rhat.push_back(mcmc::gelman_rubin(fit.chains, j));
  }
  fit.acf_lag = acf_lag;
  if (fit.chains.draws_per_chain() > acf_lag) {
    for (std::size_t j = 0; j < p; ++j) {
      double worst = 0.0;
      for (std::size_t c = 0; c < fit.chains.n_chains(); ++c) {
        const auto draws = fit.chains.coordinate(c, j);
        worst = std::max(worst, std::fabs(mcmc::autocorrelation(draws, acf_lag)[acf_lag]));
      }
      fit.acf_at_lag.push_back(worst);
    }
  }
  for (std::size_t c = 0; c < fit.chains.n_chains(); ++c) {
    for (const auto& w : fit.chains.chains[c].warnings) {
      fit.warnings.push_back(std::string(to_string(kind)) + " chain " + std::to_string(c) + ": " + w);
    }
  }
  return fit;
}

std::pair<inference::GofReport, inference::GofReport> gof_both(const Dataset& data,
                                                               const inference::CellGrouping& cells) {
  return {inference::chisq_gof(data.y(), ModelKind::Bell, cells),
          inference::chisq_gof(data.y(), ModelKind::Poisson, cells)};
}

CompareResult run_compare(const Dataset& data, const PriorSettings& prior, const mcmc::McmcConfig& mcmc,
                          const std::vector<ModelKind>& models, double level, std::size_t acf_lag) {
  CompareResult result;
  const PriorSpec spec = prior.make(data.p());
  for (const auto kind : models) {
    try {
      result.fits.push_back(fit_model(kind, spec, data, mcmc, level, acf_lag));
    } catch (const InputError& e) {
      throw InputError(std::string(to_string(kind)) + " model: " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(to_string(kind)) + " model: " + e.what());
    }
  }
  std::tie(result.gof_bell, result.gof_poisson) = gof_both(data);
  return result;
}

std::vector<std::string> unconverged(const std::vector<FitResult>& fits, double max_rhat) {
  std::vector<std::string> out;
  for (const auto& f : fits) {
    if (!f.rhat.empty() && !(f.max_rhat() <= max_rhat)) {
      out.push_back(std::string(to_string(f.kind)) + " (max R-hat " + std::to_string(f.max_rhat()) + ")");
    }
  }
  return out;
}

}  // namespace bellreg
