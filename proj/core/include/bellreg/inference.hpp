#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bellreg/model.hpp"
#include "bellreg/sampler.hpp"

namespace bellreg::inference {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double width() const noexcept { return upper - lower; }
};

/// Shortest window of sorted draws containing ceil(level * m) of them;
/// ties go to the earliest window.
Interval hpd_interval(std::span<const double> draws, double level);

/// Equal-tailed interval from the order statistics at (1-level)/2 and (1+level)/2.
Interval equal_tailed_interval(std::span<const double> draws, double level);

struct CoefficientSummary {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double psd = 0.0;
  Interval hpd;
};

struct PosteriorReport {
  double level = 0.95;
  std::size_t draws = 0;
  std::vector<CoefficientSummary> coefficients;
};

inline constexpr std::size_t kMinSummaryDraws = 100;

/// Summaries over draws pooled across chains. Throws InputError with fewer
/// than kMinSummaryDraws pooled draws.
PosteriorReport summarize(const mcmc::ChainSet& chains, double level = 0.95,
                          const std::vector<std::string>& names = {});
PosteriorReport summarize(const Eigen::MatrixXd& pooled, double level = 0.95,
                          const std::vector<std::string>& names = {});

struct ErrorMetrics {
  double mse = 0.0;
  double mae = 0.0;
};

ErrorMetrics mse_mae(std::span<const double> estimates, std::span<const double> truth);

/// Log-likelihood contributions for every pooled draw: rows are draws,
/// columns observations. Throws NumericalError naming (i, k) on a
/// non-finite entry.
Eigen::MatrixXd pointwise_log_likelihood_matrix(ModelKind kind, const Dataset& data, const Eigen::MatrixXd& draws,
                                                const specfun::LogBellTable& table);

struct CpoResult {
  std::vector<double> cpo;
  std::vector<double> log_cpo;
  double lmpl = 0.0;
};

/// Harmonic-mean CPO estimates, log CPO_i = log M - logsumexp_k(-log f(y_i | beta_k)).
CpoResult cpo_lmpl(ModelKind kind, const Dataset& data, const mcmc::ChainSet& chains,
                   const specfun::LogBellTable& table);
CpoResult cpo_lmpl(const Eigen::MatrixXd& pointwise);

/// DIC = -4 * mean_m log L(beta_m) + 2 log L(beta_bar).
double dic(ModelKind kind, const Dataset& data, const mcmc::ChainSet& chains, const specfun::LogBellTable& table);

struct InformationCriteria {
  double eaic = 0.0;
  double ebic = 0.0;
};

/// EAIC = -2 Lbar + 2p, EBIC = -2 Lbar + p log n, Lbar the mean log-likelihood over draws.
InformationCriteria eaic_ebic(ModelKind kind, const Dataset& data, const mcmc::ChainSet& chains,
                              const specfun::LogBellTable& table);
InformationCriteria eaic_ebic(double mean_log_likelihood, std::size_t p, std::size_t n);

struct CriteriaReport {
  double lmpl = 0.0;
  double dic = 0.0;
  double eaic = 0.0;
  double ebic = 0.0;
  double mean_log_likelihood = 0.0;
  double log_likelihood_at_mean = 0.0;
  std::vector<double> cpo;
};

/// All four criteria from a single pass over the pooled draws.
CriteriaReport criteria(ModelKind kind, const Dataset& data, const mcmc::ChainSet& chains,
                        const specfun::LogBellTable& table);

/// Count cells [b_j, b_{j+1}); the last cell is open ended.
struct CellGrouping {
  std::vector<std::uint64_t> lower_bounds{0, 1, 2, 3, 4, 5};

  std::size_t cell_of(std::uint64_t y) const;
  std::string label(std::size_t cell) const;
};

struct GofCell {
  std::string label;
  double observed = 0.0;
  double expected = 0.0;
};

struct GofReport {
  ModelKind kind = ModelKind::Bell;
  double fitted_parameter = 0.0;  ///< theta-hat (Bell) or lambda-hat (Poisson)
  std::vector<GofCell> cells;
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Pearson chi-square test of the marginal counts against a Bell or Poisson
/// law fitted by its moment estimate (W0(ybar) or ybar); df = cells - 1.
GofReport chisq_gof(std::span<const std::uint64_t> y, ModelKind kind, const CellGrouping& cells = {});

/// Same test from grouped data: observed cell frequencies plus the sample
/// mean of the underlying counts.
GofReport chisq_gof_from_frequencies(std::span<const double> observed, double sample_mean, ModelKind kind,
                                     const CellGrouping& cells = {});

}  // namespace bellreg::inference
