#include "bellreg/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bellreg/bell.hpp"
#include "bellreg/errors.hpp"
#include "bellreg/specfun.hpp"

namespace bellreg::inference {

namespace {

std::size_t window_size(std::size_t m, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("credibility level must lie in (0, 1)");
  if (m == 0) throw InputError("interval of an empty sample");
  // Guard against level * m landing a hair above an integer.
  const auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(m) - 1e-9));
  return std::clamp<std::size_t>(k, 1, m);
}

std::vector<double> sorted_copy(std::span<const double> draws) {
  std::vector<double> s(draws.begin(), draws.end());
  std::sort(s.begin(), s.end());
  return s;
}

double median_of_sorted(const std::vector<double>& s) {
  const std::size_t m = s.size();
  return m % 2 == 1 ? s[m / 2] : 0.5 * (s[m / 2 - 1] + s[m / 2]);
}

Interval hpd_of_sorted(const std::vector<double>& s, double level) {
  const std::size_t m = s.size();
  const std::size_t k = window_size(m, level);
  std::size_t best = 0;
  double best_width = s[k - 1] - s[0];
  for (std::size_t i = 1; i + k <= m; ++i) {
    const double w = s[i + k - 1] - s[i];
    if (w < best_width) {
      best_width = w;
      best = i;
    }
  }
  return {s[best], s[best + k - 1]};
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double peak = v.maxCoeff();
  if (!std::isfinite(peak)) return peak;
  return peak + std::log((v.array() - peak).exp().sum());
}

void check_fit_inputs(const Dataset& data, const mcmc::ChainSet& chains) {
  if (chains.n_chains() == 0 || chains.draws_per_chain() == 0) throw InputError("no posterior draws available");
  if (chains.dimension() != data.p()) throw InputError("draw dimension does not match the design matrix");
}

// P(Y in [lo, hi)) for the fitted marginal law; hi == 0 means unbounded above.
double cell_probability(ModelKind kind, double parameter, std::uint64_t lo, std::uint64_t hi,
                        const specfun::LogBellTable& table) {
  double total = 0.0;
  for (std::uint64_t y = lo; y < hi; ++y) {
    if (kind == ModelKind::Bell) {
      total += std::exp(bell::log_pmf(y, bell::BellParam(parameter), table));
    } else {
      total += std::exp(static_cast<double>(y) * std::log(parameter) - parameter - specfun::log_factorial(y));
    }
  }
  return total;
}

}  // namespace

Interval hpd_interval(std::span<const double> draws, double level) {
  return hpd_of_sorted(sorted_copy(draws), level);
}

Interval equal_tailed_interval(std::span<const double> draws, double level) {
  const auto s = sorted_copy(draws);
  const std::size_t k = window_size(s.size(), level);
  const std::size_t lower = (s.size() - k) / 2;
  return {s[lower], s[lower + k - 1]};
}

PosteriorReport summarize(const Eigen::MatrixXd& pooled, double level, const std::vector<std::string>& names) {
  const auto m = static_cast<std::size_t>(pooled.rows());
  if (m < kMinSummaryDraws) {
    throw InputError("posterior summary needs at least " + std::to_string(kMinSummaryDraws) + " pooled draws, got " +
                     std::to_string(m));
  }
  PosteriorReport report;
  report.level = level;
  report.draws = m;
  for (Eigen::Index j = 0; j < pooled.cols(); ++j) {
    std::vector<double> col(pooled.col(j).data(), pooled.col(j).data() + m);
    CoefficientSummary s;
    s.name = static_cast<std::size_t>(j) < names.size() ? names[static_cast<std::size_t>(j)]
                                                        : "beta" + std::to_string(j);
    s.mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(m);
    double ss = 0.0;
    for (const double v : col) ss += (v - s.mean) * (v - s.mean);
    s.psd = std::sqrt(ss / static_cast<double>(m - 1));
    std::sort(col.begin(), col.end());
    s.median = median_of_sorted(col);
    s.hpd = hpd_of_sorted(col, level);
    report.coefficients.push_back(std::move(s));
  }
  return report;
}

PosteriorReport summarize(const mcmc::ChainSet& chains, double level, const std::vector<std::string>& names) {
  return summarize(chains.pooled(), level, names);
}

ErrorMetrics mse_mae(std::span<const double> estimates, std::span<const double> truth) {
  if (estimates.size() != truth.size()) {
    throw InputError("mse_mae: " + std::to_string(estimates.size()) + " estimates vs " +
                     std::to_string(truth.size()) + " true values");
  }
  if (estimates.empty()) throw InputError("mse_mae: empty input");
  ErrorMetrics out;
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    const double e = estimates[j] - truth[j];
    out.mse += e * e;
    out.mae += std::fabs(e);
  }
  out.mse /= static_cast<double>(estimates.size());
  out.mae /= static_cast<double>(estimates.size());
  return out;
}

Eigen::MatrixXd pointwise_log_likelihood_matrix(ModelKind kind, const Dataset& data, const Eigen::MatrixXd& draws,
                                                const specfun::LogBellTable& table) {
  Eigen::MatrixXd out(draws.rows(), static_cast<Eigen::Index>(data.n()));
  for (Eigen::Index k = 0; k < draws.rows(); ++k) {
    const Eigen::VectorXd beta = draws.row(k).transpose();
    out.row(k) = pointwise_log_likelihood(kind, data, beta, table).transpose();
    for (Eigen::Index i = 0; i < out.cols(); ++i) {
      if (!std::isfinite(out(k, i))) {
        throw NumericalError("non-finite log density at observation " + std::to_string(i) + ", draw " +
                             std::to_string(k));
      }
    }
  }
  return out;
}

CpoResult cpo_lmpl(const Eigen::MatrixXd& pointwise) {
  const auto draws = pointwise.rows();
  if (draws == 0) throw InputError("CPO needs at least one draw");
  const double log_m = std::log(static_cast<double>(draws));
  CpoResult out;
  out.cpo.reserve(static_cast<std::size_t>(pointwise.cols()));
  out.log_cpo.reserve(static_cast<std::size_t>(pointwise.cols()));
  for (Eigen::Index i = 0; i < pointwise.cols(); ++i) {
    const Eigen::VectorXd negated = -pointwise.col(i);
    const double log_cpo = log_m - log_sum_exp(negated);
    out.log_cpo.push_back(log_cpo);
    out.cpo.push_back(std::exp(log_cpo));
    out.lmpl += log_cpo;
  }
  return out;
}

CpoResult cpo_lmpl(ModelKind kind, const Dataset& data, const mcmc::ChainSet& chains,
                   const specfun::LogBellTable& table) {
  check_fit_inputs(data, chains);
  return cpo_lmpl(pointwise_log_likelihood_matrix(kind, data, chains.pooled(), table));
}

double dic(ModelKind kind, const Dataset& data, const mcmc::ChainSet& chains, const specfun::LogBellTable& table) {
  return criteria(kind, data, chains, table).dic;
}

InformationCriteria eaic_ebic(double mean_log_likelihood, std::size_t p, std::size_t n) {
  const double pd = static_cast<double>(p);
  return {-2.0 * mean_log_likelihood + 2.0 * pd,
          -2.0 * mean_log_likelihood + pd * std::log(static_cast<double>(n))};
}

InformationCriteria eaic_ebic(ModelKind kind, const Dataset& data, const mcmc::ChainSet& chains,
                              const specfun::LogBellTable& table) {
  const auto c = criteria(kind, data, chains, table);
  return {c.eaic, c.ebic};
}

CriteriaReport criteria(ModelKind kind, const Dataset& data, const mcmc::ChainSet& chains,
                        const specfun::LogBellTable& table) {
  check_fit_inputs(data, chains);
  const Eigen::MatrixXd pooled = chains.pooled();
  const Eigen::MatrixXd pointwise = pointwise_log_likelihood_matrix(kind, data, pooled, table);

  CriteriaReport out;
  const auto cpo = cpo_lmpl(pointwise);
  out.lmpl = cpo.lmpl;
  out.cpo = cpo.cpo;

  double total = 0.0;
  for (Eigen::Index k = 0; k < pointwise.rows(); ++k) total += pointwise.row(k).sum();
  out.mean_log_likelihood = total / static_cast<double>(pointwise.rows());

  const Eigen::VectorXd beta_bar = pooled.colwise().mean().transpose();
  out.log_likelihood_at_mean = log_likelihood(kind, data, beta_bar, table);
  if (!std::isfinite(out.log_likelihood_at_mean)) {
    throw NumericalError("log-likelihood at the posterior mean is not finite");
  }
  out.dic = 2.0 * (-2.0 * out.mean_log_likelihood + out.log_likelihood_at_mean);

  const auto ic = eaic_ebic(out.mean_log_likelihood, data.p(), data.n());
  out.eaic = ic.eaic;
  out.ebic = ic.ebic;
  return out;
}

std::size_t CellGrouping::cell_of(std::uint64_t y) const {
  std::size_t cell = 0;
  for (std::size_t j = 0; j < lower_bounds.size(); ++j) {
    if (y >= lower_bounds[j]) cell = j;
  }
  return cell;
}

std::string CellGrouping::label(std::size_t cell) const {
  const auto lo = lower_bounds.at(cell);
  if (cell + 1 == lower_bounds.size()) return ">=" + std::to_string(lo);
  const auto hi = lower_bounds[cell + 1] - 1;
  return lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
}

GofReport chisq_gof_from_frequencies(std::span<const double> observed, double sample_mean, ModelKind kind,
                                     const CellGrouping& cells) {
  const auto& bounds = cells.lower_bounds;
  if (bounds.size() < 2) throw InputError("goodness-of-fit needs at least two cells");
  if (bounds.front() != 0) throw InputError("the first cell must start at count 0");
  for (std::size_t j = 1; j < bounds.size(); ++j) {
    if (bounds[j] <= bounds[j - 1]) throw InputError("cell lower bounds must be strictly increasing");
  }
  if (observed.size() != bounds.size()) throw InputError("one observed frequency per cell is required");
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  if (!(n >= 1.0)) throw InputError("goodness-of-fit needs at least one observation");

  GofReport report;
  report.kind = kind;
  report.fitted_parameter = kind == ModelKind::Bell ? bell::mle_theta(sample_mean).theta() : sample_mean;
  if (kind == ModelKind::Poisson && !(sample_mean > 0.0)) {
    throw DomainError("Poisson fit needs a positive sample mean");
  }

  const specfun::LogBellTable table(kind == ModelKind::Bell ? bounds.back() : 0);
  double assigned = 0.0;
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    GofCell cell;
    cell.label = cells.label(j);
    cell.observed = observed[j];
    if (j + 1 < bounds.size()) {
      cell.expected = n * cell_probability(kind, report.fitted_parameter, bounds[j], bounds[j + 1], table);
      assigned += cell.expected;
    } else {
      cell.expected = n - assigned;
    }
    if (!(cell.expected >= 1e-8)) {
      throw NumericalError("expected frequency of cell '" + cell.label + "' is " + std::to_string(cell.expected) +
                           "; use a coarser grouping");
    }
    report.statistic += (cell.observed - cell.expected) * (cell.observed - cell.expected) / cell.expected;
    report.cells.push_back(std::move(cell));
  }
  report.df = static_cast<int>(bounds.size()) - 1;
  report.p_value = specfun::chisq_sf(report.statistic, report.df);
  return report;
}

GofReport chisq_gof(std::span<const std::uint64_t> y, ModelKind kind, const CellGrouping& cells) {
  if (y.empty()) throw InputError("goodness-of-fit needs at least one observation");
  std::vector<double> observed(cells.lower_bounds.size(), 0.0);
  double total = 0.0;
  for (const auto v : y) {
    observed[cells.cell_of(v)] += 1.0;
    total += static_cast<double>(v);
  }
  return chisq_gof_from_frequencies(observed, total / static_cast<double>(y.size()), kind, cells);
}

}  // namespace bellreg::inference
