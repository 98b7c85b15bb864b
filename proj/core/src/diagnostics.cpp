#include <cmath>
#include <numeric>
#include <string>

#include "bellreg/errors.hpp"
#include "bellreg/sampler.hpp"

namespace bellreg::mcmc {

double gelman_rubin(std::span<const std::vector<double>> chains) {
  const std::size_t n_chains = chains.size();
  if (n_chains < 2) throw InputError("Gelman-Rubin needs at least two chains");
  const std::size_t m = chains.front().size();
  if (m < 2) throw InputError("Gelman-Rubin needs at least two draws per chain");
  for (const auto& c : chains) {
    if (c.size() != m) throw InputError("Gelman-Rubin needs chains of equal length");
  }

  std::vector<double> means(n_chains);
  double within = 0.0;
  for (std::size_t c = 0; c < n_chains; ++c) {
    const auto& x = chains[c];
    means[c] = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
    double ss = 0.0;
    for (const double v : x) ss += (v - means[c]) * (v - means[c]);
    within += ss / static_cast<double>(m - 1);
  }
  within /= static_cast<double>(n_chains);
  if (!(within > 0.0)) {
    throw NumericalError("Gelman-Rubin undefined: within-chain variance is zero");
  }

  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(n_chains);
  double between = 0.0;
  for (const double mu : means) between += (mu - grand) * (mu - grand);
  between *= static_cast<double>(m) / static_cast<double>(n_chains - 1);

  const double md = static_cast<double>(m);
  const double pooled_var = (md - 1.0) / md * within + between / md;
  return std::sqrt(pooled_var / within);
}

double gelman_rubin(const ChainSet& chains, std::size_t coordinate) {
  if (coordinate >= chains.dimension()) {
    throw InputError("coordinate " + std::to_string(coordinate) + " out of range");
  }
  std::vector<std::vector<double>> per_chain;
  per_chain.reserve(chains.n_chains());
  for (std::size_t c = 0; c < chains.n_chains(); ++c) per_chain.push_back(chains.coordinate(c, coordinate));
  return gelman_rubin(std::span<const std::vector<double>>(per_chain));
}

std::vector<double> autocorrelation(std::span<const double> draws, std::size_t max_lag) {
  const std::size_t m = draws.size();
  if (m <= max_lag) {
    throw InputError("autocorrelation needs more draws (" + std::to_string(m) + ") than max_lag (" +
                     std::to_string(max_lag) + ")");
  }
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(m);
  double c0 = 0.0;
  for (const double v : draws) c0 += (v - mean) * (v - mean);
  if (!(c0 > 0.0)) throw NumericalError("autocorrelation undefined for a constant chain");

  std::vector<double> acf(max_lag + 1);
  acf[0] = 1.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double ck = 0.0;
    for (std::size_t t = 0; t + lag < m; ++t) ck += (draws[t] - mean) * (draws[t + lag] - mean);
    acf[lag] = ck / c0;
  }
  return acf;
}

}  // namespace bellreg::mcmc
