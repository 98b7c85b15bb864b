#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "bellreg/model.hpp"

namespace bellreg::mcmc {

/// Random-walk scale held fixed for the whole run.
struct FixedScale {
  double sigma = 0.1;
};

/// Random-walk scale tuned during burn-in by Robbins-Monro updates of
/// log(scale) towards a target acceptance rate, then frozen.
struct Adaptive {
  double target_accept = 0.234;
  double initial_sigma = 0.1;
};

enum class CovarianceShape {
  Identity,     ///< proposal covariance scale^2 * I
  GramInverse,  ///< proposal covariance scale^2 * n (X'X)^{-1}
};

struct ProposalSpec {
  std::variant<FixedScale, Adaptive> mode = Adaptive{};
  CovarianceShape shape = CovarianceShape::GramInverse;
};

struct McmcConfig {
  std::size_t n_iter = 50000;
  std::size_t burn_in = 10000;
  std::size_t thin = 20;
  std::size_t n_chains = 2;
  std::uint64_t seed = 20240601;
  ProposalSpec proposal;

  /// Throws InputError when the settings are inconsistent.
  void validate() const;
  /// floor((n_iter - burn_in) / thin)
  std::size_t retained() const noexcept { return (n_iter - burn_in) / thin; }
};

/// One chain's retained (post-burn-in, thinned) output.
struct Chain {
  Eigen::MatrixXd draws;              ///< m x p
  std::vector<double> log_posterior;  ///< m
  std::vector<std::size_t> iteration; ///< 1-based iteration index of each retained draw
  double accept_rate = 0.0;           ///< over the post-burn-in iterations
  double burn_in_accept_rate = 0.0;
  double scale_at_burn_in_end = 0.0;
  double final_scale = 0.0;
  std::vector<std::string> warnings;
};

struct ChainSet {
  std::vector<Chain> chains;

  std::size_t n_chains() const noexcept { return chains.size(); }
  std::size_t draws_per_chain() const noexcept {
    return chains.empty() ? 0 : static_cast<std::size_t>(chains.front().draws.rows());
  }
  std::size_t dimension() const noexcept {
    return chains.empty() ? 0 : static_cast<std::size_t>(chains.front().draws.cols());
  }
  /// All retained draws stacked chain after chain: (n_chains * m) x p.
  Eigen::MatrixXd pooled() const;
  /// Retained values of one coefficient in one chain.
  std::vector<double> coordinate(std::size_t chain, std::size_t j) const;
};

using TargetFn = std::function<double(const Eigen::VectorXd&)>;

/// Core random-walk Metropolis sampler on an arbitrary log density.
/// proposal_factor is a lower-triangular L with L L' the proposal shape.
Chain run_chain(const TargetFn& log_target, const Eigen::VectorXd& start, const Eigen::MatrixXd& proposal_factor,
                const McmcConfig& config, std::uint64_t chain_index);

/// Lower Cholesky factor of the proposal shape for a dataset.
Eigen::MatrixXd proposal_factor(CovarianceShape shape, const Dataset& data);

/// Starting point of chain c: zero plus an alternating +-0.5 offset per
/// coordinate, divided by each covariate's standard deviation so the offset
/// is +-0.5 on the linear-predictor scale.
Eigen::VectorXd initial_point(const Dataset& data, std::uint64_t chain_index);

Chain run_chain(ModelKind kind, const PriorSpec& prior, const Dataset& data, const McmcConfig& config,
                std::uint64_t chain_index);

/// Runs config.n_chains independent chains, each on its own derived stream.
ChainSet run_chains(ModelKind kind, const PriorSpec& prior, const Dataset& data, const McmcConfig& config);

/// Potential scale reduction factor for one coordinate.
double gelman_rubin(const ChainSet& chains, std::size_t coordinate);
double gelman_rubin(std::span<const std::vector<double>> chains);

/// Sample autocorrelations at lags 0..max_lag, normalized by the lag-0 autocovariance.
std::vector<double> autocorrelation(std::span<const double> draws, std::size_t max_lag);

}  // namespace bellreg::mcmc
