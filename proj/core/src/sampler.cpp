#include "bellreg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <string>

#include <Eigen/Cholesky>

#include "bellreg/errors.hpp"
#include "bellreg/rng.hpp"

namespace bellreg::mcmc {

namespace {

constexpr double kMinLogScale = -20.0;
constexpr double kMaxLogScale = 7.0;
constexpr double kAdaptationDecay = 0.6;
constexpr double kLowAcceptance = 0.01;

[[noreturn]] void rethrow_with_chain(std::size_t chain, const std::exception_ptr& error) {
  const std::string prefix = "chain " + std::to_string(chain) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const InputError& e) {
    throw InputError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  } catch (const DomainError& e) {
    throw NumericalError(prefix + e.what());
  }
}

}  // namespace

void McmcConfig::validate() const {
  if (n_iter == 0) throw InputError("n_iter must be positive");
  if (burn_in >= n_iter) throw InputError("burn_in must be smaller than n_iter");
  if (thin == 0) throw InputError("thin must be >= 1");
  if (n_chains == 0) throw InputError("n_chains must be >= 1");
  if (retained() < 1) throw InputError("no draws retained: (n_iter - burn_in) / thin < 1");
  if (const auto* fixed = std::get_if<FixedScale>(&proposal.mode)) {
    if (!(fixed->sigma > 0.0)) throw InputError("proposal sigma must be positive");
  } else {
    const auto& adaptive = std::get<Adaptive>(proposal.mode);
    if (!(adaptive.initial_sigma > 0.0)) throw InputError("initial proposal sigma must be positive");
    if (!(adaptive.target_accept > 0.1 && adaptive.target_accept < 0.6)) {
      throw InputError("target acceptance rate must lie in (0.1, 0.6)");
    }
  }
}

Eigen::MatrixXd ChainSet::pooled() const {
  const auto m = static_cast<Eigen::Index>(draws_per_chain());
  Eigen::MatrixXd out(m * static_cast<Eigen::Index>(n_chains()), static_cast<Eigen::Index>(dimension()));
  for (std::size_t c = 0; c < chains.size(); ++c) {
    out.middleRows(static_cast<Eigen::Index>(c) * m, m) = chains[c].draws;
  }
  return out;
}

std::vector<double> ChainSet::coordinate(std::size_t chain, std::size_t j) const {
  const auto& draws = chains.at(chain).draws;
  std::vector<double> out(static_cast<std::size_t>(draws.rows()));
  for (Eigen::Index r = 0; r < draws.rows(); ++r) out[static_cast<std::size_t>(r)] = draws(r, static_cast<Eigen::Index>(j));
  return out;
}

Chain run_chain(const TargetFn& log_target, const Eigen::VectorXd& start, const Eigen::MatrixXd& proposal_factor,
                const McmcConfig& config, std::uint64_t chain_index) {
  config.validate();
  const Eigen::Index p = start.size();
  if (proposal_factor.rows() != p || proposal_factor.cols() != p) {
    throw InputError("proposal factor must be p x p");
  }

  Rng rng = make_stream(config.seed, {chain_index});
  StandardNormal normal;

  const bool adaptive = std::holds_alternative<Adaptive>(config.proposal.mode);
  const double target_accept = adaptive ? std::get<Adaptive>(config.proposal.mode).target_accept : 0.0;
  double log_scale = std::log(adaptive ? std::get<Adaptive>(config.proposal.mode).initial_sigma
                                       : std::get<FixedScale>(config.proposal.mode).sigma);
  double scale = std::exp(log_scale);

  Eigen::VectorXd current = start;
  double current_lp = log_target(current);
  if (!std::isfinite(current_lp)) {
    throw NumericalError("initial point has non-finite log posterior (" + std::to_string(current_lp) + ")");
  }

  const std::size_t m = config.retained();
  Chain chain;
  chain.draws.resize(static_cast<Eigen::Index>(m), p);
  chain.log_posterior.reserve(m);
  chain.iteration.reserve(m);

  Eigen::VectorXd z(p);
  Eigen::VectorXd proposal(p);
  std::size_t burn_accepts = 0;
  std::size_t accepts = 0;
  if (config.burn_in == 0) chain.scale_at_burn_in_end = scale;

  for (std::size_t k = 1; k <= config.n_iter; ++k) {
    for (Eigen::Index j = 0; j < p; ++j) z[j] = normal(rng);
    proposal.noalias() = current + scale * (proposal_factor * z);
    const double proposal_lp = log_target(proposal);
    const double log_ratio = proposal_lp - current_lp;
    const double u = uniform01(rng);
    const bool accept = std::isfinite(proposal_lp) && std::log(u) < log_ratio;
    if (accept) {
      current = proposal;
      current_lp = proposal_lp;
    }

    if (k <= config.burn_in) {
      burn_accepts += accept ? 1 : 0;
      if (adaptive) {
        const double alpha = std::isfinite(proposal_lp) ? std::min(1.0, std::exp(std::min(0.0, log_ratio))) : 0.0;
        log_scale += std::pow(static_cast<double>(k), -kAdaptationDecay) * (alpha - target_accept);
        log_scale = std::clamp(log_scale, kMinLogScale, kMaxLogScale);
        scale = std::exp(log_scale);
      }
      if (k == config.burn_in) chain.scale_at_burn_in_end = scale;
      continue;
    }

    accepts += accept ? 1 : 0;
    if ((k - config.burn_in) % config.thin == 0) {
      const auto row = static_cast<Eigen::Index>(chain.log_posterior.size());
      chain.draws.row(row) = current.transpose();
      chain.log_posterior.push_back(current_lp);
      chain.iteration.push_back(k);
    }
  }

  chain.final_scale = scale;
  chain.accept_rate = static_cast<double>(accepts) / static_cast<double>(config.n_iter - config.burn_in);
  chain.burn_in_accept_rate =
      config.burn_in > 0 ? static_cast<double>(burn_accepts) / static_cast<double>(config.burn_in) : 0.0;
  if (chain.accept_rate < kLowAcceptance) {
    chain.warnings.push_back("acceptance rate " + std::to_string(chain.accept_rate) +
                             " below 0.01 after adaptation; retained draws are nearly constant");
  }
  return chain;
}

Eigen::MatrixXd proposal_factor(CovarianceShape shape, const Dataset& data) {
  const auto p = static_cast<Eigen::Index>(data.p());
  if (shape == CovarianceShape::Identity) return Eigen::MatrixXd::Identity(p, p);
  const auto gram = gram_cholesky(data);
  const Eigen::MatrixXd cov = static_cast<double>(data.n()) * gram.solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (cov + cov.transpose()));
  if (llt.info() != Eigen::Success) throw NumericalError("proposal covariance n (X'X)^{-1} is not positive definite");
  return llt.matrixL();
}

Eigen::VectorXd initial_point(const Dataset& data, std::uint64_t chain_index) {
  const auto p = static_cast<Eigen::Index>(data.p());
  const double sign = chain_index % 2 == 0 ? 1.0 : -1.0;
  const double offset = sign * 0.5 * (1.0 + static_cast<double>(chain_index / 2));
  Eigen::VectorXd start(p);
  const auto& X = data.X();
  const double n = static_cast<double>(data.n());
  for (Eigen::Index j = 0; j < p; ++j) {
    double sd = 1.0;
    if (j > 0) {
      const double mean = X.col(j).mean();
      const double var = (X.col(j).array() - mean).square().sum() / n;
      if (var > 0.0) sd = std::sqrt(var);
    }
    start[j] = offset / sd;
  }
  return start;
}

namespace {

Chain run_one(const LogPosterior& posterior, const Eigen::MatrixXd& factor, const Dataset& data,
              const McmcConfig& config, std::uint64_t chain_index) {
  const TargetFn target = [&posterior](const Eigen::VectorXd& beta) { return posterior(beta); };
  return run_chain(target, initial_point(data, chain_index), factor, config, chain_index);
}

}  // namespace

Chain run_chain(ModelKind kind, const PriorSpec& prior, const Dataset& data, const McmcConfig& config,
                std::uint64_t chain_index) {
  const auto table = make_table_for(data);
  const LogPosterior posterior(kind, prior, data, table);
  const auto factor = proposal_factor(config.proposal.shape, data);
  try {
    return run_one(posterior, factor, data, config, chain_index);
  } catch (...) {
    rethrow_with_chain(chain_index, std::current_exception());
  }
}

ChainSet run_chains(ModelKind kind, const PriorSpec& prior, const Dataset& data, const McmcConfig& config) {
  config.validate();
  const auto table = make_table_for(data);
  const LogPosterior posterior(kind, prior, data, table);
  const auto factor = proposal_factor(config.proposal.shape, data);

  std::vector<std::future<Chain>> pending;
  pending.reserve(config.n_chains);
  for (std::size_t c = 0; c < config.n_chains; ++c) {
    pending.push_back(std::async(std::launch::async, [&, c] { return run_one(posterior, factor, data, config, c); }));
  }
  ChainSet out;
  out.chains.reserve(config.n_chains);
  std::exception_ptr first_error;
  std::size_t failed_chain = 0;
  for (std::size_t c = 0; c < pending.size(); ++c) {
    try {
      out.chains.push_back(pending[c].get());
    } catch (...) {
      if (!first_error) {
        first_error = std::current_exception();
        failed_chain = c;
      }
    }
  }
  if (first_error) rethrow_with_chain(failed_chain, first_error);
  return out;
}

}  // namespace bellreg::mcmc
