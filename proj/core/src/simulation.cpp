#include "bellreg/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "bellreg/bell.hpp"
#include "bellreg/errors.hpp"
#include "bellreg/inference.hpp"
#include "bellreg/specfun.hpp"
#include "bellreg/workflow.hpp"

namespace bellreg::sim {

namespace {

constexpr std::uint64_t kDataStream = 0xDA7A;
constexpr std::uint64_t kChainStream = 0xC4A1;

struct Task {
  std::size_t n;
  std::size_t p;
  std::size_t rep;
};

struct TaskOutcome {
  // one entry per prior in the grid
  std::vector<std::optional<Replication>> fits;
  std::vector<std::string> errors;
};

Replication replicate(const Dataset& data, const std::vector<double>& truth, const PriorSpec& prior,
                      const mcmc::McmcConfig& mcmc, double level, std::size_t acf_lag, std::size_t rep) {
  const FitResult fit = fit_model(ModelKind::Bell, prior, data, mcmc, level, acf_lag);
  Replication r;
  r.index = rep;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    const auto& c = fit.posterior.coefficients[j];
    r.mean.push_back(c.mean);
    r.psd.push_back(c.psd);
    r.hpd_lower.push_back(c.hpd.lower);
    r.hpd_upper.push_back(c.hpd.upper);
    if (c.hpd.lower <= truth[j] && truth[j] <= c.hpd.upper) ++r.covered;
  }
  const auto err = inference::mse_mae(r.mean, truth);
  r.mse = err.mse;
  r.mae = err.mae;
  r.rhat = fit.rhat;
  r.acf_at_lag = fit.acf_at_lag;
  return r;
}

void aggregate(Cell& cell) {
  const std::size_t p = cell.truth.size();
  cell.mean_estimate.assign(p, 0.0);
  cell.mean_psd.assign(p, 0.0);
  cell.mean_hpd_lower.assign(p, 0.0);
  cell.mean_hpd_upper.assign(p, 0.0);
  const std::size_t k = cell.replications.size();
  if (k == 0) {
    cell.mse = cell.mae = cell.coverage = std::nan("");
    return;
  }
  std::size_t covered = 0;
  for (const auto& r : cell.replications) {
    for (std::size_t j = 0; j < p; ++j) {
      cell.mean_estimate[j] += r.mean[j];
      cell.mean_psd[j] += r.psd[j];
      cell.mean_hpd_lower[j] += r.hpd_lower[j];
      cell.mean_hpd_upper[j] += r.hpd_upper[j];
    }
    cell.mse += r.mse;
    cell.mae += r.mae;
    covered += r.covered;
  }
  const double kd = static_cast<double>(k);
  for (std::size_t j = 0; j < p; ++j) {
    cell.mean_estimate[j] /= kd;
    cell.mean_psd[j] /= kd;
    cell.mean_hpd_lower[j] /= kd;
    cell.mean_hpd_upper[j] /= kd;
  }
  cell.mse /= kd;
  cell.mae /= kd;
  cell.coverage = static_cast<double>(covered) / (kd * static_cast<double>(p));
}

}  // namespace

std::vector<double> default_beta_truth(std::size_t p) {
  if (p == 0) throw InputError("default truth needs p >= 1");
  std::vector<double> beta(p, 1.0);
  beta[0] = 0.0;
  if (p > 1) beta[1] = -0.5;
  return beta;
}

Dataset simulate_dataset(std::size_t n, std::size_t p, std::span<const double> beta_truth, Rng& rng) {
  if (beta_truth.size() != p) throw InputError("beta_truth must have length p");
  if (n < p || p == 0) throw InputError("simulation needs n >= p >= 1");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  StandardNormal normal;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    X(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < X.cols(); ++j) X(i, j) = normal(rng);
  }
  const Eigen::Map<const Eigen::VectorXd> beta(beta_truth.data(), static_cast<Eigen::Index>(p));
  const Eigen::VectorXd eta = X * beta;
  std::vector<std::uint64_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = std::exp(eta[static_cast<Eigen::Index>(i)]);
    y[i] = bell::sample(bell::BellParam(specfun::lambert_w0(mu)), rng);
  }
  return Dataset(std::move(y), std::move(X));
}

SimResult run_simulation_study(const StudyOptions& options) {
  const auto& grid = options.grid;
  options.mcmc.validate();
  if (grid.replications == 0) throw InputError("simulation needs at least one replication");

  std::vector<Task> tasks;
  for (const auto n : grid.sample_sizes) {
    for (const auto p : grid.dimensions) {
      for (std::size_t rep = 0; rep < grid.replications; ++rep) tasks.push_back({n, p, rep});
    }
  }
  std::vector<TaskOutcome> outcomes(tasks.size());

  const auto run_task = [&](std::size_t t) {
    const auto& task = tasks[t];
    auto& outcome = outcomes[t];
    outcome.fits.resize(grid.priors.size());
    outcome.errors.resize(grid.priors.size());
    try {
      const auto truth = grid.beta_truth ? *grid.beta_truth : default_beta_truth(task.p);
      Rng rng = make_stream(options.mcmc.seed, {task.n, task.p, task.rep, kDataStream});
      const Dataset data = simulate_dataset(task.n, task.p, truth, rng);
      mcmc::McmcConfig mcmc = options.mcmc;
      mcmc.seed = derive_seed(options.mcmc.seed, {task.n, task.p, task.rep, kChainStream});
      for (std::size_t k = 0; k < grid.priors.size(); ++k) {
        try {
          PriorSettings settings = options.prior_template;
          settings.kind = grid.priors[k];
          outcome.fits[k] = replicate(data, truth, settings.make(task.p), mcmc, options.level, options.acf_lag,
                                      task.rep);
        } catch (const std::exception& e) {
          outcome.errors[k] = e.what();
        }
      }
    } catch (const std::exception& e) {
      for (auto& err : outcome.errors) err = std::string("data generation failed: ") + e.what();
    }
  };

  std::size_t workers = options.max_parallel != 0 ? options.max_parallel
                                                  : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, tasks.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < tasks.size(); t = next++) run_task(t);
    });
  }
  for (auto& th : pool) th.join();

  SimResult result;
  result.seed = options.mcmc.seed;
  for (const auto n : grid.sample_sizes) {
    for (const auto p : grid.dimensions) {
      for (std::size_t k = 0; k < grid.priors.size(); ++k) {
        Cell cell;
        cell.n = n;
        cell.p = p;
        PriorSettings settings = options.prior_template;
        settings.kind = grid.priors[k];
        cell.prior = settings.name();
        cell.truth = grid.beta_truth ? *grid.beta_truth : default_beta_truth(p);
        for (std::size_t t = 0; t < tasks.size(); ++t) {
          if (tasks[t].n != n || tasks[t].p != p) continue;
          if (outcomes[t].fits[k]) {
            cell.replications.push_back(*outcomes[t].fits[k]);
          } else {
            cell.failures.push_back("replication " + std::to_string(tasks[t].rep) + ": " + outcomes[t].errors[k]);
          }
        }
        aggregate(cell);
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

}  // namespace bellreg::sim
