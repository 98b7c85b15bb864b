#include "cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "bellreg/config.hpp"
#include "bellreg/data_io.hpp"
#include "bellreg/errors.hpp"
#include "bellreg/report.hpp"
#include "bellreg/simulation.hpp"
#include "bellreg/workflow.hpp"

namespace bellreg::cli {

namespace {

struct Overrides {
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> data;
  std::optional<std::string> response;
  std::vector<std::string> covariates;
  bool no_intercept = false;
  bool standardize = false;
  std::optional<std::string> model;
  std::optional<std::string> prior;
  std::optional<double> tau;
  std::optional<double> a_mu;
  std::optional<double> b_mu;
  std::optional<std::size_t> iters;
  std::optional<std::size_t> burnin;
  std::optional<std::size_t> thin;
  std::optional<std::size_t> chains;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> level;
  std::optional<double> max_rhat;
  bool allow_unconverged = false;
  std::vector<std::size_t> sim_n;
  std::vector<std::size_t> sim_p;
  std::optional<std::size_t> reps;
  std::vector<std::string> sim_priors;
  bool quiet = false;
};

RunConfig resolve(const Overrides& o) {
  RunConfig cfg;
  if (o.config_path) cfg = load_config(*o.config_path, cfg);
  cfg.command = parse_command(o.command);
  if (o.data) cfg.data_path = *o.data;
  if (o.response) cfg.response = *o.response;
  if (!o.covariates.empty()) cfg.covariates = o.covariates;
  if (o.no_intercept) cfg.add_intercept = false;
  if (o.standardize) cfg.standardize = true;
  if (o.model) {
    cfg.models = parse_models(*o.model);
  } else if (cfg.command == Command::Compare || cfg.command == Command::Gof) {
    cfg.models = {ModelKind::Bell, ModelKind::Poisson};
  }
  if (o.prior) cfg.prior.kind = PriorSettings::parse_kind(*o.prior);
  if (o.tau) cfg.prior.tau = *o.tau;
  if (o.a_mu) cfg.prior.a_mu = *o.a_mu;
  if (o.b_mu) cfg.prior.b_mu = *o.b_mu;
  if (o.iters) cfg.mcmc.n_iter = *o.iters;
  if (o.burnin) cfg.mcmc.burn_in = *o.burnin;
  if (o.thin) cfg.mcmc.thin = *o.thin;
  if (o.chains) cfg.mcmc.n_chains = *o.chains;
  if (o.seed) cfg.mcmc.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.level) cfg.level = *o.level;
  if (o.max_rhat) cfg.max_rhat = *o.max_rhat;
  if (o.allow_unconverged) cfg.allow_unconverged = true;
  if (!o.sim_n.empty()) cfg.sim.sample_sizes = o.sim_n;
  if (!o.sim_p.empty()) cfg.sim.dimensions = o.sim_p;
  if (o.reps) cfg.sim.replications = *o.reps;
  if (!o.sim_priors.empty()) {
    cfg.sim.priors.clear();
    for (const auto& p : o.sim_priors) cfg.sim.priors.push_back(PriorSettings::parse_kind(p));
  }
  cfg.validate();
  return cfg;
}

Dataset load(const RunConfig& cfg) {
  io::LoadOptions options;
  options.response = cfg.response;
  options.covariates = cfg.covariates;
  options.add_intercept = cfg.add_intercept;
  Dataset data = io::load_dataset(cfg.data_path, options);
  return cfg.standardize ? io::standardize_covariates(data) : data;
}

int run_gof(const RunConfig& cfg, std::ostream& out, bool quiet) {
  const Dataset data = load(cfg);
  const auto [bell, poisson] = gof_both(data);
  report::write_gof_outputs(bell, poisson, report::metadata_for(cfg), cfg.output_dir);
  if (!quiet) out << report::format_gof(bell, poisson);
  return kSuccess;
}

int run_fit_or_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool quiet) {
  const Dataset data = load(cfg);
  const bool with_gof = cfg.command == Command::Compare;
  CompareResult result;
  if (with_gof) {
    result = run_compare(data, cfg.prior, cfg.mcmc, cfg.models, cfg.level, cfg.acf_lag);
  } else {
    const PriorSpec prior = cfg.prior.make(data.p());
    for (const auto kind : cfg.models) {
      result.fits.push_back(fit_model(kind, prior, data, cfg.mcmc, cfg.level, cfg.acf_lag));
    }
  }
  report::write_compare_outputs(result, report::metadata_for(cfg), with_gof, cfg.output_dir);

  if (!quiet) {
    for (const auto& f : result.fits) out << report::format_posterior(f) << '\n';
    out << report::format_criteria(result.fits);
    if (with_gof) out << '\n' << report::format_gof(result.gof_bell, result.gof_poisson);
  }
  for (const auto& f : result.fits) {
    for (const auto& w : f.warnings) err << "warning: " << w << '\n';
  }

  const auto failing = unconverged(result.fits, cfg.max_rhat);
  if (!failing.empty() && !cfg.allow_unconverged) {
    err << "convergence gate failed (R-hat > " << cfg.max_rhat << "):";
    for (const auto& f : failing) err << ' ' << f;
    err << "\nrerun with more iterations or pass --allow-unconverged\n";
    return kConvergenceFailure;
  }
  return kSuccess;
}

int run_simulate(const RunConfig& cfg, std::ostream& out, bool quiet) {
  sim::StudyOptions options;
  options.grid = cfg.sim;
  options.prior_template = cfg.prior;
  options.mcmc = cfg.mcmc;
  options.level = cfg.level;
  options.acf_lag = cfg.acf_lag;
  const auto result = sim::run_simulation_study(options);
  report::write_simulation_outputs(result, report::metadata_for(cfg), cfg.output_dir);
  if (!quiet) out << report::format_simulation(result);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian Bell and Poisson regression for count data", "bellreg"};
  Overrides o;
  app.add_option("command", o.command, "fit | simulate | gof | compare")
      ->required()
      ->check(CLI::IsMember({"fit", "simulate", "gof", "compare"}));
  app.add_option("--config", o.config_path, "JSON config file; flags override its fields");
  app.add_option("--data", o.data, "input CSV with a header row");
  app.add_option("--response", o.response, "response column (default y)");
  app.add_option("--covariates", o.covariates, "covariate columns (default: all but the response)")->delimiter(',');
  app.add_flag("--no-intercept", o.no_intercept, "do not prepend an intercept column");
  app.add_flag("--standardize", o.standardize, "center and scale covariates before fitting");
  app.add_option("--model", o.model, "bell | poisson | both")->check(CLI::IsMember({"bell", "poisson", "both"}));
  app.add_option("--prior", o.prior, "gprior | flat")->check(CLI::IsMember({"gprior", "flat"}));
  app.add_option("--tau", o.tau, "flat-normal prior scale (default 100)");
  app.add_option("--a-mu", o.a_mu, "G-prior hyperparameter a_mu (default 1)");
  app.add_option("--b-mu", o.b_mu, "G-prior hyperparameter b_mu (default 1)");
  app.add_option("--iters", o.iters, "MCMC iterations per chain (default 50000)");
  app.add_option("--burnin", o.burnin, "burn-in iterations (default 10000)");
  app.add_option("--thin", o.thin, "keep every k-th post-burn-in draw (default 20)");
  app.add_option("--chains", o.chains, "number of chains (default 2)");
  app.add_option("--seed", o.seed, "master random seed");
  app.add_option("--out", o.out, "output directory (default out)");
  app.add_option("--level", o.level, "HPD credibility level (default 0.95)");
  app.add_option("--max-rhat", o.max_rhat, "R-hat convergence gate (default 1.1)");
  app.add_flag("--allow-unconverged", o.allow_unconverged, "do not fail when the R-hat gate trips");
  app.add_option("--n", o.sim_n, "simulate: sample sizes")->delimiter(',');
  app.add_option("--p", o.sim_p, "simulate: numbers of columns including the intercept")->delimiter(',');
  app.add_option("--reps", o.reps, "simulate: replications per cell (default 20)");
  app.add_option("--sim-priors", o.sim_priors, "simulate: priors to compare (default gprior,flat)")->delimiter(',');
  app.add_flag("--quiet", o.quiet, "suppress console tables");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kInputError;
  }

  try {
    const RunConfig cfg = resolve(o);
    switch (cfg.command) {
      case Command::Gof: return run_gof(cfg, out, o.quiet);
      case Command::Simulate: return run_simulate(cfg, out, o.quiet);
      case Command::Fit:
      case Command::Compare: return run_fit_or_compare(cfg, out, err, o.quiet);
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConvergenceError& e) {
    err << "convergence failure: " << e.what() << '\n';
    return kConvergenceFailure;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kSuccess;
}

}  // namespace bellreg::cli
