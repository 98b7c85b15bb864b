#include "bellreg/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bellreg/data_io.hpp"
#include "bellreg/errors.hpp"
#include "json.hpp"

namespace bellreg::report {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fixed(double v, int width, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.*f", width, precision, v);
  return buf;
}

std::string padded(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

ordered_json meta_json(const RunMetadata& meta) {
  ordered_json j;
  j["command"] = meta.command;
  j["seed"] = meta.seed;
  j["config_hash"] = meta.config_hash;
  j["config"] = meta.config_json.empty() ? ordered_json(nullptr) : ordered_json::parse(meta.config_json);
  return j;
}

ordered_json gof_json(const inference::GofReport& g) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : g.cells) {
    cells.push_back({{"label", c.label}, {"observed", c.observed}, {"expected", c.expected}});
  }
  return {{"model", std::string(to_string(g.kind))},
          {"fitted_parameter", g.fitted_parameter},
          {"cells", cells},
          {"statistic", g.statistic},
          {"df", g.df},
          {"p_value", g.p_value}};
}

ordered_json fit_json(const FitResult& f) {
  ordered_json coefs = ordered_json::array();
  for (const auto& c : f.posterior.coefficients) {
    coefs.push_back({{"name", c.name},
                     {"mean", c.mean},
                     {"median", c.median},
                     {"psd", c.psd},
                     {"hpd_lower", c.hpd.lower},
                     {"hpd_upper", c.hpd.upper}});
  }
  std::vector<double> accept;
  std::vector<double> scales;
  for (const auto& c : f.chains.chains) {
    accept.push_back(c.accept_rate);
    scales.push_back(c.final_scale);
  }
  ordered_json j;
  j["model"] = std::string(to_string(f.kind));
  j["prior"] = f.prior;
  j["n_chains"] = f.chains.n_chains();
  j["draws_per_chain"] = f.chains.draws_per_chain();
  j["retained_draws"] = f.chains.n_chains() * f.chains.draws_per_chain();
  j["acceptance_rates"] = accept;
  j["proposal_scales"] = scales;
  j["warnings"] = f.warnings;
  j["posterior"] = {{"level", f.posterior.level}, {"draws", f.posterior.draws}, {"coefficients", coefs}};
  j["criteria"] = {{"lmpl", f.criteria.lmpl},
                   {"dic", f.criteria.dic},
                   {"eaic", f.criteria.eaic},
                   {"ebic", f.criteria.ebic},
                   {"mean_log_likelihood", f.criteria.mean_log_likelihood},
                   {"log_likelihood_at_mean", f.criteria.log_likelihood_at_mean},
                   {"cpo", f.criteria.cpo}};
  j["diagnostics"] = {{"rhat", f.rhat}, {"acf_lag", f.acf_lag}, {"acf_at_lag", f.acf_at_lag}};
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

std::filesystem::path prepare(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string gof_csv(const inference::GofReport& bell, const inference::GofReport& poisson) {
  std::ostringstream out;
  out << std::setprecision(17) << "count,observed,bell,poisson\n";
  for (std::size_t j = 0; j < bell.cells.size(); ++j) {
    out << bell.cells[j].label << ',' << bell.cells[j].observed << ',' << bell.cells[j].expected << ','
        << poisson.cells[j].expected << '\n';
  }
  out << "chi2,," << bell.statistic << ',' << poisson.statistic << '\n';
  out << "df,," << bell.df << ',' << poisson.df << '\n';
  out << "p_value,," << bell.p_value << ',' << poisson.p_value << '\n';
  return out.str();
}

}  // namespace

RunMetadata metadata_for(const RunConfig& config) {
  return {std::string(to_string(config.command)), config.mcmc.seed, config_hash(config), config_to_json(config)};
}

std::string compare_json(const CompareResult& result, const RunMetadata& meta, bool include_gof) {
  ordered_json doc = meta_json(meta);
  ordered_json fits = ordered_json::array();
  for (const auto& f : result.fits) fits.push_back(fit_json(f));
  doc["fits"] = fits;
  if (include_gof) doc["gof"] = {{"bell", gof_json(result.gof_bell)}, {"poisson", gof_json(result.gof_poisson)}};
  return doc.dump(2);
}

std::string simulation_json(const sim::SimResult& result, const RunMetadata& meta) {
  ordered_json doc = meta_json(meta);
  ordered_json cells = ordered_json::array();
  for (const auto& c : result.cells) {
    ordered_json reps = ordered_json::array();
    for (const auto& r : c.replications) {
      reps.push_back({{"index", r.index},
                      {"mean", r.mean},
                      {"psd", r.psd},
                      {"hpd_lower", r.hpd_lower},
                      {"hpd_upper", r.hpd_upper},
                      {"mse", r.mse},
                      {"mae", r.mae},
                      {"covered", r.covered},
                      {"rhat", r.rhat},
                      {"acf_at_lag", r.acf_at_lag}});
    }
    cells.push_back({{"n", c.n},
                     {"p", c.p},
                     {"prior", c.prior},
                     {"truth", c.truth},
                     {"replications_completed", c.replications.size()},
                     {"failures", c.failures},
                     {"estimate", c.mean_estimate},
                     {"psd", c.mean_psd},
                     {"hpd_lower", c.mean_hpd_lower},
                     {"hpd_upper", c.mean_hpd_upper},
                     {"mse", c.mse},
                     {"mae", c.mae},
                     {"coverage", c.coverage},
                     {"replications", reps}});
  }
  doc["cells"] = cells;
  return doc.dump(2);
}

std::string format_posterior(const FitResult& fit) {
  std::ostringstream out;
  out << "Posterior summary: " << to_string(fit.kind) << " model, " << fit.prior << " prior ("
      << fit.posterior.draws << " pooled draws, " << fixed(100.0 * fit.posterior.level, 0, 0) << "% HPD)\n";
  out << padded("parameter", 14) << "      mean    median       psd     lower     upper\n";
  for (const auto& c : fit.posterior.coefficients) {
    out << padded(c.name, 14) << fixed(c.mean, 10, 4) << fixed(c.median, 10, 4) << fixed(c.psd, 10, 4)
        << fixed(c.hpd.lower, 10, 4) << fixed(c.hpd.upper, 10, 4) << '\n';
  }
  return out.str();
}

std::string format_criteria(const std::vector<FitResult>& fits) {
  std::ostringstream out;
  out << padded("model", 10) << "      LMPL       DIC      EAIC      EBIC   max R-hat\n";
  for (const auto& f : fits) {
    out << padded(std::string(to_string(f.kind)), 10) << fixed(f.criteria.lmpl, 10, 4) << fixed(f.criteria.dic, 10, 4)
        << fixed(f.criteria.eaic, 10, 4) << fixed(f.criteria.ebic, 10, 4) << fixed(f.max_rhat(), 12, 4) << '\n';
  }
  return out.str();
}

std::string format_gof(const inference::GofReport& bell, const inference::GofReport& poisson) {
  std::ostringstream out;
  out << padded("count", 8) << "observed      bell   poisson\n";
  for (std::size_t j = 0; j < bell.cells.size(); ++j) {
    out << padded(bell.cells[j].label, 8) << fixed(bell.cells[j].observed, 8, 0) << fixed(bell.cells[j].expected, 10, 3)
        << fixed(poisson.cells[j].expected, 10, 3) << '\n';
  }
  out << padded("chi2", 16) << fixed(bell.statistic, 10, 3) << fixed(poisson.statistic, 10, 3) << '\n';
  out << padded("p-value", 16) << fixed(bell.p_value, 10, 3) << fixed(poisson.p_value, 10, 3) << "   (df = "
      << bell.df << ")\n";
  return out.str();
}

std::string format_simulation(const sim::SimResult& result) {
  std::ostringstream out;
  for (const auto& c : result.cells) {
    out << "n = " << c.n << ", p = " << c.p << ", prior = " << c.prior << " (" << c.replications.size()
        << " replications";
    if (!c.failures.empty()) out << ", " << c.failures.size() << " failed";
    out << ")\n";
    out << "  parameter   truth  estimate       psd     lower     upper\n";
    for (std::size_t j = 0; j < c.truth.size(); ++j) {
      out << "  beta" << padded(std::to_string(j + 1), 6) << fixed(c.truth[j], 6, 2) << fixed(c.mean_estimate[j], 10, 4)
          << fixed(c.mean_psd[j], 10, 4) << fixed(c.mean_hpd_lower[j], 10, 4) << fixed(c.mean_hpd_upper[j], 10, 4)
          << '\n';
    }
    out << "  MSE " << fixed(c.mse, 0, 4) << "  MAE " << fixed(c.mae, 0, 4) << "  HPD coverage "
        << fixed(c.coverage, 0, 3) << "\n\n";
  }
  return out.str();
}

void write_compare_outputs(const CompareResult& result, const RunMetadata& meta, bool include_gof,
                           const std::filesystem::path& out_dir) {
  const auto dir = prepare(out_dir);
  write_file(dir / "report.json", compare_json(result, meta, include_gof));

  std::ostringstream posterior, criteria, diagnostics;
  posterior << std::setprecision(17) << "model,parameter,mean,median,psd,hpd_lower,hpd_upper\n";
  criteria << std::setprecision(17) << "model,lmpl,dic,eaic,ebic\n";
  diagnostics << std::setprecision(17) << "model,parameter,rhat,acf_lag,acf\n";
  for (const auto& f : result.fits) {
    const std::string model(to_string(f.kind));
    for (std::size_t j = 0; j < f.posterior.coefficients.size(); ++j) {
      const auto& c = f.posterior.coefficients[j];
      posterior << model << ',' << c.name << ',' << c.mean << ',' << c.median << ',' << c.psd << ',' << c.hpd.lower
                << ',' << c.hpd.upper << '\n';
      diagnostics << model << ',' << c.name << ',' << (f.rhat.empty() ? std::nan("") : f.rhat[j]) << ','
                  << f.acf_lag << ',' << (f.acf_at_lag.empty() ? std::nan("") : f.acf_at_lag[j]) << '\n';
    }
    criteria << model << ',' << f.criteria.lmpl << ',' << f.criteria.dic << ',' << f.criteria.eaic << ','
             << f.criteria.ebic << '\n';
    for (std::size_t c = 0; c < f.chains.n_chains(); ++c) {
      std::ofstream chain_out(dir / ("chain_" + model + "_" + std::to_string(c) + ".csv"));
      if (!chain_out) throw InputError("cannot write chain dump under " + dir.string());
      io::write_chain_csv(chain_out, f.chains.chains[c], [&] {
        std::vector<std::string> names;
        for (const auto& coef : f.posterior.coefficients) names.push_back(coef.name);
        return names;
      }());
    }
  }
  write_file(dir / "table_posterior.csv", posterior.str());
  write_file(dir / "table_criteria.csv", criteria.str());
  write_file(dir / "table_diagnostics.csv", diagnostics.str());
  if (include_gof) write_file(dir / "table_gof.csv", gof_csv(result.gof_bell, result.gof_poisson));
}

void write_gof_outputs(const inference::GofReport& bell, const inference::GofReport& poisson, const RunMetadata& meta,
                       const std::filesystem::path& out_dir) {
  const auto dir = prepare(out_dir);
  ordered_json doc = meta_json(meta);
  doc["gof"] = {{"bell", gof_json(bell)}, {"poisson", gof_json(poisson)}};
  write_file(dir / "report.json", doc.dump(2));
  write_file(dir / "table_gof.csv", gof_csv(bell, poisson));
}

void write_simulation_outputs(const sim::SimResult& result, const RunMetadata& meta,
                              const std::filesystem::path& out_dir) {
  const auto dir = prepare(out_dir);
  write_file(dir / "report.json", simulation_json(result, meta));
  std::ostringstream estimates, errors;
  estimates << std::setprecision(17) << "n,p,prior,parameter,truth,estimate,psd,hpd_lower,hpd_upper\n";
  errors << std::setprecision(17) << "n,p,prior,mse,mae,coverage,replications,failures\n";
  for (const auto& c : result.cells) {
    for (std::size_t j = 0; j < c.truth.size(); ++j) {
      estimates << c.n << ',' << c.p << ',' << c.prior << ",beta" << j + 1 << ',' << c.truth[j] << ','
                << c.mean_estimate[j] << ',' << c.mean_psd[j] << ',' << c.mean_hpd_lower[j] << ','
                << c.mean_hpd_upper[j] << '\n';
    }
    errors << c.n << ',' << c.p << ',' << c.prior << ',' << c.mse << ',' << c.mae << ',' << c.coverage << ','
           << c.replications.size() << ',' << c.failures.size() << '\n';
  }
  write_file(dir / "table_estimates.csv", estimates.str());
  write_file(dir / "table_errors.csv", errors.str());
}

}  // namespace bellreg::report
