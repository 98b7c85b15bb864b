#include "bellreg/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bellreg/errors.hpp"
#include "json.hpp"

namespace bellreg {

namespace {

using nlohmann::json;

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

void reject_unknown(const json& object, const std::set<std::string>& allowed, std::string_view where) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw InputError("unknown key '" + key + "' in " + std::string(where) + " config");
    }
  }
}

template <typename T>
void read_if(const json& object, const char* key, T& target) {
  if (object.contains(key)) target = object.at(key).get<T>();
}

std::string shape_name(mcmc::CovarianceShape shape) {
  return shape == mcmc::CovarianceShape::Identity ? "identity" : "gram";
}

std::string models_name(const std::vector<ModelKind>& models) {
  if (models.size() == 2) return "both";
  return std::string(to_string(models.front()));
}

json prior_to_json(const PriorSettings& prior) {
  return {{"type", prior.name()}, {"tau", prior.tau}, {"a_mu", prior.a_mu}, {"b_mu", prior.b_mu}};
}

}  // namespace

PriorSpec PriorSettings::make(std::size_t p) const {
  if (kind == Kind::Flat) {
    if (!(tau > 0.0)) throw InputError("flat-normal prior needs tau > 0");
    return FlatNormal{tau};
  }
  return GPrior(a_mu, b_mu, p);
}

std::string PriorSettings::name() const { return kind == Kind::GPrior ? "gprior" : "flat"; }

PriorSettings::Kind PriorSettings::parse_kind(std::string_view text) {
  const auto t = lowercase(text);
  if (t == "gprior" || t == "g-prior" || t == "g") return Kind::GPrior;
  if (t == "flat" || t == "flat-normal" || t == "normal") return Kind::Flat;
  throw InputError("unknown prior '" + std::string(text) + "' (expected gprior or flat)");
}

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::Fit: return "fit";
    case Command::Simulate: return "simulate";
    case Command::Gof: return "gof";
    case Command::Compare: return "compare";
  }
  return "fit";
}

Command parse_command(std::string_view text) {
  const auto t = lowercase(text);
  if (t == "fit") return Command::Fit;
  if (t == "simulate") return Command::Simulate;
  if (t == "gof") return Command::Gof;
  if (t == "compare") return Command::Compare;
  throw InputError("unknown command '" + std::string(text) + "'");
}

std::vector<ModelKind> parse_models(std::string_view text) {
  if (lowercase(text) == "both") return {ModelKind::Bell, ModelKind::Poisson};
  return {parse_model_kind(text)};
}

void RunConfig::validate() const {
  mcmc.validate();
  if (command != Command::Simulate && data_path.empty()) {
    throw InputError(std::string(to_string(command)) + " needs a data file (--data)");
  }
  if (models.empty()) throw InputError("no model selected");
  if (!(level > 0.0 && level < 1.0)) throw InputError("credibility level must lie in (0, 1)");
  if (output_dir.empty()) throw InputError("output directory must not be empty");
  if (command == Command::Simulate) {
    if (sim.sample_sizes.empty() || sim.dimensions.empty() || sim.priors.empty()) {
      throw InputError("simulation grid is empty");
    }
    if (sim.replications == 0) throw InputError("simulation needs at least one replication");
    for (const auto p : sim.dimensions) {
      if (p < 2) throw InputError("simulation needs p >= 2 (intercept plus at least one covariate)");
      if (sim.beta_truth && sim.beta_truth->size() != p) {
        throw InputError("beta_truth length does not match p = " + std::to_string(p));
      }
    }
    for (const auto n : sim.sample_sizes) {
      for (const auto p : sim.dimensions) {
        if (n < p) throw InputError("simulation needs n >= p");
      }
    }
  }
}

RunConfig config_from_json(std::string_view json_text, RunConfig base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must be a JSON object");

  try {
    reject_unknown(doc,
                   {"command", "data", "response", "covariates", "intercept", "standardize", "model", "prior",
                    "mcmc", "seed", "level", "acf_lag", "max_rhat", "allow_unconverged", "sim", "out"},
                   "top-level");
    RunConfig cfg = std::move(base);
    if (doc.contains("command")) cfg.command = parse_command(doc.at("command").get<std::string>());
    read_if(doc, "data", cfg.data_path);
    read_if(doc, "response", cfg.response);
    read_if(doc, "covariates", cfg.covariates);
    read_if(doc, "intercept", cfg.add_intercept);
    read_if(doc, "standardize", cfg.standardize);
    if (doc.contains("model")) cfg.models = parse_models(doc.at("model").get<std::string>());
    read_if(doc, "seed", cfg.mcmc.seed);
    read_if(doc, "level", cfg.level);
    read_if(doc, "acf_lag", cfg.acf_lag);
    read_if(doc, "max_rhat", cfg.max_rhat);
    read_if(doc, "allow_unconverged", cfg.allow_unconverged);
    read_if(doc, "out", cfg.output_dir);

    if (doc.contains("prior")) {
      const auto& pj = doc.at("prior");
      reject_unknown(pj, {"type", "tau", "a_mu", "b_mu"}, "prior");
      if (pj.contains("type")) cfg.prior.kind = PriorSettings::parse_kind(pj.at("type").get<std::string>());
      read_if(pj, "tau", cfg.prior.tau);
      read_if(pj, "a_mu", cfg.prior.a_mu);
      read_if(pj, "b_mu", cfg.prior.b_mu);
    }

    if (doc.contains("mcmc")) {
      const auto& mj = doc.at("mcmc");
      reject_unknown(mj, {"iters", "burnin", "thin", "chains", "shape", "target_accept", "initial_sigma",
                          "fixed_sigma"},
                     "mcmc");
      read_if(mj, "iters", cfg.mcmc.n_iter);
      read_if(mj, "burnin", cfg.mcmc.burn_in);
      read_if(mj, "thin", cfg.mcmc.thin);
      read_if(mj, "chains", cfg.mcmc.n_chains);
      if (mj.contains("shape")) {
        const auto s = lowercase(mj.at("shape").get<std::string>());
        if (s == "identity") {
          cfg.mcmc.proposal.shape = mcmc::CovarianceShape::Identity;
        } else if (s == "gram") {
          cfg.mcmc.proposal.shape = mcmc::CovarianceShape::GramInverse;
        } else {
          throw InputError("unknown proposal shape '" + s + "' (expected gram or identity)");
        }
      }
      if (mj.contains("fixed_sigma") && !mj.at("fixed_sigma").is_null()) {
        cfg.mcmc.proposal.mode = mcmc::FixedScale{mj.at("fixed_sigma").get<double>()};
      } else if (mj.contains("target_accept") || mj.contains("initial_sigma")) {
        auto adaptive = std::holds_alternative<mcmc::Adaptive>(cfg.mcmc.proposal.mode)
                            ? std::get<mcmc::Adaptive>(cfg.mcmc.proposal.mode)
                            : mcmc::Adaptive{};
        read_if(mj, "target_accept", adaptive.target_accept);
        read_if(mj, "initial_sigma", adaptive.initial_sigma);
        cfg.mcmc.proposal.mode = adaptive;
      }
    }

    if (doc.contains("sim")) {
      const auto& sj = doc.at("sim");
      reject_unknown(sj, {"n", "p", "reps", "beta_truth", "priors"}, "sim");
      read_if(sj, "n", cfg.sim.sample_sizes);
      read_if(sj, "p", cfg.sim.dimensions);
      read_if(sj, "reps", cfg.sim.replications);
      if (sj.contains("beta_truth") && !sj.at("beta_truth").is_null()) {
        cfg.sim.beta_truth = sj.at("beta_truth").get<std::vector<double>>();
      }
      if (sj.contains("priors")) {
        cfg.sim.priors.clear();
        for (const auto& name : sj.at("priors")) {
          cfg.sim.priors.push_back(PriorSettings::parse_kind(name.get<std::string>()));
        }
      }
    }
    return cfg;
  } catch (const json::exception& e) {
    throw InputError(std::string("config has a field of the wrong type: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str(), std::move(base));
}

std::string config_to_json(const RunConfig& cfg) {
  json mcmc_json = {{"iters", cfg.mcmc.n_iter},
                    {"burnin", cfg.mcmc.burn_in},
                    {"thin", cfg.mcmc.thin},
                    {"chains", cfg.mcmc.n_chains},
                    {"shape", shape_name(cfg.mcmc.proposal.shape)}};
  if (const auto* fixed = std::get_if<mcmc::FixedScale>(&cfg.mcmc.proposal.mode)) {
    mcmc_json["fixed_sigma"] = fixed->sigma;
  } else {
    const auto& adaptive = std::get<mcmc::Adaptive>(cfg.mcmc.proposal.mode);
    mcmc_json["target_accept"] = adaptive.target_accept;
    mcmc_json["initial_sigma"] = adaptive.initial_sigma;
  }

  json priors = json::array();
  for (const auto kind : cfg.sim.priors) priors.push_back(kind == PriorSettings::Kind::GPrior ? "gprior" : "flat");
  json sim_json = {{"n", cfg.sim.sample_sizes},
                   {"p", cfg.sim.dimensions},
                   {"reps", cfg.sim.replications},
                   {"priors", priors},
                   {"beta_truth", cfg.sim.beta_truth ? json(*cfg.sim.beta_truth) : json(nullptr)}};

  const json doc = {{"command", std::string(to_string(cfg.command))},
                    {"data", cfg.data_path},
                    {"response", cfg.response},
                    {"covariates", cfg.covariates},
                    {"intercept", cfg.add_intercept},
                    {"standardize", cfg.standardize},
                    {"model", models_name(cfg.models)},
                    {"prior", prior_to_json(cfg.prior)},
                    {"mcmc", mcmc_json},
                    {"seed", cfg.mcmc.seed},
                    {"level", cfg.level},
                    {"acf_lag", cfg.acf_lag},
                    {"max_rhat", cfg.max_rhat},
                    {"allow_unconverged", cfg.allow_unconverged},
                    {"sim", sim_json},
                    {"out", cfg.output_dir}};
  return doc.dump();
}

std::string config_hash(const RunConfig& config) {
  // The output location does not change what is computed.
  json doc = json::parse(config_to_json(config));
  doc.erase("out");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : doc.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bellreg
