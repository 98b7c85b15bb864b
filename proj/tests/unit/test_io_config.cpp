#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "bellreg/config.hpp"
#include "bellreg/data_io.hpp"
#include "bellreg/errors.hpp"
#include "bellreg/report.hpp"
#include "bellreg/simulation.hpp"
#include "bellreg/workflow.hpp"
#include "json.hpp"

using namespace bellreg;
namespace fs = std::filesystem;

namespace {

Dataset parse(const std::string& text, io::LoadOptions opts = {}) {
  std::istringstream in(text);
  return io::parse_dataset(in, opts, "test.csv");
}

std::string error_of(const std::string& text, io::LoadOptions opts = {}) {
  try {
    (void)parse(text, opts);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bellreg_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Csv, ParsesHeaderQuotesAndBom) {
  const auto d = parse("\xEF\xBB\xBFx1,\"y\",x2\r\n0.5,3,1\n-1.25,0,2.0\n3,1,0\n\n");
  EXPECT_EQ(d.n(), 3u);
  EXPECT_EQ(d.p(), 3u);
  EXPECT_EQ(d.y(), (std::vector<std::uint64_t>{3, 0, 1}));
  EXPECT_EQ(d.X()(1, 1), -1.25);
  EXPECT_EQ(d.column_names(), (std::vector<std::string>{"(Intercept)", "x1", "x2"}));
}

TEST(Csv, SelectsColumns) {
  io::LoadOptions opts;
  opts.response = "count";
  opts.covariates = {"b"};
  const auto d = parse("a,b,count\n1,2,3\n4,5,6\n", opts);
  EXPECT_EQ(d.p(), 2u);
  EXPECT_EQ(d.X()(1, 1), 5.0);
  EXPECT_EQ(d.y()[1], 6u);
}

TEST(Csv, IntegerValuedResponseAccepted) {
  EXPECT_EQ(parse("y,x\n2.0,1\n3,2\n").y()[0], 2u);
}

TEST(Csv, ErrorsAreSpecific) {
  EXPECT_NE(error_of("").find("no header row"), std::string::npos);
  EXPECT_NE(error_of("y,x\n").find("no rows"), std::string::npos);
  EXPECT_NE(error_of("x1,x2\n1,2\n").find("missing column 'y'"), std::string::npos);
  const auto frac = error_of("y,x\n1,0\n2.5,1\n");
  EXPECT_NE(frac.find("row 2"), std::string::npos) << frac;
  EXPECT_NE(frac.find("y"), std::string::npos);
  EXPECT_FALSE(error_of("y,x\n-1,0\n2,1\n").empty());
  EXPECT_NE(error_of("y,x\n1,nan\n2,1\n").find("x"), std::string::npos);
  EXPECT_FALSE(error_of("y,x\n1,0,7\n").empty());
  EXPECT_THROW(io::load_dataset("/nonexistent/file.csv"), InputError);
}

TEST(Csv, WriteThenReadIsExact) {
  auto rng = make_stream(1, {});
  const auto d = sim::simulate_dataset(30, 3, sim::default_beta_truth(3), rng);
  std::stringstream buf;
  io::write_dataset_csv(buf, d);
  const auto back = io::parse_dataset(buf);
  EXPECT_EQ(back.y(), d.y());
  EXPECT_TRUE(back.X() == d.X());
}

TEST(Csv, Standardize) {
  const auto d = io::standardize_covariates(parse("y,x\n1,1\n2,3\n3,5\n"));
  EXPECT_NEAR(d.X().col(1).mean(), 0.0, 1e-15);
  EXPECT_NEAR(d.X().col(1).squaredNorm() / 2.0, 1.0, 1e-12);  // sample SD
  EXPECT_TRUE(d.X().col(0) == Eigen::VectorXd::Ones(3));
  EXPECT_THROW(io::standardize_covariates(parse("y,x\n1,2\n2,2\n")), InputError);
}

TEST(Config, JsonOverridesDefaults) {
  const auto cfg = config_from_json(R"({
    "command": "compare", "data": "d.csv", "model": "both",
    "prior": {"type": "flat", "tau": 10},
    "mcmc": {"iters": 1000, "burnin": 100, "thin": 3, "chains": 4, "shape": "identity"},
    "seed": 9, "level": 0.9, "max_rhat": 1.2, "out": "o"})");
  EXPECT_EQ(cfg.command, Command::Compare);
  EXPECT_EQ(cfg.models.size(), 2u);
  EXPECT_EQ(cfg.prior.kind, PriorSettings::Kind::Flat);
  EXPECT_EQ(cfg.prior.tau, 10.0);
  EXPECT_EQ(cfg.mcmc.n_iter, 1000u);
  EXPECT_EQ(cfg.mcmc.n_chains, 4u);
  EXPECT_EQ(cfg.mcmc.proposal.shape, mcmc::CovarianceShape::Identity);
  EXPECT_EQ(cfg.mcmc.seed, 9u);
  EXPECT_EQ(cfg.max_rhat, 1.2);
  EXPECT_EQ(cfg.output_dir, "o");
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(config_from_json(R"({"iterations": 5})"), InputError);
  EXPECT_THROW(config_from_json(R"({"mcmc": {"iters": "many"}})"), InputError);
  EXPECT_THROW(config_from_json("{not json"), InputError);
  EXPECT_THROW(config_from_json(R"({"prior": {"type": "horseshoe"}})"), InputError);
  RunConfig cfg;
  cfg.command = Command::Fit;
  EXPECT_THROW(cfg.validate(), InputError);  // no data path
}

TEST(Config, RoundTripAndHash) {
  RunConfig cfg;
  cfg.command = Command::Simulate;
  cfg.prior.a_mu = 0.3141592653589793;
  cfg.level = 0.9;
  cfg.sim.sample_sizes = {40, 80};
  cfg.sim.beta_truth = std::vector<double>{0.1, -0.2, 0.30000000000000004};
  cfg.mcmc.seed = 123456789012345ULL;
  const auto json = config_to_json(cfg);
  const auto back = config_from_json(json);
  EXPECT_EQ(config_to_json(back), json);
  EXPECT_EQ(back.prior.a_mu, cfg.prior.a_mu);
  EXPECT_EQ(*back.sim.beta_truth, *cfg.sim.beta_truth);
  EXPECT_EQ(config_hash(back), config_hash(cfg));

  RunConfig moved = cfg;
  moved.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(moved), config_hash(cfg));
  RunConfig reseeded = cfg;
  reseeded.mcmc.seed += 1;
  EXPECT_NE(config_hash(reseeded), config_hash(cfg));
}

TEST(Report, CompareJsonRoundTrips) {
  auto rng = make_stream(2, {});
  const auto d = sim::simulate_dataset(40, 2, std::vector<double>{0.2, 0.5}, rng);
  mcmc::McmcConfig mc;
  mc.n_iter = 3000;
  mc.burn_in = 1000;
  mc.thin = 4;
  const auto result = run_compare(d, PriorSettings{}, mc, {ModelKind::Bell, ModelKind::Poisson}, 0.95, 20);
  RunConfig cfg;
  cfg.command = Command::Compare;
  cfg.data_path = "x.csv";
  const auto dir = scratch("report");
  report::write_compare_outputs(result, report::metadata_for(cfg), true, dir);

  std::ifstream in(dir / "report.json");
  const auto doc = nlohmann::json::parse(in);
  ASSERT_EQ(doc["fits"].size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& f = doc["fits"][k];
    const auto& fit = result.fits[k];
    EXPECT_EQ(f["criteria"]["lmpl"].get<double>(), fit.criteria.lmpl);
    EXPECT_EQ(f["criteria"]["dic"].get<double>(), fit.criteria.dic);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& c = f["posterior"]["coefficients"][j];
      EXPECT_NEAR(c["mean"].get<double>(), fit.posterior.coefficients[j].mean, 1e-12);
      EXPECT_NEAR(c["hpd_lower"].get<double>(), fit.posterior.coefficients[j].hpd.lower, 1e-12);
    }
  }
  EXPECT_NEAR(doc["gof"]["bell"]["statistic"].get<double>(), result.gof_bell.statistic, 1e-12);
  EXPECT_EQ(doc["config_hash"].get<std::string>(), config_hash(cfg));
  for (const char* name : {"table_posterior.csv", "table_criteria.csv", "table_diagnostics.csv", "table_gof.csv",
                           "chain_bell_0.csv", "chain_bell_1.csv", "chain_poisson_0.csv", "chain_poisson_1.csv"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  std::ifstream chain(dir / "chain_bell_1.csv");
  std::string header;
  std::getline(chain, header);
  EXPECT_EQ(header.rfind("iteration,", 0), 0u) << header;
  std::size_t lines = 0;
  for (std::string line; std::getline(chain, line);) ++lines;
  EXPECT_EQ(lines, 500u);
}
