#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "bellreg/bell.hpp"
#include "bellreg/errors.hpp"
#include "bellreg/model.hpp"
#include "bellreg/specfun.hpp"
#include "oracles.hpp"

using namespace bellreg;

namespace {

Dataset one_row(std::uint64_t y, std::vector<double> row) {
  Eigen::MatrixXd X(1, static_cast<Eigen::Index>(row.size()));
  for (std::size_t j = 0; j < row.size(); ++j) X(0, static_cast<Eigen::Index>(j)) = row[j];
  return Dataset({y}, X);
}

// Datasets need n >= p, so multi-column single-row cases repeat the row.
Dataset repeated_row(std::vector<double> row) {
  const auto p = static_cast<Eigen::Index>(row.size());
  Eigen::MatrixXd X(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = row[static_cast<std::size_t>(j)];
  return Dataset(std::vector<std::uint64_t>(static_cast<std::size_t>(p), 0), X);
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Dataset small_design() {
  Eigen::MatrixXd X(6, 3);
  X << 1, 0.2, -1.0,
       1, 1.5, 0.3,
       1, -0.7, 0.8,
       1, 0.1, 0.0,
       1, 2.2, -0.4,
       1, -1.1, 1.9;
  return Dataset({0, 3, 1, 2, 7, 0}, X);
}

const specfun::LogBellTable& table() {
  static const specfun::LogBellTable t(200);
  return t;
}

}  // namespace

TEST(Dataset, Validation) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(3, 2);
  X(0, 1) = 0.5;
  EXPECT_NO_THROW(Dataset({1, 2, 3}, X));
  EXPECT_THROW(Dataset({1, 2}, X), InputError);
  Eigen::MatrixXd bad = X;
  bad(1, 0) = 2.0;
  EXPECT_THROW(Dataset({1, 2, 3}, bad), InputError);
  bad = X;
  bad(2, 1) = NAN;
  EXPECT_THROW(Dataset({1, 2, 3}, bad), InputError);
  EXPECT_THROW(Dataset({1}, Eigen::MatrixXd::Ones(1, 2)), InputError);
  const Dataset d({1, 2, 3}, X);
  EXPECT_EQ(d.max_count(), 3u);
  EXPECT_DOUBLE_EQ(d.mean_count(), 2.0);
  EXPECT_EQ(d.column_names().front(), "(Intercept)");
}

TEST(ModelKind, Parse) {
  EXPECT_EQ(parse_model_kind("bell"), ModelKind::Bell);
  EXPECT_EQ(parse_model_kind("poisson"), ModelKind::Poisson);
  EXPECT_THROW(parse_model_kind("negbin"), InputError);
}

TEST(LinearPredictor, Examples) {
  EXPECT_NEAR(linear_predictor(repeated_row({1, 2}), vec({0.5, -0.25}))[0], 0.0, 1e-15);
  EXPECT_NEAR(linear_predictor(repeated_row({1, 1, 1}), vec({0, -0.5, 1}))[0], 0.5, 1e-15);
  EXPECT_THROW(linear_predictor(repeated_row({1, 1}), vec({1})), InputError);
}

TEST(BellLikelihood, Examples) {
  EXPECT_NEAR(bell_log_likelihood(one_row(0, {1}), vec({0}), table()), -0.7632228, 1e-7);
  EXPECT_NEAR(bell_log_likelihood(one_row(2, {1}), vec({1}), table()), 1.0 - std::numbers::e, 1e-12);

  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 1);
  const Dataset twice({0, 0}, X);
  EXPECT_NEAR(bell_log_likelihood(twice, vec({0}), table()),
              2.0 * bell_log_likelihood(one_row(0, {1}), vec({0}), table()), 1e-14);
}

TEST(BellLikelihood, SingleRowMatchesPmf) {
  for (std::uint64_t y : {0u, 1u, 4u, 17u}) {
    for (double b : {-2.0, -0.3, 0.0, 0.8, 2.5}) {
      const double theta = specfun::lambert_w0(std::exp(b));
      EXPECT_NEAR(bell_log_likelihood(one_row(y, {1}), vec({b}), table()),
                  bell::log_pmf(y, bell::BellParam(theta), table()), 1e-12);
    }
  }
}

TEST(BellLikelihood, AdditiveOverRowPartitions) {
  const Dataset d = small_design();
  const auto beta = vec({0.3, 0.2, -0.1});
  const auto& y = d.y();
  const Dataset head({y.begin(), y.begin() + 3}, d.X().topRows(3));
  const Dataset tail({y.begin() + 3, y.end()}, d.X().bottomRows(3));
  const double parts = bell_log_likelihood(head, beta, table()) + bell_log_likelihood(tail, beta, table());
  EXPECT_NEAR(bell_log_likelihood(d, beta, table()), parts, 1e-10);
  EXPECT_NEAR(pointwise_log_likelihood(ModelKind::Bell, d, beta, table()).sum(), parts, 1e-10);
}

TEST(BellLikelihood, DependsOnlyOnPredictor) {
  Eigen::MatrixXd X(4, 3);
  X.col(0).setOnes();
  X.col(1).setConstant(2.0);
  X.col(2).setConstant(-1.0);
  const Dataset d({0, 1, 5, 2}, X);
  // both give eta = 0.7
  EXPECT_EQ(bell_log_likelihood(d, vec({0.7, 0.0, 0.0}), table()),
            bell_log_likelihood(d, vec({0.2, 0.5, 0.5}), table()));
}

TEST(BellLikelihood, TableMustCoverData) {
  const specfun::LogBellTable tiny(3);
  EXPECT_THROW(bell_log_likelihood(one_row(4, {1}), vec({0}), tiny), InputError);
  EXPECT_GE(make_table_for(small_design()).max_index(), 7u);
}

TEST(BellLikelihood, EtaGuard) {
  EXPECT_EQ(bell_log_likelihood(one_row(1, {1}), vec({kEtaLimit + 1}), table()), -INFINITY);
  EXPECT_TRUE(std::isfinite(bell_log_likelihood(one_row(1, {1}), vec({-kEtaLimit + 1}), table())));
  EXPECT_EQ(poisson_log_likelihood(one_row(1, {1}), vec({-kEtaLimit - 1})), -INFINITY);
}

TEST(PoissonLikelihood, Examples) {
  EXPECT_NEAR(poisson_log_likelihood(one_row(0, {1}), vec({0})), -1.0, 1e-15);
  EXPECT_NEAR(poisson_log_likelihood(one_row(3, {1}), vec({std::log(3.0)})), -1.495923, 1e-6);
  EXPECT_NEAR(poisson_log_likelihood(one_row(3, {1}), vec({std::log(3.0)})),
              3 * std::log(3.0) - 3 - std::log(6.0), 1e-13);
  const Dataset d = small_design();
  Eigen::MatrixXd X2(12, 3);
  X2 << d.X(), d.X();
  std::vector<std::uint64_t> y2 = d.y();
  y2.insert(y2.end(), d.y().begin(), d.y().end());
  const auto beta = vec({0.1, -0.2, 0.3});
  EXPECT_NEAR(poisson_log_likelihood(Dataset(y2, X2), beta), 2.0 * poisson_log_likelihood(d, beta), 1e-12);
}

TEST(GPrior, Hyperparameters) {
  const GPrior gp(1.0, 1.0, 3);
  EXPECT_NEAR(gp.M(), -0.5772157, 1e-7);
  EXPECT_NEAR(gp.g(), 0.5483114, 1e-7);
  for (double a : {0.3, 1.0, 2.5}) {
    for (double b : {0.5, 1.0, 4.0}) {
      const GPrior g(a, b, 5);
      EXPECT_DOUBLE_EQ(g.M(), specfun::digamma(a) + std::log(b));
      EXPECT_DOUBLE_EQ(g.g(), specfun::trigamma(a) / 5.0);
    }
  }
  EXPECT_THROW(GPrior(0.0, 1.0, 3), InputError);
  EXPECT_THROW(GPrior(1.0, -1.0, 3), InputError);
}

TEST(LogPrior, GPriorMatchesDenseNormal) {
  const Dataset d = small_design();
  const GPrior gp(1.5, 2.0, 3);
  const double n = static_cast<double>(d.n());
  const Eigen::MatrixXd cov = gp.g() * n * (d.X().transpose() * d.X()).inverse();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  mean[0] = gp.M();
  for (const auto& beta : {vec({0, 0, 0}), vec({0.4, -1, 2}), mean}) {
    const Eigen::VectorXd r = beta - mean;
    const double expect = -1.5 * std::log(2 * std::numbers::pi) - 0.5 * std::log(cov.determinant()) -
                          0.5 * r.dot(cov.inverse() * r);
    EXPECT_NEAR(log_prior(gp, beta, d), expect, 1e-10);
    EXPECT_NEAR(LogPosterior(ModelKind::Bell, gp, d, table()).log_prior(beta), expect, 1e-10);
  }
  // mode at the prior mean
  EXPECT_GT(log_prior(gp, mean, d), log_prior(gp, mean + vec({1e-3, 0, 0}), d));
}

TEST(LogPrior, FlatNormal) {
  const Dataset d = small_design();
  const FlatNormal flat{100.0};
  const double expect0 = -1.5 * std::log(2 * std::numbers::pi * 1e4);
  EXPECT_NEAR(log_prior(flat, vec({0, 0, 0}), d), expect0, 1e-12);
  EXPECT_NEAR(log_prior(flat, vec({10, 0, 0}), d), expect0 - 100.0 / 2e4, 1e-12);
  EXPECT_THROW(log_prior(FlatNormal{0.0}, vec({0, 0, 0}), d), InputError);
}

TEST(LogPrior, SingularGramRejected) {
  Eigen::MatrixXd X(4, 3);
  X << 1, 1, 2,
       1, 2, 4,
       1, 3, 6,
       1, 4, 8;
  const Dataset d({0, 1, 2, 3}, X);
  try {
    (void)log_prior(GPrior(1, 1, 3), vec({0, 0, 0}), d);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("collinear"), std::string::npos);
  }
}

TEST(LogPosterior, Additivity) {
  const Dataset d = small_design();
  const GPrior gp(1, 1, 3);
  const LogPosterior post(ModelKind::Poisson, gp, d, table());
  for (const auto& beta : {vec({0, 0, 0}), vec({0.5, -0.2, 0.1})}) {
    for (auto kind : {ModelKind::Bell, ModelKind::Poisson}) {
      EXPECT_DOUBLE_EQ(log_posterior(kind, gp, d, beta, table()) - log_prior(gp, beta, d),
                       log_likelihood(kind, d, beta, table()));
    }
    EXPECT_NEAR(post(beta), log_posterior(ModelKind::Poisson, gp, d, beta, table()), 1e-10);
  }
}

TEST(LogPosterior, FlatLimitTracksLikelihood) {
  const Dataset d = small_design();
  const FlatNormal flat{1e8};
  const auto a = vec({0.1, 0.2, 0.3});
  const auto b = vec({-0.4, 0.5, 0.0});
  const double dpost = log_posterior(ModelKind::Bell, flat, d, a, table()) -
                       log_posterior(ModelKind::Bell, flat, d, b, table());
  const double dlik = bell_log_likelihood(d, a, table()) - bell_log_likelihood(d, b, table());
  EXPECT_NEAR(dpost, dlik, 1e-6);
}
