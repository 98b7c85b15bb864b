#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bellreg/bell.hpp"
#include "bellreg/errors.hpp"
#include "oracles.hpp"

namespace bell = bellreg::bell;
using bellreg::specfun::LogBellTable;

namespace {

const LogBellTable& table() {
  static const LogBellTable t(600);
  return t;
}

// Direct pmf from exact Bell integers and factorials.
double exact_pmf(unsigned y, double theta) {
  const auto b = oracle::bell_numbers(y);
  const oracle::Big ratio = oracle::Big(b[y]) / oracle::Big(oracle::factorial(y));
  return std::pow(theta, y) * std::exp(1.0 - std::exp(theta)) * static_cast<double>(ratio);
}

}  // namespace

TEST(BellParam, Validates) {
  EXPECT_THROW(bell::BellParam{0.0}, bellreg::DomainError);
  EXPECT_THROW(bell::BellParam{-1.0}, bellreg::DomainError);
  EXPECT_THROW(bell::BellParam{INFINITY}, bellreg::DomainError);
  EXPECT_THROW(bell::BellParam{701.0}, bellreg::DomainError);
  EXPECT_NO_THROW(bell::BellParam{700.0});
}

TEST(BellPmf, Examples) {
  const double one_minus_e = 1.0 - std::numbers::e;
  EXPECT_NEAR(bell::log_pmf(0, bell::BellParam(1.0), table()), one_minus_e, 1e-12);
  EXPECT_NEAR(bell::log_pmf(1, bell::BellParam(1.0), table()), one_minus_e, 1e-12);
  // 2 log 0.5 + 1 - e^0.5 + log B_2 - log 2!
  EXPECT_NEAR(bell::log_pmf(2, bell::BellParam(0.5), table()), -2.0350156, 1e-7);
  EXPECT_NEAR(bell::log_pmf(2, bell::BellParam(0.5), table()), 2 * std::log(0.5) + 1 - std::exp(0.5), 1e-14);
}

TEST(BellPmf, MatchesExactIntegerFormula) {
  for (double theta : {0.05, 0.5, 1.3, 3.0}) {
    for (unsigned y = 0; y <= 40; ++y) {
      const double expect = exact_pmf(y, theta);
      EXPECT_NEAR(std::exp(bell::log_pmf(y, bell::BellParam(theta), table())), expect, 1e-12 * expect + 1e-300)
          << theta << ' ' << y;
    }
  }
}

TEST(BellPmf, TableTooShort) {
  const LogBellTable small(3);
  EXPECT_THROW(bell::log_pmf(4, bell::BellParam(1.0), small), bellreg::InputError);
}

TEST(BellPmf, Normalizes) {
  for (double theta : {0.1, 0.5, 1.0, 2.0}) {
    const bell::BellParam t(theta);
    double total = 0.0;
    for (std::size_t y = 0; y <= table().max_index(); ++y) total += std::exp(bell::log_pmf(y, t, table()));
    EXPECT_NEAR(total, 1.0, 1e-9) << theta;
  }
}

TEST(BellMoments, Examples) {
  EXPECT_NEAR(bell::mean(bell::BellParam(1.0)), std::numbers::e, 1e-14);
  EXPECT_NEAR(bell::mean(bell::BellParam(0.5)), 0.8243606, 1e-7);
  EXPECT_NEAR(bell::variance(bell::BellParam(1.0)), 2.0 * std::numbers::e, 1e-13);
  EXPECT_NEAR(bell::variance(bell::BellParam(0.5)), 1.2365409, 1e-7);
  EXPECT_LT(bell::mean(bell::BellParam(1e-12)), 1e-11);
}

TEST(BellMoments, MatchPmfSums) {
  for (double theta : {0.1, 0.7, 2.0}) {
    const bell::BellParam t(theta);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t y = 0; y <= table().max_index(); ++y) {
      const double p = std::exp(bell::log_pmf(y, t, table()));
      m1 += p * static_cast<double>(y);
      m2 += p * static_cast<double>(y * y);
    }
    EXPECT_NEAR(m1, bell::mean(t), 1e-9);
    EXPECT_NEAR(m2 - m1 * m1, bell::variance(t), 1e-8);
  }
}

TEST(BellMoments, Overdispersed) {
  for (double theta = 1e-3; theta < 8.0; theta *= 1.7) {
    const bell::BellParam t(theta);
    EXPECT_GT(bell::variance(t), bell::mean(t));
    EXPECT_NEAR(bell::variance(t) / bell::mean(t), 1.0 + theta, 1e-12);
  }
}

TEST(BellMle, Examples) {
  EXPECT_NEAR(bell::mle_theta(std::numbers::e).theta(), 1.0, 1e-13);
  EXPECT_NEAR(bell::mle_theta(0.8243606).theta(), 0.5, 1e-7);
  EXPECT_NEAR(bell::mle_theta(101.0 / 44.0).theta(), oracle::lambert_w0(101.0 / 44.0), 1e-12);
  EXPECT_NEAR(bell::mle_theta(101.0 / 44.0).theta(), 0.91728, 5e-5);
  EXPECT_THROW(bell::mle_theta(0.0), bellreg::DomainError);
  EXPECT_THROW(bell::mle_theta(-2.0), bellreg::DomainError);
}

TEST(BellMle, InvertsMean) {
  for (double theta = 1e-4; theta <= 5.0; theta *= 1.3) {
    EXPECT_NEAR(bell::mle_theta(bell::mean(bell::BellParam(theta))).theta(), theta, 1e-9 * std::max(1.0, theta));
  }
}

TEST(BellSampler, Deterministic) {
  auto a = bellreg::make_stream(7, {1});
  auto b = bellreg::make_stream(7, {1});
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(bell::sample(bell::BellParam(1.2), a), bell::sample(bell::BellParam(1.2), b));
}

TEST(BellSampler, SmallThetaMostlyZero) {
  auto rng = bellreg::make_stream(11, {});
  int zeros = 0;
  for (int i = 0; i < 20000; ++i) zeros += bell::sample(bell::BellParam(0.01), rng) == 0;
  const double p0 = std::exp(1.0 - std::exp(0.01));
  EXPECT_NEAR(zeros / 20000.0, p0, 4.0 * std::sqrt(p0 * (1 - p0) / 20000.0));
}

TEST(BellSampler, LawMatchesPmf) {
  constexpr int kDraws = 1'000'000;
  const bell::BellParam t(1.0);
  auto rng = bellreg::make_stream(2024, {0});
  std::vector<int> counts(11, 0);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const auto y = bell::sample(t, rng);
    if (y <= 10) ++counts[y];
    sum += static_cast<double>(y);
    sum2 += static_cast<double>(y) * static_cast<double>(y);
  }
  for (unsigned y = 0; y <= 10; ++y) {
    const double p = exact_pmf(y, 1.0);
    const double se = std::sqrt(p * (1 - p) / kDraws);
    EXPECT_NEAR(counts[y] / double(kDraws), p, 4.0 * se + 1e-7) << "y = " << y;
  }
  const double mean = sum / kDraws;
  const double var = sum2 / kDraws - mean * mean;
  EXPECT_NEAR(mean, std::numbers::e, 3.0 * std::sqrt(2.0 * std::numbers::e / kDraws));
  EXPECT_NEAR(var / (2.0 * std::numbers::e), 1.0, 0.05);
}

TEST(BellSampler, AgreesWithCompoundPoisson) {
  // Two-sample comparison of frequencies against an independent construction.
  constexpr int kDraws = 400'000;
  for (double theta : {0.3, 1.5}) {
    auto rng = bellreg::make_stream(99, {static_cast<std::uint64_t>(theta * 10)});
    std::mt19937_64 other(12345 + static_cast<int>(theta * 10));
    std::vector<double> a(16, 0.0), b(16, 0.0);
    for (int i = 0; i < kDraws; ++i) {
      a[std::min<std::uint64_t>(bell::sample(bell::BellParam(theta), rng), 15)] += 1;
      b[std::min<std::uint64_t>(oracle::bell_compound_poisson(theta, other), 15)] += 1;
    }
    for (int y = 0; y < 16; ++y) {
      const double pa = a[y] / kDraws, pb = b[y] / kDraws;
      const double pooled = (a[y] + b[y]) / (2.0 * kDraws);
      const double se = std::sqrt(2.0 * pooled * (1 - pooled) / kDraws);
      EXPECT_NEAR(pa, pb, 4.5 * se + 1e-6) << "theta " << theta << " y " << y;
    }
  }
}

TEST(BellSampler, ExhaustedTableIsReported) {
  const LogBellTable tiny(2);
  auto rng = bellreg::make_stream(1, {});
  // at theta = 5 the mass above y = 2 is essentially 1
  EXPECT_THROW(bell::sample(bell::BellParam(5.0), rng, tiny), bellreg::NumericalError);
}
