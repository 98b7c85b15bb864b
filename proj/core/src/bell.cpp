#include "bellreg/bell.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellreg/errors.hpp"

namespace bellreg::bell {

namespace {
constexpr std::size_t kDefaultTableSize = 4096;
constexpr std::uint64_t kInversionCutoff = 1'000'000;
}  // namespace

BellParam::BellParam(double theta) : theta_(theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("Bell parameter theta must be positive and finite, got " + std::to_string(theta));
  }
  if (theta > kMaxTheta) {
    throw DomainError("Bell parameter theta = " + std::to_string(theta) + " exceeds " +
                      std::to_string(kMaxTheta));
  }
}

double log_pmf(std::uint64_t y, BellParam theta, const specfun::LogBellTable& table) {
  const double t = theta.theta();
  return static_cast<double>(y) * std::log(t) + (1.0 - std::exp(t)) + table.at(y) -
         specfun::log_factorial(y);
}

double mean(BellParam theta) { return theta.theta() * std::exp(theta.theta()); }

double variance(BellParam theta) { return mean(theta) * (1.0 + theta.theta()); }

std::uint64_t sample(BellParam theta, Rng& rng, const specfun::LogBellTable& table) {
  const double log_theta = std::log(theta.theta());
  const double log_p0 = 1.0 - std::exp(theta.theta());
  const double u = uniform01(rng);

  double cumulative = 0.0;
  const std::uint64_t last = std::min<std::uint64_t>(table.max_index(), kInversionCutoff);
  for (std::uint64_t y = 0; y <= last; ++y) {
    cumulative += std::exp(static_cast<double>(y) * log_theta + log_p0 + table[y] -
                           specfun::log_factorial(y));
    if (u < cumulative) return y;
  }
  throw NumericalError("Bell sampler: inversion exhausted " + std::to_string(last + 1) +
                       " terms at theta = " + std::to_string(theta.theta()) +
                       " (theta outside the practical sampling range)");
}

const specfun::LogBellTable& default_sampling_table() {
  static const specfun::LogBellTable table(kDefaultTableSize);
  return table;
}

std::uint64_t sample(BellParam theta, Rng& rng) { return sample(theta, rng, default_sampling_table()); }

BellParam mle_theta(double ybar) {
  if (!(ybar > 0.0) || !std::isfinite(ybar)) {
    throw DomainError("mle_theta: sample mean must be positive (all-zero data has no interior MLE), got " +
                      std::to_string(ybar));
  }
  return BellParam(specfun::lambert_w0(ybar));
}

}  // namespace bellreg::bell
