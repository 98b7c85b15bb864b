#pragma once

#include <cstdint>

#include "bellreg/rng.hpp"
#include "bellreg/specfun.hpp"

namespace bellreg::bell {

/// Largest admissible theta; exp(theta) overflows shortly after.
inline constexpr double kMaxTheta = 700.0;

/// The Bell parameter theta, validated to be positive, finite and <= kMaxTheta.
class BellParam {
 public:
  explicit BellParam(double theta);
  double theta() const noexcept { return theta_; }

 private:
  double theta_;
};

/// log P(Y = y) = y log(theta) + 1 - exp(theta) + log B_y - log y!
double log_pmf(std::uint64_t y, BellParam theta, const specfun::LogBellTable& table);

/// E(Y) = theta * exp(theta)
double mean(BellParam theta);

/// V(Y) = E(Y) * (1 + theta)
double variance(BellParam theta);

/// Draws Y ~ Bell(theta) by sequential inversion of the cdf. The table must
/// cover every count the walk reaches; NumericalError otherwise.
std::uint64_t sample(BellParam theta, Rng& rng, const specfun::LogBellTable& table);

/// Same, using a shared process-wide table covering counts up to
/// default_sampling_table().max_index().
std::uint64_t sample(BellParam theta, Rng& rng);

const specfun::LogBellTable& default_sampling_table();

/// Moment estimate (and MLE) of theta from a sample mean: W0(ybar).
BellParam mle_theta(double ybar);

}  // namespace bellreg::bell
