#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bellreg::specfun {

/// Principal branch of the Lambert W function on the nonnegative ray.
/// Solves w * exp(w) = x for w >= 0 by Halley iteration.
/// Throws DomainError for x < 0 or NaN.
double lambert_w0(double x);

/// Digamma function psi(x) for x > 0.
double digamma(double x);

/// Trigamma function psi'(x) for x > 0.
double trigamma(double x);

/// log(y!) via log-gamma.
double log_factorial(std::uint64_t y);

/// Upper regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

/// Lower regularized incomplete gamma P(a, x) = 1 - Q(a, x).
double gamma_p(double a, double x);

/// Survival function of the chi-square distribution, P(X > x) for X ~ chi2(df).
double chisq_sf(double x, int df);

/// Cumulative distribution function of the chi-square distribution.
double chisq_cdf(double x, int df);

/// Natural logs of the Bell numbers B_0 .. B_max_index.
///
/// Built by the recurrence B_{n+1} = sum_k C(n, k) B_k carried out in log
/// space with log-sum-exp, so entries stay finite far beyond the point where
/// B_y overflows a double (y ~ 218). Construction is O(max_index^2); the
/// table is immutable afterwards and safe to share between threads.
class LogBellTable {
 public:
  explicit LogBellTable(std::size_t max_index);

  std::size_t max_index() const noexcept { return values_.size() - 1; }
  std::size_t size() const noexcept { return values_.size(); }

  /// log(B_y); throws InputError when y > max_index().
  double at(std::size_t y) const;
  double operator[](std::size_t y) const noexcept { return values_[y]; }

  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

inline constexpr std::size_t kMaxBellTableIndex = 1'000'000;

LogBellTable build_log_bell_table(std::size_t max_index);

}  // namespace bellreg::specfun
