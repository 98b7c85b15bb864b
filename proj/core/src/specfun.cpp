#include "bellreg/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bellreg/errors.hpp"

namespace bellreg::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// lgamma without touching the global signgam (only positive arguments occur).
double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

constexpr std::size_t kSmallFactorials = 256;

const std::array<double, kSmallFactorials>& small_log_factorials() {
  static const std::array<double, kSmallFactorials> table = [] {
    std::array<double, kSmallFactorials> t{};
    for (std::size_t i = 0; i < kSmallFactorials; ++i) t[i] = log_gamma(static_cast<double>(i) + 1.0);
    return t;
  }();
  return table;
}

// Series for P(a, x); valid for all x but used for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double denom = a;
  for (int n = 0; n < 100000; ++n) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw NumericalError("gamma_p series did not converge for a=" + std::to_string(a) +
                       ", x=" + std::to_string(x));
}

// Modified Lentz continued fraction for Q(a, x); used for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
    }
  }
  throw NumericalError("gamma_q continued fraction did not converge for a=" +
                       std::to_string(a) + ", x=" + std::to_string(x));
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("incomplete gamma: shape must be positive");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma: argument must be nonnegative");
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw DomainError("lambert_w0: argument must be nonnegative, got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = x < std::numbers::e ? std::log1p(x) : std::log(x) - std::log(std::log(x));
  for (int iter = 0; iter < 50; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::fabs(step) <= 4.0 * kEps * std::max(std::fabs(w), std::numeric_limits<double>::min())) {
      break;
    }
  }
  return w;
}

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: argument must be positive");
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / x;
  const double r2 = r * r;
  // -sum_k B_{2k} / (2k x^{2k}), k = 1..7
  const double series =
      r2 * (1.0 / 12 -
            r2 * (1.0 / 120 -
                  r2 * (1.0 / 252 -
                        r2 * (1.0 / 240 - r2 * (1.0 / 132 - r2 * (691.0 / 32760 - r2 * (1.0 / 12)))))));
  return result + std::log(x) - 0.5 * r - series;
}

double trigamma(double x) {
  if (!(x > 0.0)) throw DomainError("trigamma: argument must be positive");
  double result = 0.0;
  while (x < 6.0) {
    result += 1.0 / (x * x);
    x += 1.0;
  }
  const double r = 1.0 / x;
  const double r2 = r * r;
  // sum_k B_{2k} / x^{2k+1}, k = 1..7
  const double series =
      r * r2 *
      (1.0 / 6 -
       r2 * (1.0 / 30 -
             r2 * (1.0 / 42 - r2 * (1.0 / 30 - r2 * (5.0 / 66 - r2 * (691.0 / 2730 - r2 * (7.0 / 6)))))));
  return result + r + 0.5 * r2 + series;
}

double log_factorial(std::uint64_t y) {
  if (y < kSmallFactorials) return small_log_factorials()[y];
  return log_gamma(static_cast<double>(y) + 1.0);
}

double gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double chisq_sf(double x, int df) {
  if (df < 1) throw DomainError("chisq_sf: degrees of freedom must be >= 1");
  if (!(x >= 0.0)) throw DomainError("chisq_sf: statistic must be nonnegative");
  return gamma_q(0.5 * df, 0.5 * x);
}

double chisq_cdf(double x, int df) {
  if (df < 1) throw DomainError("chisq_cdf: degrees of freedom must be >= 1");
  if (!(x >= 0.0)) throw DomainError("chisq_cdf: statistic must be nonnegative");
  return gamma_p(0.5 * df, 0.5 * x);
}

LogBellTable::LogBellTable(std::size_t max_index) {
  if (max_index > kMaxBellTableIndex) {
    throw InputError("LogBellTable: max_index " + std::to_string(max_index) + " exceeds " +
                     std::to_string(kMaxBellTableIndex));
  }
  values_.assign(max_index + 1, 0.0);
  if (max_index < 2) return;

  std::vector<double> lfact(max_index + 1);
  for (std::size_t i = 0; i <= max_index; ++i) lfact[i] = log_factorial(i);

  // log B_{n+1} = logsumexp_k [ log C(n, k) + log B_k ]
  std::vector<double> terms(max_index);
  for (std::size_t n = 1; n < max_index; ++n) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= n; ++k) {
      terms[k] = lfact[n] - lfact[k] - lfact[n - k] + values_[k];
      peak = std::max(peak, terms[k]);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) sum += std::exp(terms[k] - peak);
    values_[n + 1] = peak + std::log(sum);
  }
}

double LogBellTable::at(std::size_t y) const {
  if (y >= values_.size()) {
    throw InputError("LogBellTable: index " + std::to_string(y) + " beyond table maximum " +
                     std::to_string(max_index()));
  }
  return values_[y];
}

LogBellTable build_log_bell_table(std::size_t max_index) { return LogBellTable(max_index); }

}  // namespace bellreg::specfun
