#pragma once

// Independent reference implementations used only by tests. None of these share
// code with the library: exact integers, 50-digit floats and brute-force sums.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;
using boost::multiprecision::cpp_int;

// Bell numbers through the Bell triangle, exact.
inline std::vector<cpp_int> bell_numbers(std::size_t max_index) {
  std::vector<cpp_int> out{1};
  std::vector<cpp_int> row{1};
  while (out.size() <= max_index) {
    std::vector<cpp_int> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    out.push_back(next.front());
    row = std::move(next);
  }
  return out;
}

inline double log_of(const cpp_int& v) {
  return static_cast<double>(boost::multiprecision::log(Big(v)));
}

inline cpp_int factorial(unsigned n) {
  cpp_int f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

// Newton on w e^w - x in 50-digit arithmetic.
inline double lambert_w0(double x) {
  const Big bx(x);
  Big w = x < 1.0 ? Big(x) : Big(std::log(x));
  for (int i = 0; i < 200; ++i) {
    const Big ew = boost::multiprecision::exp(w);
    const Big step = (w * ew - bx) / (ew * (w + 1));
    w -= step;
    if (boost::multiprecision::abs(step) < Big("1e-40") * (1 + boost::multiprecision::abs(w))) break;
  }
  return static_cast<double>(w);
}

inline double digamma(double x) { return static_cast<double>(boost::math::digamma(Big(x))); }
inline double trigamma(double x) { return static_cast<double>(boost::math::trigamma(Big(x))); }

// Bell variate via its compound-Poisson form: N ~ Poisson(e^theta - 1) blocks,
// each a zero-truncated Poisson(theta) block size.
inline std::uint64_t bell_compound_poisson(double theta, std::mt19937_64& rng) {
  std::poisson_distribution<std::uint64_t> blocks(std::expm1(theta));
  std::poisson_distribution<std::uint64_t> size(theta);
  std::uint64_t total = 0;
  for (auto k = blocks(rng); k > 0; --k) {
    std::uint64_t s = 0;
    while (s == 0) s = size(rng);
    total += s;
  }
  return total;
}

struct Moments {
  double mean;
  double sd;
};

// Posterior mean and SD of a scalar parameter by trapezoid quadrature of an
// unnormalized log density on [lo, hi].
inline Moments grid_moments(const std::function<double(double)>& log_density, double lo, double hi,
                            std::size_t points) {
  std::vector<double> x(points), lw(points);
  double top = -INFINITY;
  for (std::size_t i = 0; i < points; ++i) {
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    lw[i] = log_density(x[i]);
    top = std::max(top, lw[i]);
  }
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double w = std::exp(lw[i] - top) * ((i == 0 || i + 1 == points) ? 0.5 : 1.0);
    z += w;
    m1 += w * x[i];
    m2 += w * x[i] * x[i];
  }
  const double mean = m1 / z;
  return {mean, std::sqrt(m2 / z - mean * mean)};
}

}  // namespace oracle
