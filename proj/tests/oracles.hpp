#pragma once

// Independent reference computations used by the tests.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "asprt/distributions.hpp"

namespace asprt::oracle {

template <class F>
double simpson(F f, double lo, double hi, int n) {
  if (n % 2) ++n;
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

inline double normal_pdf(double x, double mean, double var = 1.0) {
  return std::exp(-(x - mean) * (x - mean) / (2 * var)) /
         std::sqrt(2 * std::numbers::pi * var);
}

struct Empirical {
  double mean;
  double var;
  double se_mean;
  double se_var;
};

// Sample mean and variance of llr(U) for U ~ under, with large-sample
// standard errors (the variance SE uses the fourth central moment).
inline Empirical empirical_llr_moments(const HypothesisPair& pair,
                                       const DistributionSpec& under, int n,
                                       std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> z(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (auto& v : z) {
    v = llr(pair, sample(under, rng));
    sum += v;
  }
  const double mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : z) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {mean, m2, std::sqrt(m2 / n), std::sqrt((m4 - m2 * m2) / n)};
}

}  // namespace asprt::oracle
