#pragma once

#include <cmath>
#include <numbers>

#include "asprt/distributions.hpp"
#include "asprt/errors.hpp"

namespace asprt {

/// Standard normal CDF.  std::erfc keeps full relative accuracy in the lower
/// tail, well inside 1e-12 absolute.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

//---------------------------------------------------------------------------//
// Wald boundaries
//---------------------------------------------------------------------------//

struct Thresholds {
  double a = 0.0;  ///< upper boundary, log((1 - beta) / alpha)
  double b = 0.0;  ///< lower boundary, log(beta / (1 - alpha))
  double alpha = 0.5;
  double beta = 0.5;
};

inline Thresholds wald_thresholds(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    throw DomainError("alpha and beta must lie in (0, 1)");
  }
  return {std::log((1.0 - beta) / alpha), std::log(beta / (1.0 - alpha)), alpha,
          beta};
}

//---------------------------------------------------------------------------//
// Expected number of inferior allocations
//---------------------------------------------------------------------------//

/// N1* = (sigma_x^2 / eta_x^2 + sigma_y^2 / eta_y^2) / 2.
inline double n1_star_closed_form(const LlrMoments& m) {
  validate(m);
  return 0.5 * (m.sigma2_x / (m.eta_x * m.eta_x) +
                m.sigma2_y / (m.eta_y * m.eta_y));
}

namespace detail {

// sum_{k>=1} Phi(-c sqrt(k)), c > 0.
//
// Stops after the first k with Phi(-c sqrt(k)) < eps and k > (8/c)^2.  The
// omitted remainder is bounded through the Mills ratio Phi(-s) <= phi(s)/s:
//   sum_{j>k} Phi(-c sqrt(j)) <= int_k^inf Phi(-c sqrt(t)) dt
//                              <= (2 / c^2) Phi(-c sqrt(k)),
// which at c sqrt(k) > 8 is below 1.3e-15 / c^2.
inline double gaussian_tail_series(double c, double eps) {
  const double min_terms = (8.0 / c) * (8.0 / c);
  double sum = 0.0;
  for (double k = 1.0;; k += 1.0) {
    const double term = normal_cdf(-c * std::sqrt(k));
    sum += term;
    if (term < eps && k > min_terms) break;
  }
  return sum;
}

}  // namespace detail

/// Truncated two-sided series sum_i Phi(-eta_x/sigma_x sqrt(i))
///                         + sum_j Phi( eta_y/sigma_y sqrt(j)).
inline double n1_star_series(const LlrMoments& m, double eps = 1e-12) {
  validate(m);
  if (!(eps > 0.0)) throw DomainError("eps must be > 0");
  const double cx = m.eta_x / std::sqrt(m.sigma2_x);
  const double cy = -m.eta_y / std::sqrt(m.sigma2_y);
  return detail::gaussian_tail_series(cx, eps) + detail::gaussian_tail_series(cy, eps);
}

//---------------------------------------------------------------------------//
// Average sample number and log(PICS) leading terms
//---------------------------------------------------------------------------//

struct WaldAsn {
  double k0 = 0.0;
  double k1 = 0.0;
};

/// Wald approximations to the expected sample number of the SPRT under K0
/// and K1.  Overshoot is ignored.
inline WaldAsn asn_wald(const LlrMoments& m, const Thresholds& t) {
  validate(m);
  return {(t.b * (1.0 - t.alpha) + t.a * t.alpha) / (-m.eta_x),
          (t.b * t.beta + t.a * (1.0 - t.beta)) / (-m.eta_y)};
}

struct LogPics {
  double type_i = 0.0;   ///< eta_y * ASN_K1
  double type_ii = 0.0;  ///< -eta_x * ASN_K0
};

/// Leading terms of log(PICS); the o(ASN) remainders are not included.
inline LogPics log_pics_approx(const LlrMoments& m, const Thresholds& t) {
  const auto asn = asn_wald(m, t);
  return {m.eta_y * asn.k1, -m.eta_x * asn.k0};
}

struct AnalyticSummary {
  double n1_star_closed = 0.0;
  double n1_star_series = 0.0;
  double asn_k0 = 0.0;
  double asn_k1 = 0.0;
  double log_pics_i = 0.0;
  double log_pics_ii = 0.0;
};

inline AnalyticSummary summarize(const LlrMoments& m, const Thresholds& t,
                                 double eps = 1e-12) {
  const auto asn = asn_wald(m, t);
  const auto pics = log_pics_approx(m, t);
  return {n1_star_closed_form(m), n1_star_series(m, eps), asn.k0, asn.k1,
          pics.type_i,            pics.type_ii};
}

}  // namespace asprt
