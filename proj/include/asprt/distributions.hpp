#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>

#include "asprt/errors.hpp"
#include "asprt/quadrature.hpp"
#include "asprt/random.hpp"

namespace asprt {

//---------------------------------------------------------------------------//
// Population models
//---------------------------------------------------------------------------//

struct Normal {
  double mean = 0.0;
  double variance = 1.0;
  bool operator==(const Normal&) const = default;
};

struct Poisson {
  double rate = 1.0;
  bool operator==(const Poisson&) const = default;
};

/// f(x) = lambda / (kappa + 1/kappa) * exp((lambda/kappa)(x - m))  for x < m
///                                   * exp(-lambda kappa (x - m))    for x >= m
struct AsymmetricLaplace {
  double location = 0.0;
  double scale = 1.0;
  double asymmetry = 1.0;
  bool operator==(const AsymmetricLaplace&) const = default;

  /// P(X < m) = kappa^2 / (1 + kappa^2).
  double left_mass() const {
    return asymmetry * asymmetry / (1.0 + asymmetry * asymmetry);
  }
  double left_rate() const { return scale / asymmetry; }
  double right_rate() const { return scale * asymmetry; }
};

using DistributionSpec = std::variant<Normal, Poisson, AsymmetricLaplace>;

/// Observations are carried as double; Poisson counts are exact integers.
using Observation = double;

inline const char* family_name(const DistributionSpec& spec) {
  switch (spec.index()) {
    case 0: return "normal";
    case 1: return "poisson";
    default: return "asymmetric_laplace";
  }
}

/// Shortest decimal that reads back to exactly `v`.
inline std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

/// Canonical text form, e.g. "normal(0.1;1)", "asymmetric_laplace(0.2;2;0.7)".
inline std::string describe(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return "normal(" + shortest(d.mean) + ";" + shortest(d.variance) + ")";
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return "poisson(" + shortest(d.rate) + ")";
        } else {
          return "asymmetric_laplace(" + shortest(d.location) + ";" +
                 shortest(d.scale) + ";" + shortest(d.asymmetry) + ")";
        }
      },
      spec);
}

inline void validate(const DistributionSpec& spec) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string(what) + " must be > 0");
    }
  };
  auto finite = [](double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
  };
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          finite(d.mean, "mean");
          positive(d.variance, "variance");
        } else if constexpr (std::is_same_v<T, Poisson>) {
          positive(d.rate, "rate");
        } else {
          finite(d.location, "location");
          positive(d.scale, "scale");
          positive(d.asymmetry, "asymmetry");
        }
      },
      spec);
}

//---------------------------------------------------------------------------//
// Densities and sampling
//---------------------------------------------------------------------------//

namespace detail {

inline double log_factorial(double k) { return std::lgamma(k + 1.0); }

inline void require_count(double x) {
  if (!(x >= 0.0) || x != std::floor(x) || !std::isfinite(x)) {
    throw DomainError("Poisson observation must be a non-negative integer");
  }
}

}  // namespace detail

/// Natural log of the density (probability mass for Poisson) at x.
inline double log_density(const DistributionSpec& spec, Observation x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          const double r = x - d.mean;
          return -0.5 * std::log(2.0 * std::numbers::pi * d.variance) -
                 0.5 * r * r / d.variance;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          detail::require_count(x);
          return x * std::log(d.rate) - d.rate - detail::log_factorial(x);
        } else {
          const double k = d.asymmetry;
          const double norm = std::log(d.scale / (k + 1.0 / k));
          const double r = x - d.location;
          return r < 0.0 ? norm + d.left_rate() * r : norm - d.right_rate() * r;
        }
      },
      spec);
}

/// One exact draw.
///
/// Normal uses Box-Muller (two uniforms, cosine branch only).  Poisson uses
/// sequential-search inversion, exact for the small rates used here.  The
/// asymmetric Laplace picks a side with its left mass and adds an
/// exponential excursion with that side's rate.
inline Observation sample(const DistributionSpec& spec, RandomStream& rng) {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          const double u1 = rng.uniform();
          const double u2 = rng.uniform();
          const double z = std::sqrt(-2.0 * std::log(u1)) *
                           std::cos(2.0 * std::numbers::pi * u2);
          return d.mean + std::sqrt(d.variance) * z;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          const double u = rng.uniform();
          double k = 0.0;
          double p = std::exp(-d.rate);
          double cdf = p;
          while (u > cdf) {
            k += 1.0;
            p *= d.rate / k;
            if (p == 0.0) break;  // remaining mass below double resolution
            cdf += p;
          }
          return k;
        } else {
          const double side = rng.uniform();
          const double e = -std::log(rng.uniform());
          return side < d.left_mass() ? d.location - e / d.left_rate()
                                      : d.location + e / d.right_rate();
        }
      },
      spec);
}

//---------------------------------------------------------------------------//
// Hypothesis pairs and log-likelihood ratio moments
//---------------------------------------------------------------------------//

/// H0: X ~ f0, Y ~ f1.  f0 is the superior population.
struct HypothesisPair {
  DistributionSpec f0;
  DistributionSpec f1;
};

inline void validate(const HypothesisPair& pair) {
  validate(pair.f0);
  validate(pair.f1);
  if (pair.f0.index() != pair.f1.index()) {
    throw DomainError("f0 and f1 must belong to the same family");
  }
  if (pair.f0 == pair.f1) {
    throw DomainError("f0 and f1 must differ");
  }
}

/// Single-observation log-likelihood ratio log(f0(u) / f1(u)).
///
/// For Poisson the common log(u!) term is cancelled algebraically, so lattice
/// sums of this statistic are not polluted by rounding of lgamma.
inline double llr(const HypothesisPair& pair, Observation u) {
  if (const auto* p0 = std::get_if<Poisson>(&pair.f0)) {
    const auto& p1 = std::get<Poisson>(pair.f1);
    detail::require_count(u);
    return u * std::log(p0->rate / p1.rate) - (p0->rate - p1.rate);
  }
  return log_density(pair.f0, u) - log_density(pair.f1, u);
}

/// Mean and variance of Z = log(f0(U)/f1(U)) under U ~ f0 (x side) and
/// U ~ f1 (y side).
struct LlrMoments {
  double eta_x = 0.0;
  double sigma2_x = 0.0;
  double eta_y = 0.0;
  double sigma2_y = 0.0;
};

inline void validate(const LlrMoments& m) {
  if (!(m.eta_x > 0.0) || !(m.eta_y < 0.0)) {
    throw DomainError("LLR moments require eta_x > 0 > eta_y");
  }
  if (!(m.sigma2_x > 0.0) || !(m.sigma2_y > 0.0)) {
    throw DomainError("LLR variances must be > 0");
  }
}

namespace detail {

// Z(x) = A x^2 + B x + C for two normals.  With x = mu + sqrt(v) e,
// Var Z = (2 A mu + B)^2 v + 2 A^2 v^2.
inline LlrMoments normal_moments(const Normal& f0, const Normal& f1) {
  const double d = f0.mean - f1.mean;
  if (f0.variance == f1.variance) {
    const double v = f0.variance;
    return {0.5 * d * d / v, d * d / v, -0.5 * d * d / v, d * d / v};
  }
  const double a = 0.5 / f1.variance - 0.5 / f0.variance;
  const double b = f0.mean / f0.variance - f1.mean / f1.variance;
  const double c = -0.5 * std::log(f0.variance / f1.variance) -
                   0.5 * f0.mean * f0.mean / f0.variance +
                   0.5 * f1.mean * f1.mean / f1.variance;
  auto under = [&](const Normal& g, double& mean, double& var) {
    mean = a * (g.mean * g.mean + g.variance) + b * g.mean + c;
    const double lin = 2.0 * a * g.mean + b;
    var = lin * lin * g.variance + 2.0 * a * a * g.variance * g.variance;
  };
  LlrMoments m;
  under(f0, m.eta_x, m.sigma2_x);
  under(f1, m.eta_y, m.sigma2_y);
  return m;
}

// Z(k) = k log(l0/l1) - (l0 - l1);  E = l log(l0/l1) - (l0 - l1),
// Var = l log^2(l0/l1) for k ~ Poisson(l).
inline LlrMoments poisson_moments(const Poisson& f0, const Poisson& f1) {
  const double r = std::log(f0.rate / f1.rate);
  const double shift = f0.rate - f1.rate;
  return {f0.rate * r - shift, f0.rate * r * r, f1.rate * r - shift,
          f1.rate * r * r};
}

}  // namespace detail

/// Closed-form moments.  Asymmetric Laplace pairs must use
/// llr_moments_numeric.
inline LlrMoments llr_moments_analytic(const HypothesisPair& pair) {
  validate(pair);
  if (const auto* n0 = std::get_if<Normal>(&pair.f0)) {
    return detail::normal_moments(*n0, std::get<Normal>(pair.f1));
  }
  if (const auto* p0 = std::get_if<Poisson>(&pair.f0)) {
    return detail::poisson_moments(*p0, std::get<Poisson>(pair.f1));
  }
  throw UnsupportedVariant(
      "no closed-form LLR moments for asymmetric_laplace; use "
      "llr_moments_numeric");
}

namespace detail {

struct TailScales {
  double left;
  double right;
};

// Twice the reciprocal tail decay rate: after the exponential substitution
// the density contributes a factor u^2, so the mapped integrand vanishes at
// u = 0 despite the 1/u Jacobian.
inline TailScales tail_scales(const DistributionSpec& spec) {
  if (const auto* n = std::get_if<Normal>(&spec)) {
    const double s = std::sqrt(n->variance);
    return {s, s};
  }
  const auto& al = std::get<AsymmetricLaplace>(spec);
  return {2.0 / al.left_rate(), 2.0 / al.right_rate()};
}

inline std::array<double, 2> breakpoints(const HypothesisPair& pair) {
  if (const auto* n0 = std::get_if<Normal>(&pair.f0)) {
    return {n0->mean, std::get<Normal>(pair.f1).mean};
  }
  return {std::get<AsymmetricLaplace>(pair.f0).location,
          std::get<AsymmetricLaplace>(pair.f1).location};
}

inline void continuous_side(const HypothesisPair& pair,
                            const DistributionSpec& under, double tol,
                            double& mean, double& var) {
  const auto cuts = breakpoints(pair);
  const auto scales = tail_scales(under);
  auto weighted = [&](auto&& g) {
    return quadrature::integrate_real_line(
               [&](double x) {
                 const double ld = log_density(under, x);
                 return ld < -745.0 ? 0.0 : g(llr(pair, x)) * std::exp(ld);
               },
               cuts, scales.left, scales.right, tol)
        .value;
  };
  mean = weighted([](double z) { return z; });
  const double m = mean;
  var = weighted([m](double z) { return (z - m) * (z - m); });
}

inline void poisson_side(const HypothesisPair& pair, const Poisson& under,
                         double tol, double& mean, double& var) {
  // Sum past the mode until the remaining mass times the (linear) growth of
  // Z^2 is negligible against tol.
  double s1 = 0.0, s2 = 0.0, tail = 1.0;
  double p = std::exp(-under.rate);
  for (double k = 0.0;; k += 1.0) {
    if (k > 0.0) p *= under.rate / k;
    const double z = llr(pair, k);
    s1 += z * p;
    s2 += z * z * p;
    tail -= p;
    if (k > under.rate && p * (1.0 + z * z) < 1e-3 * tol &&
        tail * (1.0 + z * z) < tol) {
      break;
    }
    if (k > 1e6) throw NumericError("Poisson moment series did not converge", tail);
  }
  mean = s1;
  var = s2 - s1 * s1;
}

}  // namespace detail

/// Moments by numerical integration (summation for Poisson), each to
/// absolute accuracy `tol`.  Works for every family; it is the only route for
/// asymmetric Laplace pairs.
inline LlrMoments llr_moments_numeric(const HypothesisPair& pair, double tol = 1e-10) {
  validate(pair);
  if (!(tol > 0.0)) throw DomainError("tol must be > 0");
  LlrMoments m;
  if (const auto* p0 = std::get_if<Poisson>(&pair.f0)) {
    detail::poisson_side(pair, *p0, tol, m.eta_x, m.sigma2_x);
    detail::poisson_side(pair, std::get<Poisson>(pair.f1), tol, m.eta_y, m.sigma2_y);
  } else {
    detail::continuous_side(pair, pair.f0, tol, m.eta_x, m.sigma2_x);
    detail::continuous_side(pair, pair.f1, tol, m.eta_y, m.sigma2_y);
  }
  return m;
}

/// Analytic where a closed form exists, numeric otherwise.
inline LlrMoments llr_moments(const HypothesisPair& pair) {
  if (std::holds_alternative<AsymmetricLaplace>(pair.f0)) {
    return llr_moments_numeric(pair);
  }
  return llr_moments_analytic(pair);
}

}  // namespace asprt
