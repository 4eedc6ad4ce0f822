#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "asprt/errors.hpp"

namespace asprt::quadrature {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

inline constexpr int kMaxSubdivisions = 4000;

/// Globally adaptive Gauss-Kronrod (7/15) over a set of finite intervals.
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate drops below `abs_tol` or the subdivision budget runs out, in
/// which case NumericError reports the error reached.
inline Estimate integrate_pieces(const std::function<double(double)>& f,
                                 std::span<const std::pair<double, double>> pieces,
                                 double abs_tol) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Segment {
    double lo, hi, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
  };
  auto eval = [&f](double lo, double hi) {
    double err = 0.0;
    const double v = Rule::integrate(f, lo, hi, 0, 0.0, &err);
    return Segment{lo, hi, v, err};
  };

  std::priority_queue<Segment> heap;
  Estimate total;
  for (const auto& [lo, hi] : pieces) {
    Segment s = eval(lo, hi);
    total.value += s.value;
    total.error += s.error;
    heap.push(s);
  }
  for (int i = 0; i < kMaxSubdivisions && total.error > abs_tol; ++i) {
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = eval(worst.lo, mid);
    const Segment right = eval(mid, worst.hi);
    total.value += left.value + right.value - worst.value;
    total.error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed drift from the running updates.
  total = {};
  while (!heap.empty()) {
    total.value += heap.top().value;
    total.error += heap.top().error;
    heap.pop();
  }
  if (!(total.error <= abs_tol) || !std::isfinite(total.value)) {
    throw NumericError("quadrature did not reach tolerance", total.error);
  }
  return total;
}

/// Integrate `f` over the real line, split at `breakpoints`.
///
/// Bounded pieces are integrated directly.  The two unbounded pieces are
/// mapped onto (0, 1) by x = edge -/+ scale * log(u); an integrand decaying
/// like exp(-|x - edge| / scale) or faster stays bounded near u = 0.
template <class F>
Estimate integrate_real_line(F&& f, std::span<const double> breakpoints,
                             double left_scale, double right_scale,
                             double abs_tol) {
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty()) cuts.push_back(0.0);
  const double lo_edge = cuts.front();
  const double hi_edge = cuts.back();
  const double n_inner = static_cast<double>(cuts.size() - 1);

  // Parameter t in (0, 1) is the left tail, [1, 1 + n_inner] the bounded
  // pieces and (1 + n_inner, 2 + n_inner) the right tail, so one adaptive
  // pass covers every piece.
  auto g = [&](double t) -> double {
    if (t <= 0.0 || t >= 2.0 + n_inner) return 0.0;
    if (t < 1.0) {
      const double x = lo_edge + left_scale * std::log(t);
      return f(x) * left_scale / t;
    }
    if (t <= 1.0 + n_inner) {
      const double k = std::min(std::floor(t - 1.0), n_inner - 1.0);
      const auto i = static_cast<std::size_t>(std::max(k, 0.0));
      const double lo = cuts[i];
      const double hi = cuts[std::min(i + 1, cuts.size() - 1)];
      return f(lo + (hi - lo) * (t - 1.0 - static_cast<double>(i))) * (hi - lo);
    }
    const double u = 2.0 + n_inner - t;
    const double x = hi_edge - right_scale * std::log(u);
    return f(x) * right_scale / u;
  };

  std::vector<std::pair<double, double>> pieces;
  pieces.emplace_back(0.0, 1.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    pieces.emplace_back(1.0 + static_cast<double>(i), 2.0 + static_cast<double>(i));
  }
  pieces.emplace_back(1.0 + n_inner, 2.0 + n_inner);
  return integrate_pieces(g, pieces, abs_tol);
}

}  // namespace asprt::quadrature
