#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "asprt/analytics.hpp"

namespace asprt {
namespace {

LlrMoments normal_pair(double d) { return llr_moments_analytic({Normal{d, 1}, Normal{0, 1}}); }

TEST(NormalCdf, KnownValues) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-15);
  EXPECT_NEAR(normal_cdf(-8.0), 6.22096057427178e-16, 1e-28);
}

TEST(Thresholds, WaldBoundaries) {
  const auto t = wald_thresholds(1e-3, 1e-3);
  EXPECT_NEAR(t.a, std::log(0.999 / 0.001), 1e-15);
  EXPECT_NEAR(t.a, 6.906754778648554, 1e-12);
  EXPECT_NEAR(t.b, -t.a, 1e-15);

  const auto u = wald_thresholds(0.05, 0.2);
  EXPECT_NEAR(u.a, std::log(0.8 / 0.05), 1e-15);
  EXPECT_NEAR(u.b, std::log(0.2 / 0.95), 1e-15);
}

TEST(Thresholds, RejectsOutOfRange) {
  for (double bad : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    EXPECT_THROW(wald_thresholds(bad, 0.1), DomainError);
    EXPECT_THROW(wald_thresholds(0.1, bad), DomainError);
  }
}

TEST(N1Star, NormalCaptions) {
  const double expected[] = {400, 100, 44.444444444444444, 25, 16};
  const double deltas[] = {0.1, 0.2, 0.3, 0.4, 0.5};
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(n1_star_closed_form(normal_pair(deltas[k])), expected[k],
                1e-10 * expected[k]);
  }
}

TEST(N1Star, PoissonCaptions) {
  // Closed form evaluated independently at double precision.
  const std::vector<std::pair<std::pair<double, double>, double>> cases{
      {{2.5, 2}, 35.85137466121554},   {{3, 2.5}, 43.8785270649544},
      {{3.5, 2.5}, 11.888077170481427}, {{2, 1}, 5.770986007762897},
      {{1.5, 0.5}, 3.641777559552139}, {{2.5, 1}, 2.9106016927677034}};
  for (const auto& [rates, n1] : cases) {
    const auto m = llr_moments_analytic({Poisson{rates.first}, Poisson{rates.second}});
    EXPECT_NEAR(n1_star_closed_form(m), n1, 1e-11);
  }
}

TEST(N1Star, ClosedFormRejectsWrongSigns) {
  EXPECT_THROW(n1_star_closed_form({-0.1, 1, -0.1, 1}), DomainError);
  EXPECT_THROW(n1_star_closed_form({0.1, 1, 0.1, 1}), DomainError);
  EXPECT_THROW(n1_star_closed_form({0.1, 0, -0.1, 1}), DomainError);
}

TEST(N1Star, SeriesMatchesBruteForce) {
  // Direct summation of 4e6 terms per side in long double.
  const std::vector<std::pair<double, double>> normal{
      {0.1, 399.5082930367822}, {0.2, 99.51658353019192}, {0.3, 43.96931337494344},
      {0.4, 24.53314667530158}, {0.5, 15.541414183294497}};
  for (const auto& [d, v] : normal) {
    EXPECT_NEAR(n1_star_series(normal_pair(d)), v, 1e-8 * v) << d;
  }
  const std::vector<std::pair<std::pair<double, double>, double>> poisson{
      {{2.5, 2}, 35.37907531242291},   {{3, 2.5}, 43.40356436397536},
      {{3.5, 2.5}, 11.436157769041985}, {{2, 1}, 5.340130185868864},
      {{1.5, 0.5}, 3.229301778810293}, {{2.5, 1}, 2.50797228958821}};
  for (const auto& [rates, v] : poisson) {
    const auto m = llr_moments_analytic({Poisson{rates.first}, Poisson{rates.second}});
    EXPECT_NEAR(n1_star_series(m), v, 1e-8 * v);
  }
}

TEST(N1Star, SeriesLargeSeparation) {
  // eta/sigma = 5 on both sides: 2 * sum_k Phi(-5 sqrt(k)).
  const LlrMoments m{5.0, 1.0, -5.0, 1.0};
  EXPECT_NEAR(n1_star_series(m), 5.733046812228882e-07, 1e-18);
}

TEST(N1Star, SeriesNeverExceedsClosedFormMuch) {
  for (double d : {0.05, 0.1, 0.7, 1.5, 3.0}) {
    const auto m = normal_pair(d);
    EXPECT_LT(n1_star_series(m), n1_star_closed_form(m));
    EXPECT_NEAR(n1_star_series(m), n1_star_closed_form(m),
                std::max(1.0, 0.05 * n1_star_closed_form(m)));
  }
}

TEST(N1Star, SeriesRejectsBadEps) {
  EXPECT_THROW(n1_star_series(normal_pair(0.5), 0.0), DomainError);
}

TEST(Asn, NormalExamples) {
  // Independent double-precision evaluations.
  const std::vector<std::pair<double, double>> half{
      {1e-2, 36.02573962505519}, {1e-3, 55.14353015273006},
      {1e-5, 92.10148165288744}, {1e-6, 110.52385541555726}};
  for (const auto& [a, k0] : half) {
    EXPECT_NEAR(asn_wald(normal_pair(0.5), wald_thresholds(a, a)).k0, k0, 1e-10);
  }
  const auto w = asn_wald(normal_pair(0.1), wald_thresholds(1e-3, 1e-3));
  EXPECT_NEAR(w.k0, 1378.5882538182511, 1e-8);
  EXPECT_NEAR(w.k1, w.k0, 1e-9);
}

TEST(Asn, LogPicsLeadingTerms) {
  const auto m = normal_pair(0.1);
  const auto t = wald_thresholds(1e-3, 1e-3);
  const auto p = log_pics_approx(m, t);
  EXPECT_NEAR(p.type_ii, -6.892941269091257, 1e-12);
  EXPECT_NEAR(p.type_i, p.type_ii, 1e-12);
  EXPECT_LT(p.type_i, 0.0);
}

TEST(Asn, GrowsAsErrorsShrink) {
  const auto m = llr_moments_analytic({Poisson{2}, Poisson{1}});
  double prev = 0.0;
  for (double a : {1e-2, 1e-3, 1e-5, 1e-7}) {
    const double k0 = asn_wald(m, wald_thresholds(a, a)).k0;
    EXPECT_GT(k0, prev);
    prev = k0;
  }
}

TEST(Summary, CollectsAll) {
  const auto m = normal_pair(0.5);
  const auto t = wald_thresholds(1e-3, 1e-3);
  const auto s = summarize(m, t);
  EXPECT_DOUBLE_EQ(s.n1_star_closed, 16.0);
  EXPECT_DOUBLE_EQ(s.n1_star_series, n1_star_series(m));
  EXPECT_DOUBLE_EQ(s.asn_k0, asn_wald(m, t).k0);
  EXPECT_DOUBLE_EQ(s.log_pics_ii, log_pics_approx(m, t).type_ii);
}

}  // namespace
}  // namespace asprt
