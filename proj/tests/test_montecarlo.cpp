#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "asprt/montecarlo.hpp"

namespace asprt {
namespace {

ExperimentConfig normal_config(double d, double alpha, std::int64_t reps, std::uint64_t seed) {
  ExperimentConfig c;
  c.pair = {Normal{d, 1}, Normal{0, 1}};
  c.alpha = c.beta = alpha;
  c.replications = reps;
  c.master_seed = seed;
  return c;
}

void expect_same(const ExperimentSummary& a, const ExperimentSummary& b) {
  EXPECT_EQ(a.pcs, b.pcs);
  EXPECT_EQ(a.se_pcs, b.se_pcs);
  EXPECT_EQ(a.mean_n_inferior, b.mean_n_inferior);
  EXPECT_EQ(a.se_n_inferior, b.se_n_inferior);
  EXPECT_EQ(a.asn, b.asn);
  EXPECT_EQ(a.se_asn, b.se_asn);
  EXPECT_EQ(a.pcs_selection, b.pcs_selection);
  EXPECT_EQ(a.mean_total_draws, b.mean_total_draws);
}

TEST(Substreams, DeterministicAndDistinct) {
  auto a = derive_substream(42, 7);
  auto b = derive_substream(42, 7);
  auto c = derive_substream(42, 8);
  auto d = derive_substream(43, 7);
  const auto va = a.next_u64();
  EXPECT_EQ(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
  EXPECT_NE(va, d.next_u64());
}

double chi_square_p(const std::vector<double>& observed, double expected) {
  double stat = 0.0;
  for (double o : observed) stat += (o - expected) * (o - expected) / expected;
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

TEST(Substreams, UniformAcrossIndices) {
  const int n = 20000, bins = 20;
  std::vector<double> counts(bins, 0.0);
  for (int i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(derive_substream(1, i).uniform() * bins)] += 1;
  }
  EXPECT_GT(chi_square_p(counts, static_cast<double>(n) / bins), 1e-4);
}

TEST(Substreams, AdjacentIndicesIndependent) {
  // 10x10 contingency of the first uniform of replication i against i+1.
  const int n = 40000, bins = 10;
  std::vector<double> cells(bins * bins, 0.0);
  double prev = derive_substream(9, 0).uniform();
  for (int i = 1; i <= n; ++i) {
    const double cur = derive_substream(9, i).uniform();
    cells[static_cast<std::size_t>(prev * bins) * bins + static_cast<std::size_t>(cur * bins)] += 1;
    prev = cur;
  }
  EXPECT_GT(chi_square_p(cells, static_cast<double>(n) / (bins * bins)), 1e-4);
}

TEST(Substreams, ForkedStreamsIndependent) {
  const int n = 40000, bins = 10;
  std::vector<double> cells(bins * bins, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto s = derive_substream(3, i);
    auto x = s.fork(1), y = s.fork(2);
    cells[static_cast<std::size_t>(x.uniform() * bins) * bins +
          static_cast<std::size_t>(y.uniform() * bins)] += 1;
  }
  EXPECT_GT(chi_square_p(cells, static_cast<double>(n) / (bins * bins)), 1e-4);
}

TEST(Aggregate, MeansAndStandardErrors) {
  std::vector<TrialOutcome> v(4);
  const std::int64_t totals[] = {10, 20, 30, 40};
  for (int i = 0; i < 4; ++i) {
    v[i].n_total = totals[i];
    v[i].steps_statistic = totals[i] / 2;
    v[i].n_inferior = i;
    v[i].confirmed = i < 3;
    v[i].correct = true;
  }
  const auto s = aggregate(v, Procedure::Adaptive);
  EXPECT_EQ(s.replications, 4);
  EXPECT_DOUBLE_EQ(s.asn, 25.0);
  // sample sd of {10,20,30,40} is sqrt(500/3)
  EXPECT_NEAR(s.se_asn, std::sqrt(500.0 / 3.0) / 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.pcs, 0.75);
  // sample variance of {1,1,1,0} is 0.25
  EXPECT_NEAR(s.se_pcs, 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(s.pcs_selection, 1.0);
  EXPECT_DOUBLE_EQ(s.se_pcs_selection, 0.0);
  EXPECT_DOUBLE_EQ(s.mean_n_inferior, 1.5);

  const auto c = aggregate(v, Procedure::Classical);
  EXPECT_DOUBLE_EQ(c.asn, 12.5);
  EXPECT_DOUBLE_EQ(c.mean_total_draws, 25.0);

  const auto one = aggregate({v[0]}, Procedure::Adaptive);
  EXPECT_EQ(one.se_asn, 0.0);
}

TEST(Experiment, IndependentOfThreadCount) {
  const auto cfg = normal_config(0.3, 1e-3, 300, 11);
  const auto a = run_experiment(cfg, 1);
  const auto b = run_experiment(cfg, 4);
  const auto c = run_experiment(cfg, 7);
  expect_same(a, b);
  expect_same(a, c);
}

TEST(Experiment, SeedChangesResult) {
  const auto a = run_experiment(normal_config(0.5, 1e-3, 200, 1), 2);
  const auto b = run_experiment(normal_config(0.5, 1e-3, 200, 2), 2);
  EXPECT_NE(a.asn, b.asn);
}

TEST(Experiment, AnalyticColumns) {
  const auto s = run_experiment(normal_config(0.5, 1e-3, 20, 1), 1);
  EXPECT_DOUBLE_EQ(s.n1_star_closed, 16.0);
  EXPECT_NEAR(s.n1_star_series, 15.541414183294497, 1e-9);
  EXPECT_NEAR(s.asn_wald_k0, 55.14353015273006, 1e-10);
}

TEST(Experiment, ReproducesReferenceCell) {
  // (0.5, 0), alpha = beta = 1e-3: E(N1) 13.42, ASN 66.49.
  const auto s = run_experiment(normal_config(0.5, 1e-3, 1000, 1), 2);
  EXPECT_NEAR(s.asn, 66.49, 0.1 * 66.49);
  EXPECT_NEAR(s.mean_n_inferior, 13.42, 0.2 * 13.42);
  EXPECT_NEAR(s.pcs, 0.93, 0.03);
  EXPECT_GT(s.pcs_selection, s.pcs);
}

TEST(Experiment, RandomTruthRuns) {
  auto cfg = normal_config(0.5, 1e-3, 400, 5);
  cfg.truth = TruthMode::Random;
  const auto s = run_experiment(cfg, 2);
  EXPECT_NEAR(s.pcs, 0.93, 0.06);
  expect_same(s, run_experiment(cfg, 1));
}

TEST(Experiment, ClassicalRounds) {
  auto cfg = normal_config(0.5, 1e-2, 1000, 1);
  cfg.procedure = Procedure::Classical;
  const auto s = run_experiment(cfg, 2);
  EXPECT_DOUBLE_EQ(s.mean_total_draws, 2 * s.asn);
  EXPECT_NEAR(s.asn, 38.152, 0.1 * 38.152);
  EXPECT_NEAR(s.pcs, 0.989, 0.01);
}

TEST(Experiment, ErrorsPropagate) {
  auto cfg = normal_config(0.001, 1e-6, 10, 1);
  cfg.cap = 20;
  EXPECT_THROW(run_experiment(cfg, 3), NonTermination);
  cfg.replications = 0;
  EXPECT_THROW(run_experiment(cfg, 1), DomainError);
  cfg = normal_config(0.5, 0.0, 10, 1);
  EXPECT_THROW(run_experiment(cfg, 1), DomainError);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for_index(1000, 5, [&](std::int64_t i) { hits[static_cast<std::size_t>(i)] += 1; });
  for (int h : hits) ASSERT_EQ(h, 1);
}

}  // namespace
}  // namespace asprt
