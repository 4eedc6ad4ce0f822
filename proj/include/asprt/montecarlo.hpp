#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "asprt/analytics.hpp"
#include "asprt/stopping.hpp"

namespace asprt {

enum class Procedure : std::uint8_t { Adaptive, Classical };

/// H0, H1, or a fresh coin per replication.
enum class TruthMode : std::uint8_t { H0, H1, Random };

constexpr const char* to_string(Procedure p) noexcept {
  return p == Procedure::Adaptive ? "adaptive" : "classical";
}

struct ExperimentConfig {
  HypothesisPair pair;
  TruthMode truth = TruthMode::H0;
  double alpha = 1e-3;
  double beta = 1e-3;
  std::int64_t replications = 1000;
  std::uint64_t master_seed = 0;
  Procedure procedure = Procedure::Adaptive;
  std::int64_t cap = kDefaultCap;
};

inline void validate(const ExperimentConfig& cfg) {
  validate(cfg.pair);
  wald_thresholds(cfg.alpha, cfg.beta);
  if (cfg.replications < 1) throw DomainError("replications must be >= 1");
  if (cfg.cap < 2) throw DomainError("cap must be >= 2");
}

/// Monte Carlo means with standard errors, next to their analytic references.
///
/// `pcs` is the frequency of TrialOutcome::confirmed, `pcs_selection` that
/// of TrialOutcome::correct.  `asn` is the mean of the statistic's sample count for classical runs
/// (rounds) and of total draws for adaptive runs; `mean_total_draws` is
/// always total draws.
struct ExperimentSummary {
  double pcs = 0.0;
  double mean_n_inferior = 0.0;
  double asn = 0.0;
  double se_pcs = 0.0;
  double se_n_inferior = 0.0;
  double se_asn = 0.0;
  double pcs_selection = 0.0;
  double se_pcs_selection = 0.0;
  double mean_total_draws = 0.0;
  double se_total_draws = 0.0;
  double n1_star_closed = 0.0;
  double n1_star_series = 0.0;
  double asn_wald_k0 = 0.0;
  std::int64_t replications = 0;
};

/// Substream for replication `index` of an experiment seeded with
/// `master_seed`.  Pure function of its inputs.
inline RandomStream derive_substream(std::uint64_t master_seed,
                                     std::uint64_t replication_index) {
  return RandomStream(mix64(mix64(master_seed) ^
                            (replication_index * 0xd1342543de82ef95ULL +
                             0x2545f4914f6cdd1dULL)));
}

/// Worker count: ASPRT_THREADS if set and positive, else hardware concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("ASPRT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Run `count` tasks on `threads` workers pulling indices from a shared
/// counter.  The first exception by index is rethrown after all workers join.
template <class Task>
void parallel_for_index(std::int64_t count, unsigned threads, Task&& task) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i; (i = next.fetch_add(1, std::memory_order_relaxed)) < count;) {
      try {
        task(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const unsigned n = static_cast<unsigned>(
      std::clamp<std::int64_t>(count, 1, std::max(1u, threads)));
  std::vector<std::jthread> pool;
  pool.reserve(n - 1);
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace detail {

struct MeanSe {
  double mean;
  double se;
};

// Two-pass mean and standard error in index order.
template <class Get>
MeanSe mean_se(const std::vector<TrialOutcome>& v, Get get) {
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (const auto& o : v) sum += get(o);
  const double mean = sum / n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const auto& o : v) {
    const double d = get(o) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

}  // namespace detail

/// Aggregate per-replication outcomes.  Analytic fields are left untouched.
inline ExperimentSummary aggregate(const std::vector<TrialOutcome>& outcomes,
                                   Procedure procedure) {
  ExperimentSummary s;
  s.replications = static_cast<std::int64_t>(outcomes.size());
  if (outcomes.empty()) return s;
  const auto pcs = detail::mean_se(outcomes, [](const TrialOutcome& o) {
    return o.confirmed ? 1.0 : 0.0;
  });
  const auto selection = detail::mean_se(outcomes, [](const TrialOutcome& o) {
    return o.correct ? 1.0 : 0.0;
  });
  const auto inf = detail::mean_se(outcomes, [](const TrialOutcome& o) {
    return static_cast<double>(o.n_inferior);
  });
  const auto total = detail::mean_se(outcomes, [](const TrialOutcome& o) {
    return static_cast<double>(o.n_total);
  });
  const auto rounds = detail::mean_se(outcomes, [](const TrialOutcome& o) {
    return static_cast<double>(o.steps_statistic);
  });
  const auto& asn = procedure == Procedure::Classical ? rounds : total;
  s.pcs = pcs.mean;
  s.se_pcs = pcs.se;
  s.pcs_selection = selection.mean;
  s.se_pcs_selection = selection.se;
  s.mean_n_inferior = inf.mean;
  s.se_n_inferior = inf.se;
  s.asn = asn.mean;
  s.se_asn = asn.se;
  s.mean_total_draws = total.mean;
  s.se_total_draws = total.se;
  return s;
}

inline TrialOutcome run_replication(const ExperimentConfig& cfg, const Thresholds& t,
                                    std::int64_t index) {
  const RandomStream stream =
      derive_substream(cfg.master_seed, static_cast<std::uint64_t>(index));
  Hypothesis truth = cfg.truth == TruthMode::H1 ? Hypothesis::H1 : Hypothesis::H0;
  if (cfg.truth == TruthMode::Random) {
    truth = stream.fork(0).coin() ? Hypothesis::H1 : Hypothesis::H0;
  }
  return cfg.procedure == Procedure::Adaptive
             ? run_adaptive_trial(cfg.pair, truth, t, cfg.cap, stream)
             : run_classical_trial(cfg.pair, truth, t, cfg.cap, stream);
}

/// Run every replication and aggregate.  Results are written to per-index
/// slots and reduced in index order, so the summary does not depend on
/// `threads`.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                        unsigned threads = default_thread_count()) {
  validate(cfg);
  const Thresholds t = wald_thresholds(cfg.alpha, cfg.beta);
  const LlrMoments moments = llr_moments(cfg.pair);

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.replications));
  parallel_for_index(cfg.replications, threads, [&](std::int64_t i) {
    outcomes[static_cast<std::size_t>(i)] = run_replication(cfg, t, i);
  });

  ExperimentSummary s = aggregate(outcomes, cfg.procedure);
  s.n1_star_closed = n1_star_closed_form(moments);
  s.n1_star_series = n1_star_series(moments);
  s.asn_wald_k0 = asn_wald(moments, t).k0;
  return s;
}

}  // namespace asprt
