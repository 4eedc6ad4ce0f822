#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "asprt/allocation.hpp"
#include "asprt/analytics.hpp"

namespace asprt {

enum class Decision : std::uint8_t { Continue, AcceptK0, AcceptK1 };

constexpr const char* to_string(Decision d) noexcept {
  switch (d) {
    case Decision::AcceptK0: return "accept_K0";
    case Decision::AcceptK1: return "accept_K1";
    default: return "continue";
  }
}

inline constexpr std::int64_t kDefaultCap = 10'000'000;

/// Outcome of one trial.
///
/// `correct` follows classify_outcome: the declared superior stream is the
/// true one, whichever hypothesis was accepted.  `confirmed` is the stricter
/// event that K0 was accepted on the truly superior stream; its frequency is
/// the PCS reported by the simulation tables.
///
/// Adaptive: n_total counts every draw, steps_statistic the terms in the
/// terminal statistic (n_max).  Classical: steps_statistic is the number of
/// rounds n and n_total = 2n.
struct TrialOutcome {
  Decision decision = Decision::Continue;
  StreamId deciding_stream = StreamId::X;
  bool correct = false;
  bool confirmed = false;
  std::int64_t n_total = 0;
  std::int64_t n_inferior = 0;
  std::int64_t steps_statistic = 0;
};

/// Thrown when a trial exceeds its step cap.  Carries the partial state.
class NonTermination : public std::runtime_error {
 public:
  NonTermination(const TrialState& partial, std::int64_t cap)
      : std::runtime_error("trial did not stop within " + std::to_string(cap) +
                           " steps (n_x=" + std::to_string(partial.n_x) +
                           ", n_y=" + std::to_string(partial.n_y) +
                           ", l_x=" + std::to_string(partial.l_x) +
                           ", l_y=" + std::to_string(partial.l_y) + ")"),
        partial_(partial) {}

  const TrialState& partial_state() const noexcept { return partial_; }

 private:
  TrialState partial_;
};

/// Boundary test on T = sum log(f1/f0) = -active_llr.  Hits are inclusive.
constexpr Decision sprt_decision_on(double t_stat, const Thresholds& t) noexcept {
  if (t_stat >= t.a) return Decision::AcceptK1;
  if (t_stat <= t.b) return Decision::AcceptK0;
  return Decision::Continue;
}

inline Decision sprt_decision(const TrialState& s, const Thresholds& t) {
  return sprt_decision_on(-active_llr(s), t);
}

/// Accepting K0 on a stream declares that stream superior; accepting K1
/// declares it inferior.
constexpr bool classify_outcome(Decision d, StreamId deciding, Hypothesis truth) noexcept {
  const bool stream_is_superior = deciding == superior_stream(truth);
  if (d == Decision::AcceptK0) return stream_is_superior;
  if (d == Decision::AcceptK1) return !stream_is_superior;
  return false;
}

/// K0 accepted on the stream that truly follows f0.
constexpr bool confirms_superior(Decision d, StreamId deciding, Hypothesis truth) noexcept {
  return d == Decision::AcceptK0 && deciding == superior_stream(truth);
}

inline TrialOutcome run_adaptive_trial(const HypothesisPair& pair, Hypothesis truth,
                                       const Thresholds& t, std::int64_t cap,
                                       const RandomStream& rng) {
  if (cap < 2) throw DomainError("cap must be >= 2");
  TrialRng sources(rng);
  TrialState s = init_trial(pair, truth, sources);
  Decision d;
  while ((d = sprt_decision(s, t)) == Decision::Continue) {
    if (s.step >= cap) throw NonTermination(s, cap);
    apply_observation(s, allocate_next(s, sources), pair, truth, sources);
  }
  TrialOutcome out;
  out.decision = d;
  out.deciding_stream = s.active;
  out.correct = classify_outcome(d, s.active, truth);
  out.confirmed = confirms_superior(d, s.active, truth);
  out.n_total = s.step;
  out.n_inferior = s.count(other(superior_stream(truth)));
  out.steps_statistic = s.count(s.active);
  return out;
}

/// Alternating-sampling SPRT: one draw from each stream per round, statistic
/// Z_n = sum log(f1(X_i)/f0(X_i)) over the X stream.
inline TrialOutcome run_classical_trial(const HypothesisPair& pair, Hypothesis truth,
                                        const Thresholds& t, std::int64_t cap,
                                        const RandomStream& rng) {
  if (cap < 2) throw DomainError("cap must be >= 2");
  TrialRng sources(rng);
  TrialState s;
  Decision d = Decision::Continue;
  while (d == Decision::Continue) {
    if (s.step + 2 > cap) throw NonTermination(s, cap);
    for (StreamId id : {StreamId::X, StreamId::Y}) {
      const Observation u = sample(true_density(pair, truth, id), sources.source(id));
      detail::record(s, id, llr(pair, u));
    }
    d = sprt_decision_on(-s.l_x, t);
  }
  s.active = StreamId::X;
  TrialOutcome out;
  out.decision = d;
  out.deciding_stream = StreamId::X;
  out.correct = classify_outcome(d, StreamId::X, truth);
  out.confirmed = out.correct;  // single tested stream, no U-stream choice
  out.steps_statistic = s.n_x;
  out.n_total = s.step;
  out.n_inferior = s.n_x;
  return out;
}

}  // namespace asprt
