#pragma once

#include <cstdint>

#include "asprt/distributions.hpp"
#include "asprt/random.hpp"

namespace asprt {

enum class StreamId : std::uint8_t { X, Y };

/// Which assignment of densities to streams is true.
/// H0: X ~ f0, Y ~ f1.  H1: X ~ f1, Y ~ f0.
enum class Hypothesis : std::uint8_t { H0, H1 };

constexpr StreamId other(StreamId s) noexcept {
  return s == StreamId::X ? StreamId::Y : StreamId::X;
}

constexpr const char* to_string(StreamId s) noexcept {
  return s == StreamId::X ? "X" : "Y";
}

constexpr const char* to_string(Hypothesis h) noexcept {
  return h == Hypothesis::H0 ? "H0" : "H1";
}

/// Stream that truly follows the superior density f0.
constexpr StreamId superior_stream(Hypothesis truth) noexcept {
  return truth == Hypothesis::H0 ? StreamId::X : StreamId::Y;
}

inline const DistributionSpec& true_density(const HypothesisPair& pair,
                                            Hypothesis truth, StreamId s) {
  return s == superior_stream(truth) ? pair.f0 : pair.f1;
}

/// Random sources for one trial.  Each data stream owns its own substream,
/// so the k-th observation of a stream depends only on (stream, k) and never
/// on the allocation path.  Tie-breaking coins come from a third substream.
struct TrialRng {
  explicit TrialRng(const RandomStream& parent)
      : x(parent.fork(1)), y(parent.fork(2)), coin(parent.fork(3)) {}

  RandomStream& source(StreamId s) { return s == StreamId::X ? x : y; }

  RandomStream x;
  RandomStream y;
  RandomStream coin;
};

struct TrialState {
  std::int64_t n_x = 0;  ///< draws from X
  std::int64_t n_y = 0;  ///< draws from Y
  double l_x = 0.0;      ///< cumulative log(f0/f1) over X draws
  double l_y = 0.0;      ///< cumulative log(f0/f1) over Y draws
  StreamId active = StreamId::X;  ///< stream holding n_max
  std::int64_t step = 0;          ///< n_x + n_y

  std::int64_t count(StreamId s) const { return s == StreamId::X ? n_x : n_y; }
  double cumulative_llr(StreamId s) const { return s == StreamId::X ? l_x : l_y; }
};

namespace detail {

inline void refresh_active(TrialState& s, RandomStream& coin) {
  if (s.n_x != s.n_y) {
    s.active = s.n_x > s.n_y ? StreamId::X : StreamId::Y;
  } else {
    s.active = coin.coin() ? StreamId::X : StreamId::Y;
  }
}

inline void record(TrialState& s, StreamId stream, double z) {
  if (stream == StreamId::X) {
    ++s.n_x;
    s.l_x += z;
  } else {
    ++s.n_y;
    s.l_y += z;
  }
  ++s.step;
}

}  // namespace detail

/// One draw from each stream's true density; the tie is broken by a coin.
inline TrialState init_trial(const HypothesisPair& pair, Hypothesis truth,
                             TrialRng& rng) {
  TrialState s;
  for (StreamId id : {StreamId::X, StreamId::Y}) {
    const Observation u = sample(true_density(pair, truth, id), rng.source(id));
    detail::record(s, id, llr(pair, u));
  }
  detail::refresh_active(s, rng.coin);
  return s;
}

/// log(prod f0(U_i) / prod f1(U_i)) over the n_max stream.
inline double active_llr(const TrialState& s) {
  return s.cumulative_llr(s.active);
}

/// Positive statistic: stay on the n_max stream.  Negative: switch to the
/// n_min stream.  Exactly zero: fair coin.
inline StreamId allocate_next(const TrialState& s, TrialRng& rng) {
  const double stat = active_llr(s);
  if (stat > 0.0) return s.active;
  if (stat < 0.0) return other(s.active);
  return rng.coin.coin() ? StreamId::X : StreamId::Y;
}

/// Draw from `stream`, fold its LLR into the state and re-derive the n_max
/// stream (fresh coin on a tie).
inline void apply_observation(TrialState& s, StreamId stream,
                              const HypothesisPair& pair, Hypothesis truth,
                              TrialRng& rng) {
  const Observation u =
      sample(true_density(pair, truth, stream), rng.source(stream));
  detail::record(s, stream, llr(pair, u));
  detail::refresh_active(s, rng.coin);
}

}  // namespace asprt
