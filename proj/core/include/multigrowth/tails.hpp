#pragma once

#include <cstdint>
#include <vector>

#include "multigrowth/game.hpp"

namespace multigrowth::tails {

// Which event the tail probability measures after t rounds of solo play.
enum class TailMode {
  beat_one,         // wealth above its starting value
  beat_arithmetic,  // wealth above the ensemble average M_a^t
};

// Fraction of rounds that must be wins for the event to hold: alpha such
// that histories with n > alpha*t wins qualify. Requires a > 1 and
// 0 < b < 1 so the threshold is a genuine crossing point.
double alpha_threshold(const GameParams& g, TailMode mode);

// Exact probability that a t-round solo history qualifies: the binomial
// tail P(n > alpha*t), summed in log space. Histories sitting exactly on
// the threshold do not qualify (strict inequality).
double growth_probability_exact(const GameParams& g, std::int64_t t, TailMode mode);

// Saddle-point (largest integrand) approximation exp(-t*(alpha-p)^2/(2pq)),
// no prefactor. Meant for the losing-typical regime where the tail decays.
double growth_probability_gaussian(const GameParams& g, std::int64_t t, TailMode mode);

// How many independent realizations one must watch before a qualifying
// history is expected: the reciprocal of the Gaussian tail weight. `count`
// overflows to +inf gracefully around e^709; log_count never does.
struct RequiredRealizations {
  double count = 0.0;
  double log_count = 0.0;
};
RequiredRealizations required_realizations(const GameParams& g, std::int64_t t,
                                           TailMode mode);

// Everything the tail analysis produces for one (game, horizon, mode).
struct TailReport {
  TailMode mode = TailMode::beat_one;
  std::int64_t t = 0;
  double alpha = 0.0;
  double prob_exact = 0.0;
  double prob_gaussian = 0.0;
  RequiredRealizations realizations;
};
TailReport make_tail_report(const GameParams& g, std::int64_t t, TailMode mode);

// One row per win count n of a t-round history: its log wealth, its log
// probability, and their sum, the log contribution to the ensemble mean.
// log_value + log_prob == log_contribution by construction.
struct ContributionRow {
  std::int64_t n = 0;
  double log_value = 0.0;
  double log_prob = 0.0;
  double log_contribution = 0.0;
};

// Decomposition of the ensemble mean wealth at horizon t by win count,
// showing which (rare) histories carry it. argmax_prob is the binomial mode
// floor((t+1)p); typical_contribution is the log wealth of that modal
// history, the value a typical realization actually attains.
struct ContributionDecomposition {
  std::vector<ContributionRow> rows;
  std::int64_t argmax_prob = 0;
  std::int64_t argmax_contribution = 0;
  double typical_contribution = 0.0;
};
ContributionDecomposition contribution_decomposition(const GameParams& g, std::int64_t t);

}  // namespace multigrowth::tails
