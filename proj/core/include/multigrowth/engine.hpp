#pragma once

#include <cstdint>
#include <vector>

#include "multigrowth/ensemble.hpp"
#include "multigrowth/errors.hpp"
#include "multigrowth/game.hpp"

namespace multigrowth {

// Redistribution applied after every synchronous round: each member moves a
// fraction `generosity` of the way to the group mean. generosity = 0 is a
// crowd of soloists, generosity = 1 a full pool.
struct SharingPolicy {
  double generosity = 1.0;
  std::int64_t group_size = 1;
};

// All agents play one round, then wealth is redistributed per `policy`.
// policy must agree with the group size and generosity in `spec`; the split
// exists so engine call sites name the sharing rule explicitly.
// Replicas are deterministic functions of (master_seed, replica, agent) and
// are reduced in fixed chunk order, so results are bit-identical for any
// thread count.
TrajectoryRecord simulate_sync(const GameParams& g, const SharingPolicy& policy,
                               const EnsembleSpec& spec, int threads = 1);

// One uniformly chosen member plays per micro step against the pooled
// wealth; n_players micro steps make one recorded time step. Aggregate form:
// the pool is a single log-wealth variable.
TrajectoryRecord simulate_async(const GameParams& g, std::int64_t n_players,
                                const EnsembleSpec& spec, int threads = 1);

// Agent-level form of the same dynamics, consuming the random stream in the
// same order, kept for cross-checking the aggregate form. The two agree up
// to floating-point association, not bit for bit.
TrajectoryRecord simulate_async_agents(const GameParams& g, std::int64_t n_players,
                                       const EnsembleSpec& spec, int threads = 1);

// Pool of n_players Kelly bettors staking fraction f per round. Delegates to
// simulate_sync on the induced game with full sharing (generosity 1).
TrajectoryRecord simulate_kelly(const KellyParams& kp, std::int64_t n_players,
                                const EnsembleSpec& spec, int threads = 1);

// Population count and per-survivor wealth of n0 independent players of an
// all-or-nothing game (b == 0). Survivor counts are thinned with a binomial
// draw per step, never per player, so n0 = 1e9 costs the same as n0 = 10.
struct CensusRecord {
  std::int64_t time = 0;
  std::int64_t survivors = 0;
  double mean_wealth = 0.0;  // total wealth of the cohort / n0
};
std::vector<CensusRecord> survival_census(const GameParams& g, std::int64_t n0,
                                          const EnsembleSpec& spec);

// Fits the asymptotic slope of mean_log_wealth between burn_in and the
// horizon. The error bar comes from the replica-to-replica spread of the
// final log wealth. An extinct run is flagged and reported at rate -inf.
RateEstimate estimate_growth_rate(const TrajectoryRecord& traj, std::int64_t burn_in = 0);

// Smallest generosity at which the measured group rate turns positive,
// located by bisection on [0, 1]. Every candidate is simulated from the same
// master seed (common random numbers), so the bracket ordering is meaningful
// at far smaller budgets than independent seeding would need.
// Throws NoRootError when the analytic rate says no root can exist and
// BudgetExhaustedError when the final bracket is not statistically resolved
// (gap < 2 combined standard errors).
struct CriticalGenerosity {
  double d_lo = 0.0;
  double d_hi = 1.0;
  RateEstimate rate_lo;
  RateEstimate rate_hi;
};
CriticalGenerosity critical_generosity(const GameParams& g, std::int64_t n_players,
                                       const EnsembleSpec& spec, double tol,
                                       int threads = 1);

}  // namespace multigrowth
