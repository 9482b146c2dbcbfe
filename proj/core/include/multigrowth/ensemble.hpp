#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace multigrowth {

enum class UpdateMode {
  synchronous,   // every agent plays one round per time step
  asynchronous,  // one uniformly chosen agent plays per micro step, N micro steps per time step
};

// Describes one Monte Carlo run: a group of n_players coupled by sharing
// level `generosity`, replicated `replicas` times for `horizon` steps.
// Plain aggregate so call sites can use designated initializers; validate()
// is invoked by every engine entry point.
struct EnsembleSpec {
  std::int64_t n_players = 1;
  std::int64_t horizon = 1;
  std::int64_t replicas = 1;
  std::uint64_t master_seed = 0;
  double generosity = 1.0;  // fraction of the gap to the group mean given up each step
  UpdateMode update_mode = UpdateMode::synchronous;

  void validate() const {
    if (n_players < 1)
      throw std::invalid_argument("EnsembleSpec: n_players must be >= 1");
    if (horizon < 1)
      throw std::invalid_argument("EnsembleSpec: horizon must be >= 1");
    if (replicas < 1)
      throw std::invalid_argument("EnsembleSpec: replicas must be >= 1");
    if (!(generosity >= 0.0 && generosity <= 1.0))
      throw std::invalid_argument("EnsembleSpec: generosity must lie in [0, 1]");
    if (update_mode == UpdateMode::asynchronous && generosity != 1.0)
      throw std::invalid_argument("EnsembleSpec: asynchronous runs pool everything, generosity must be 1");
  }
};

// Time series aggregated over all replicas of a run. Wealth is tracked in
// log space throughout; a group whose wealth hits exactly zero contributes
// -inf entries and flips `extinction`.
struct TrajectoryRecord {
  std::vector<std::int64_t> times;         // 0 .. horizon
  std::vector<double> mean_log_wealth;     // mean over replicas of ln(group mean wealth)
  std::vector<double> log_mean_wealth;     // ln of the mean over replicas of group mean wealth
  std::vector<std::int64_t> survivors;     // agents with positive wealth, summed over replicas
  std::vector<double> per_replica_final;   // ln(group mean wealth) at the horizon, one per replica
  bool extinction = false;
};

// Growth rate fitted from a trajectory, with the Monte Carlo error bar.
struct RateEstimate {
  double rate = 0.0;
  double std_error = 0.0;
  std::int64_t replicas_used = 0;
  std::int64_t horizon_used = 0;
  bool extinct = false;
};

}  // namespace multigrowth
