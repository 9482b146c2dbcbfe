#include "multigrowth/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "multigrowth/analytics.hpp"
#include "multigrowth/numeric.hpp"
#include "multigrowth/rng.hpp"

namespace multigrowth {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Replicas are reduced in fixed-size chunks and the chunks merged strictly
// in index order. The grouping of floating-point additions is therefore a
// function of the run alone, which is what makes results bit-identical for
// every thread count.
constexpr std::int64_t kChunk = 16;

// Per-replica output: one entry per recorded time 0..horizon.
struct ReplicaTrace {
  std::vector<double> log_group_mean;
  std::vector<std::int64_t> survivors;
};

struct ChunkOut {
  std::vector<double> sum_log_mean;    // plain sums over the chunk's replicas
  std::vector<LogSumExp> wealth;       // accumulates exp(log group mean)
  std::vector<std::int64_t> survivors;
  std::vector<double> finals;
  bool extinct = false;
};

using ReplicaFn = std::function<void(std::int64_t replica, ReplicaTrace& trace)>;

ChunkOut run_chunk(std::int64_t chunk, std::int64_t horizon, std::int64_t replicas,
                   const ReplicaFn& run_replica, ReplicaTrace& trace) {
  const std::int64_t begin = chunk * kChunk;
  const std::int64_t end = std::min(begin + kChunk, replicas);
  const std::size_t rows = static_cast<std::size_t>(horizon) + 1;

  ChunkOut out;
  out.sum_log_mean.assign(rows, 0.0);
  out.wealth.assign(rows, LogSumExp{});
  out.survivors.assign(rows, 0);
  out.finals.reserve(static_cast<std::size_t>(end - begin));

  for (std::int64_t r = begin; r < end; ++r) {
    run_replica(r, trace);
    for (std::size_t t = 0; t < rows; ++t) {
      const double glm = trace.log_group_mean[t];
      out.sum_log_mean[t] += glm;
      out.wealth[t].add_log(glm);
      out.survivors[t] += trace.survivors[t];
    }
    const double final_glm = trace.log_group_mean[rows - 1];
    out.finals.push_back(final_glm);
    if (final_glm == kNegInf) out.extinct = true;
  }
  return out;
}

TrajectoryRecord reduce_replicas(std::int64_t horizon, std::int64_t replicas,
                                 int threads, const ReplicaFn& run_replica) {
  const std::size_t rows = static_cast<std::size_t>(horizon) + 1;
  const std::int64_t n_chunks = (replicas + kChunk - 1) / kChunk;

  std::vector<double> sum_log_mean(rows, 0.0);
  std::vector<LogSumExp> wealth(rows);
  std::vector<std::int64_t> survivors(rows, 0);
  std::vector<double> finals;
  finals.reserve(static_cast<std::size_t>(replicas));
  bool extinct = false;

  const auto fold = [&](ChunkOut&& out) {
    for (std::size_t t = 0; t < rows; ++t) {
      sum_log_mean[t] += out.sum_log_mean[t];
      wealth[t].merge(out.wealth[t]);
      survivors[t] += out.survivors[t];
    }
    finals.insert(finals.end(), out.finals.begin(), out.finals.end());
    extinct = extinct || out.extinct;
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(
      std::min<std::int64_t>(n_chunks, 1024))));

  if (workers == 1) {
    ReplicaTrace trace;
    trace.log_group_mean.resize(rows);
    trace.survivors.resize(rows);
    for (std::int64_t c = 0; c < n_chunks; ++c)
      fold(run_chunk(c, horizon, replicas, run_replica, trace));
  } else {
    // Workers claim chunks from a shared counter and park results in a small
    // ordered buffer; the main thread folds them strictly in chunk order.
    std::atomic<std::int64_t> next{0};
    std::mutex mu;
    std::condition_variable cv_ready, cv_space;
    std::map<std::int64_t, ChunkOut> parked;
    std::int64_t merged = 0;
    const std::size_t backlog = static_cast<std::size_t>(workers) * 2 + 2;

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        ReplicaTrace trace;
        trace.log_group_mean.resize(rows);
        trace.survivors.resize(rows);
        for (;;) {
          const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
          if (c >= n_chunks) return;
          ChunkOut out = run_chunk(c, horizon, replicas, run_replica, trace);
          std::unique_lock<std::mutex> lk(mu);
          cv_space.wait(lk, [&] { return parked.size() < backlog || c == merged; });
          parked.emplace(c, std::move(out));
          cv_ready.notify_all();
        }
      });
    }

    while (merged < n_chunks) {
      ChunkOut out;
      {
        std::unique_lock<std::mutex> lk(mu);
        cv_ready.wait(lk, [&] { return parked.count(merged) != 0; });
        auto it = parked.find(merged);
        out = std::move(it->second);
        parked.erase(it);
      }
      fold(std::move(out));
      ++merged;
      cv_space.notify_all();
    }
    for (auto& th : pool) th.join();
  }

  TrajectoryRecord rec;
  rec.times.resize(rows);
  for (std::size_t t = 0; t < rows; ++t) rec.times[t] = static_cast<std::int64_t>(t);
  rec.mean_log_wealth.resize(rows);
  rec.log_mean_wealth.resize(rows);
  const double log_r = std::log(static_cast<double>(replicas));
  for (std::size_t t = 0; t < rows; ++t) {
    rec.mean_log_wealth[t] = sum_log_mean[t] / static_cast<double>(replicas);
    rec.log_mean_wealth[t] = wealth[t].log_total() - log_r;
  }
  rec.survivors = std::move(survivors);
  rec.per_replica_final = std::move(finals);
  rec.extinction = extinct;
  return rec;
}

// One synchronous replica: every agent multiplies its wealth, then the group
// redistributes. Wealth lives in log space; the group mean is taken under a
// running max shift so runs survive thousands of steps of decay or growth.
void run_sync_replica(const GameParams& g, double generosity, std::int64_t n_players,
                      std::int64_t horizon, std::uint64_t master_seed,
                      std::int64_t replica, ReplicaTrace& trace,
                      std::vector<SplitMix64>& rng, std::vector<double>& x,
                      std::vector<double>& y) {
  const double log_a = std::log(g.a());
  const double log_b = g.b() > 0.0 ? std::log(g.b()) : kNegInf;
  const double p = g.p();

  rng.clear();
  for (std::int64_t i = 0; i < n_players; ++i)
    rng.emplace_back(derive_stream_seed(master_seed, static_cast<std::uint64_t>(replica),
                                        static_cast<std::uint64_t>(i)));

  trace.log_group_mean[0] = 0.0;
  trace.survivors[0] = n_players;

  if (n_players == 1) {
    // Solo path: the group mean is the lone wealth, sharing is a no-op.
    double lw = 0.0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      if (lw != kNegInf) lw += rng[0].next_double() < p ? log_a : log_b;
      trace.log_group_mean[static_cast<std::size_t>(t)] = lw;
      trace.survivors[static_cast<std::size_t>(t)] = lw != kNegInf ? 1 : 0;
    }
    return;
  }

  x.assign(static_cast<std::size_t>(n_players), 0.0);
  y.resize(static_cast<std::size_t>(n_players));
  const double n = static_cast<double>(n_players);
  bool dead = false;

  for (std::int64_t t = 1; t <= horizon; ++t) {
    const std::size_t row = static_cast<std::size_t>(t);
    if (dead) {
      trace.log_group_mean[row] = kNegInf;
      trace.survivors[row] = 0;
      continue;
    }

    double shift = kNegInf;
    for (std::int64_t i = 0; i < n_players; ++i) {
      const std::size_t j = static_cast<std::size_t>(i);
      if (x[j] != kNegInf) x[j] += rng[j].next_double() < p ? log_a : log_b;
      shift = std::max(shift, x[j]);
    }
    if (shift == kNegInf) {  // every member lost everything this step
      dead = true;
      trace.log_group_mean[row] = kNegInf;
      trace.survivors[row] = 0;
      continue;
    }

    double total = 0.0;
    for (std::int64_t i = 0; i < n_players; ++i) {
      const std::size_t j = static_cast<std::size_t>(i);
      y[j] = x[j] == kNegInf ? 0.0 : std::exp(x[j] - shift);
      total += y[j];
    }
    const double mean = total / n;
    if (generosity > 0.0)
      for (std::int64_t i = 0; i < n_players; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        y[j] += generosity * (mean - y[j]);
      }

    std::int64_t alive = 0;
    for (std::int64_t i = 0; i < n_players; ++i) {
      const std::size_t j = static_cast<std::size_t>(i);
      if (y[j] > 0.0) {
        x[j] = std::log(y[j]) + shift;
        ++alive;
      } else {
        x[j] = kNegInf;
      }
    }
    trace.log_group_mean[row] = std::log(mean) + shift;
    trace.survivors[row] = alive;
  }
}

void check_sync_spec(const EnsembleSpec& spec, const char* who) {
  spec.validate();
  if (spec.update_mode != UpdateMode::synchronous)
    throw std::invalid_argument(std::string(who) + ": spec.update_mode must be synchronous");
}

}  // namespace

TrajectoryRecord simulate_sync(const GameParams& g, const SharingPolicy& policy,
                               const EnsembleSpec& spec, int threads) {
  check_sync_spec(spec, "simulate_sync");
  if (policy.group_size != spec.n_players)
    throw std::invalid_argument("simulate_sync: policy.group_size disagrees with spec.n_players");
  if (policy.generosity != spec.generosity)
    throw std::invalid_argument("simulate_sync: policy.generosity disagrees with spec.generosity");

  const ReplicaFn fn = [&](std::int64_t replica, ReplicaTrace& trace) {
    thread_local std::vector<SplitMix64> rng;
    thread_local std::vector<double> x, y;
    run_sync_replica(g, policy.generosity, spec.n_players, spec.horizon,
                     spec.master_seed, replica, trace, rng, x, y);
  };
  return reduce_replicas(spec.horizon, spec.replicas, threads, fn);
}

namespace {

void check_async_args(const GameParams& g, std::int64_t n_players, const EnsembleSpec& spec,
                      const char* who) {
  spec.validate();
  if (spec.update_mode != UpdateMode::asynchronous)
    throw std::invalid_argument(std::string(who) + ": spec.update_mode must be asynchronous");
  if (n_players != spec.n_players)
    throw std::invalid_argument(std::string(who) + ": n_players disagrees with spec.n_players");
  if ((1.0 - g.b()) / static_cast<double>(n_players) >= 1.0)
    throw std::domain_error(std::string(who) + ": pooled loss factor must stay positive (b = 0 needs n >= 2)");
}

}  // namespace

TrajectoryRecord simulate_async(const GameParams& g, std::int64_t n_players,
                                const EnsembleSpec& spec, int threads) {
  check_async_args(g, n_players, spec, "simulate_async");
  const double n = static_cast<double>(n_players);
  const double log_gain = std::log1p((g.a() - 1.0) / n);
  const double log_loss = std::log1p(-(1.0 - g.b()) / n);
  const double p = g.p();

  const ReplicaFn fn = [&, log_gain, log_loss](std::int64_t replica, ReplicaTrace& trace) {
    SplitMix64 rng(derive_stream_seed(spec.master_seed, static_cast<std::uint64_t>(replica), 0));
    double lw = 0.0;
    trace.log_group_mean[0] = 0.0;
    trace.survivors[0] = n_players;
    for (std::int64_t t = 1; t <= spec.horizon; ++t) {
      for (std::int64_t micro = 0; micro < n_players; ++micro) {
        // The pick is irrelevant to the pooled wealth but is drawn anyway so
        // the aggregate and agent-level forms consume one stream identically.
        (void)rng.next_below(static_cast<std::uint64_t>(n_players));
        lw += rng.next_double() < p ? log_gain : log_loss;
      }
      trace.log_group_mean[static_cast<std::size_t>(t)] = lw;
      trace.survivors[static_cast<std::size_t>(t)] = n_players;
    }
  };
  return reduce_replicas(spec.horizon, spec.replicas, threads, fn);
}

TrajectoryRecord simulate_async_agents(const GameParams& g, std::int64_t n_players,
                                       const EnsembleSpec& spec, int threads) {
  check_async_args(g, n_players, spec, "simulate_async_agents");
  const double p = g.p();
  const double n = static_cast<double>(n_players);

  const ReplicaFn fn = [&](std::int64_t replica, ReplicaTrace& trace) {
    thread_local std::vector<double> y;
    SplitMix64 rng(derive_stream_seed(spec.master_seed, static_cast<std::uint64_t>(replica), 0));
    double lw = 0.0;  // common log wealth; members stay equal between micro steps
    trace.log_group_mean[0] = 0.0;
    trace.survivors[0] = n_players;
    y.resize(static_cast<std::size_t>(n_players));
    for (std::int64_t t = 1; t <= spec.horizon; ++t) {
      for (std::int64_t micro = 0; micro < n_players; ++micro) {
        std::fill(y.begin(), y.end(), 1.0);
        const std::uint64_t pick = rng.next_below(static_cast<std::uint64_t>(n_players));
        y[pick] = rng.next_double() < p ? g.a() : g.b();
        double total = 0.0;
        for (const double w : y) total += w;
        lw += std::log(total / n);
      }
      trace.log_group_mean[static_cast<std::size_t>(t)] = lw;
      trace.survivors[static_cast<std::size_t>(t)] = n_players;
    }
  };
  return reduce_replicas(spec.horizon, spec.replicas, threads, fn);
}

TrajectoryRecord simulate_kelly(const KellyParams& kp, std::int64_t n_players,
                                const EnsembleSpec& spec, int threads) {
  if (n_players != spec.n_players)
    throw std::invalid_argument("simulate_kelly: n_players disagrees with spec.n_players");
  EnsembleSpec pooled = spec;
  pooled.generosity = 1.0;  // bettors always pool fully
  return simulate_sync(kp.to_game(), SharingPolicy{1.0, n_players}, pooled, threads);
}

std::vector<CensusRecord> survival_census(const GameParams& g, std::int64_t n0,
                                          const EnsembleSpec& spec) {
  spec.validate();
  if (g.b() != 0.0)
    throw std::invalid_argument("survival_census: needs an all-or-nothing game (b = 0)");
  if (n0 < 1)
    throw std::invalid_argument("survival_census: initial population must be >= 1");

  SplitMix64 rng(derive_stream_seed(spec.master_seed, 0, 0));
  std::vector<CensusRecord> records;
  records.reserve(static_cast<std::size_t>(spec.horizon) + 1);

  std::int64_t alive = n0;
  double per_survivor = 1.0;
  records.push_back({0, alive, 1.0});
  for (std::int64_t t = 1; t <= spec.horizon && alive > 0; ++t) {
    // Thin the whole cohort with one binomial draw; each survivor's wealth
    // is deterministic (a^t), so no per-player state is ever needed.
    std::binomial_distribution<std::int64_t> thin(alive, g.p());
    alive = thin(rng);
    per_survivor *= g.a();
    const double mean_wealth =
        static_cast<double>(alive) * per_survivor / static_cast<double>(n0);
    records.push_back({t, alive, mean_wealth});
  }
  return records;
}

RateEstimate estimate_growth_rate(const TrajectoryRecord& traj, std::int64_t burn_in) {
  if (traj.times.size() < 2)
    throw std::invalid_argument("estimate_growth_rate: trajectory has no steps");
  const std::int64_t horizon = traj.times.back();
  if (burn_in < 0 || burn_in >= horizon)
    throw std::invalid_argument("estimate_growth_rate: burn_in must lie in [0, horizon)");

  RateEstimate est;
  est.replicas_used = static_cast<std::int64_t>(traj.per_replica_final.size());
  est.horizon_used = horizon - burn_in;
  est.extinct = traj.extinction;
  if (traj.extinction) {
    est.rate = kNegInf;
    est.std_error = std::numeric_limits<double>::infinity();
    return est;
  }

  const double span = static_cast<double>(est.horizon_used);
  est.rate = (traj.mean_log_wealth[static_cast<std::size_t>(horizon)] -
              traj.mean_log_wealth[static_cast<std::size_t>(burn_in)]) / span;

  if (est.replicas_used < 2) {
    est.std_error = std::numeric_limits<double>::infinity();
    return est;
  }
  double mean = 0.0;
  for (const double v : traj.per_replica_final) mean += v;
  mean /= static_cast<double>(est.replicas_used);
  double ss = 0.0;
  for (const double v : traj.per_replica_final) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(est.replicas_used - 1));
  est.std_error = sd / (span * std::sqrt(static_cast<double>(est.replicas_used)));
  return est;
}

CriticalGenerosity critical_generosity(const GameParams& g, std::int64_t n_players,
                                       const EnsembleSpec& spec, double tol, int threads) {
  spec.validate();
  if (n_players != spec.n_players)
    throw std::invalid_argument("critical_generosity: n_players disagrees with spec.n_players");
  if (!(tol > 0.0 && tol < 1.0))
    throw std::invalid_argument("critical_generosity: tol must lie in (0, 1)");

  // The measured rate interpolates between the solo rate at generosity 0 and
  // the full-pool rate at 1, so the analytic endpoints decide whether a sign
  // change can exist at all.
  if (!(analytics::shared_rate(g, n_players) > 0.0))
    throw NoRootError("critical_generosity: even a full pool of this size cannot grow");
  if (analytics::geometric_rate(g) >= 0.0)
    throw NoRootError("critical_generosity: solo play already grows, every generosity works");

  const std::int64_t burn_in = spec.horizon / 5;
  const auto measure = [&](double generosity) {
    EnsembleSpec s = spec;
    s.generosity = generosity;
    const TrajectoryRecord traj =
        simulate_sync(g, SharingPolicy{generosity, n_players}, s, threads);
    return estimate_growth_rate(traj, burn_in);
  };

  CriticalGenerosity result;
  result.d_lo = 0.0;
  result.d_hi = 1.0;
  result.rate_lo = measure(0.0);
  result.rate_hi = measure(1.0);
  if (!(result.rate_lo.rate < 0.0 && result.rate_hi.rate > 0.0))
    throw BudgetExhaustedError(
        "critical_generosity: endpoint rates do not straddle zero at this budget");

  // Every candidate reuses the same master seed, so the noise is common
  // across the bracket and the comparisons order correctly at modest budgets.
  while (result.d_hi - result.d_lo > tol) {
    const double mid = 0.5 * (result.d_lo + result.d_hi);
    const RateEstimate r = measure(mid);
    if (r.rate > 0.0) {
      result.d_hi = mid;
      result.rate_hi = r;
    } else {
      result.d_lo = mid;
      result.rate_lo = r;
    }
  }

  const double gap = result.rate_hi.rate - result.rate_lo.rate;
  const double noise = std::hypot(result.rate_lo.std_error, result.rate_hi.std_error);
  if (!(gap >= 2.0 * noise))
    throw BudgetExhaustedError(
        "critical_generosity: bracket not resolved against Monte Carlo noise; "
        "raise replicas or horizon");
  return result;
}

}  // namespace multigrowth
