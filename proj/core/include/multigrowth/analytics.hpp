#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "multigrowth/game.hpp"

namespace multigrowth::analytics {

// Ensemble-average growth factor per step, p*a + q*b.
double arithmetic_mean(const GameParams& g);

// Typical (median) log growth rate of a lone player, p*ln a + q*ln b.
// Returns -inf when b == 0: one loss wipes a solo player out.
double geometric_rate(const GameParams& g);

// Exact log growth rate of n players who pool and split evenly each step:
// the expectation of ln(mean step factor) under the binomial count of
// winners. Binomial weights are evaluated through lgamma so n is limited by
// patience, not overflow. Returns -inf when b == 0: the all-lose outcome
// keeps positive probability at every finite n and contributes ln(0).
double shared_rate(const GameParams& g, std::int64_t n_players);

// Limit of shared_rate for an infinite group, ln(arithmetic_mean).
double shared_rate_limit(const GameParams& g);

// Smallest group size whose shared rate is positive, or nullopt if no group
// up to n_max achieves one. Uses the fact that shared_rate increases with n.
std::optional<std::int64_t> n_critical(const GameParams& g, std::int64_t n_max);

// Least-squares fit of the finite-group rate deficit ln(M_a) - r_n against
// 1/(2n): the deficit decays like D/(2n) and `diffusion` is the fitted D.
// The fit is affine (an intercept absorbs part of the O(1/n^2) tail) and
// weighted by 1/deficit^2, i.e. it minimizes relative residuals, which is
// also what max_rel_residual reports.
struct DeficitFit {
  double diffusion = 0.0;
  double max_rel_residual = 0.0;
};
DeficitFit rate_deficit_fit(const GameParams& g, std::span<const std::int64_t> n_values);

// Shared rate of n players each staking fraction f at payout d, i.e.
// shared_rate of the induced game (1 + f*d, 1 - f, p). Exactly 0 at f = 0.
double kelly_rate(const KellyParams& kp, std::int64_t n_players);

// Same quantity parameterized by ln(1 - f), usable down to stakes within
// 1e-300 of everything. Only the k = 0 binomial term feels epsilon = 1 - f
// directly, and there ln(epsilon) is passed through untransformed.
double kelly_rate_log_eps(double p, double d, std::int64_t n_players, double log_eps);

// Stake maximizing the group growth rate, found by golden-section search
// (closed form (p*d - q)/d for n = 1, clamped at 0 when the game is
// unfavorable). Ties at the numerical-noise level resolve to the smaller f.
struct KellyOptimum {
  double f_star = 0.0;
  double r_max = 0.0;
};
KellyOptimum kelly_optimal_fraction(double p, double d, std::int64_t n_players,
                                    double tol = 1e-10);

// Where group growth turns negative as the stake approaches 1. The root is
// bracketed in ln(eps), eps = 1 - f, and bisected to `tol` in that variable;
// danger_measure is the width eps of the surviving sliver of stakes below 1.
// Throws NoRootError if the rate never turns negative above eps = 1e-300 and
// domain_error if it is never positive at all.
struct SafeRegionReport {
  std::int64_t n_players = 0;
  double f_star = 0.0;
  double r_max = 0.0;
  double f_boundary = 0.0;
  double epsilon_boundary = 0.0;
  double danger_measure = 0.0;
};
SafeRegionReport safe_fraction_boundary(double p, double d, std::int64_t n_players,
                                        double tol = 1e-10);

// Growth rate of a pool where one randomly chosen member plays per micro
// step (n micro steps per time step): n * (p*ln(1 + (a-1)/n) + q*ln(1 - (1-b)/n)).
// Throws domain_error when the loss micro-factor is not positive (n = 1, b = 0).
double async_rate(const GameParams& g, std::int64_t n_players);

// Limit of async_rate for an infinite pool, arithmetic_mean - 1. Always at
// least shared_rate_limit since x - 1 >= ln x.
double async_rate_limit(const GameParams& g);

}  // namespace multigrowth::analytics
