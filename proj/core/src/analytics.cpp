#include "multigrowth/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "multigrowth/errors.hpp"
#include "multigrowth/numeric.hpp"
#include "log_binomial.hpp"

namespace multigrowth::analytics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_players(std::int64_t n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": n_players must be >= 1");
}

}  // namespace

double arithmetic_mean(const GameParams& g) {
  return g.p() * g.a() + g.q() * g.b();
}

double geometric_rate(const GameParams& g) {
  if (g.b() == 0.0) return kNegInf;
  return g.p() * std::log(g.a()) + g.q() * std::log(g.b());
}

double shared_rate(const GameParams& g, std::int64_t n_players) {
  check_players(n_players, "shared_rate");
  if (g.b() == 0.0) return kNegInf;  // the all-lose outcome zeroes the pool
  const double log_p = std::log(g.p());
  const double log_q = std::log(g.q());
  const double n = static_cast<double>(n_players);
  NeumaierSum acc;
  for (std::int64_t k = 0; k <= n_players; ++k) {
    const double log_w = detail::log_choose(n_players, k) +
                         static_cast<double>(k) * log_p +
                         static_cast<double>(n_players - k) * log_q;
    const double pooled = (g.a() * static_cast<double>(k) +
                           g.b() * static_cast<double>(n_players - k)) / n;
    acc.add(std::exp(log_w) * std::log(pooled));
  }
  return acc.value();
}

double shared_rate_limit(const GameParams& g) {
  return std::log(arithmetic_mean(g));
}

std::optional<std::int64_t> n_critical(const GameParams& g, std::int64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("n_critical: n_max must be >= 1");
  // shared_rate climbs monotonically towards its limit, so the limit decides
  // feasibility and a binary search finds the first positive size.
  if (!(shared_rate_limit(g) > 0.0)) return std::nullopt;
  if (shared_rate(g, 1) > 0.0) return 1;
  if (!(shared_rate(g, n_max) > 0.0)) return std::nullopt;
  std::int64_t lo = 1;      // rate <= 0 here
  std::int64_t hi = n_max;  // rate > 0 here
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (shared_rate(g, mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

DeficitFit rate_deficit_fit(const GameParams& g, std::span<const std::int64_t> n_values) {
  if (n_values.size() < 2)
    throw std::invalid_argument("rate_deficit_fit: need at least two group sizes");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 2)
      throw std::invalid_argument("rate_deficit_fit: group sizes must be >= 2");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw std::invalid_argument("rate_deficit_fit: group sizes must increase strictly");
  }
  if (g.b() == 0.0)
    throw std::domain_error("rate_deficit_fit: deficit is infinite for b = 0");

  const double limit = shared_rate_limit(g);
  std::vector<double> xs, ys;
  xs.reserve(n_values.size());
  ys.reserve(n_values.size());
  for (const std::int64_t n : n_values) {
    xs.push_back(1.0 / (2.0 * static_cast<double>(n)));
    ys.push_back(limit - shared_rate(g, n));
  }

  // Affine least squares in relative terms (weights 1/y^2): the deficits
  // span a factor 1/(2n) of 40 or more here, and an unweighted fit lets the
  // small-n points push the intercept around until the large-n points are
  // off by several percent relatively.
  const std::size_t m = xs.size();
  double wsum = 0.0, xbar = 0.0, ybar = 0.0;
  std::vector<double> ws(m);
  for (std::size_t i = 0; i < m; ++i) {
    ws[i] = 1.0 / (ys[i] * ys[i]);
    wsum += ws[i];
    xbar += ws[i] * xs[i];
    ybar += ws[i] * ys[i];
  }
  xbar /= wsum;
  ybar /= wsum;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
    sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
  }
  DeficitFit fit;
  fit.diffusion = sxy / sxx;
  const double intercept = ybar - fit.diffusion * xbar;
  for (std::size_t i = 0; i < m; ++i) {
    const double predicted = fit.diffusion * xs[i] + intercept;
    const double rel = std::abs(ys[i] - predicted) / ys[i];
    fit.max_rel_residual = std::max(fit.max_rel_residual, rel);
  }
  return fit;
}

double kelly_rate(const KellyParams& kp, std::int64_t n_players) {
  return shared_rate(kp.to_game(), n_players);
}

double kelly_rate_log_eps(double p, double d, std::int64_t n_players, double log_eps) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("kelly_rate_log_eps: p must lie strictly in (0, 1)");
  if (!(d > 0.0) || !std::isfinite(d))
    throw std::invalid_argument("kelly_rate_log_eps: payout d must be finite and > 0");
  check_players(n_players, "kelly_rate_log_eps");
  if (!(log_eps <= 0.0))
    throw std::invalid_argument("kelly_rate_log_eps: log_eps must be <= 0 (stake f >= 0)");

  const double eps = std::exp(log_eps);  // may underflow to 0; only k = 0 cares
  const double a = 1.0 + d * (1.0 - eps);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double n = static_cast<double>(n_players);
  NeumaierSum acc;
  // k = 0: all lose, the pool keeps exactly the unstaked sliver eps. Using
  // log_eps directly keeps this term alive down to eps = 1e-300.
  acc.add(std::exp(n * log_q) * log_eps);
  for (std::int64_t k = 1; k <= n_players; ++k) {
    const double log_w = detail::log_choose(n_players, k) +
                         static_cast<double>(k) * log_p +
                         static_cast<double>(n_players - k) * log_q;
    const double pooled = (a * static_cast<double>(k) +
                           eps * static_cast<double>(n_players - k)) / n;
    acc.add(std::exp(log_w) * std::log(pooled));
  }
  return acc.value();
}

KellyOptimum kelly_optimal_fraction(double p, double d, std::int64_t n_players, double tol) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("kelly_optimal_fraction: p must lie strictly in (0, 1)");
  if (!(d > 0.0) || !std::isfinite(d))
    throw std::invalid_argument("kelly_optimal_fraction: payout d must be finite and > 0");
  check_players(n_players, "kelly_optimal_fraction");
  if (!(tol > 0.0))
    throw std::invalid_argument("kelly_optimal_fraction: tol must be > 0");

  if (n_players == 1) {
    // Solo bettor: r'(f) = 0 at f = (p*d - q)/d, clamped at 0 when the edge
    // is not positive.
    const double f_best = std::max((p * d - (1.0 - p)) / d, 0.0);
    return {f_best, kelly_rate(KellyParams(p, d, f_best), 1)};
  }

  const auto rate = [&](double f) { return kelly_rate(KellyParams(p, d, f), n_players); };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0 - 1e-12;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double r1 = rate(x1);
  double r2 = rate(x2);
  while (hi - lo > tol) {
    if (r1 >= r2) {  // keep the left interval on ties: smaller stake wins
      hi = x2; x2 = x1; r2 = r1;
      x1 = hi - invphi * (hi - lo);
      r1 = rate(x1);
    } else {
      lo = x1; x1 = x2; r1 = r2;
      x2 = lo + invphi * (hi - lo);
      r2 = rate(x2);
    }
  }
  double f_star = r1 >= r2 ? x1 : x2;
  double r_max = std::max(r1, r2);
  if (!(r_max > 0.0)) {  // staking nothing is always available and rates 0
    f_star = 0.0;
    r_max = 0.0;
  }
  return {f_star, r_max};
}

SafeRegionReport safe_fraction_boundary(double p, double d, std::int64_t n_players, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("safe_fraction_boundary: tol must be > 0");
  const KellyOptimum opt = kelly_optimal_fraction(p, d, n_players);
  if (!(opt.r_max > 0.0))
    throw std::domain_error("safe_fraction_boundary: group rate is never positive, no region to bound");

  // Work in t = ln(eps), eps = 1 - f. The rate is concave in f, positive at
  // f_star and sinking to -inf as f -> 1, so it crosses zero exactly once on
  // this side and bisection is safe.
  const double t_floor = std::log(1e-300);
  double t_hi = std::log1p(-opt.f_star);  // rate here is r_max > 0
  double t_lo = t_floor;
  if (kelly_rate_log_eps(p, d, n_players, t_lo) > 0.0)
    throw NoRootError("safe_fraction_boundary: rate still positive at eps = 1e-300");
  while (t_hi - t_lo > tol) {
    const double mid = 0.5 * (t_lo + t_hi);
    (kelly_rate_log_eps(p, d, n_players, mid) > 0.0 ? t_hi : t_lo) = mid;
  }

  SafeRegionReport report;
  report.n_players = n_players;
  report.f_star = opt.f_star;
  report.r_max = opt.r_max;
  report.epsilon_boundary = std::exp(0.5 * (t_lo + t_hi));
  report.f_boundary = 1.0 - report.epsilon_boundary;
  report.danger_measure = report.epsilon_boundary;
  return report;
}

double async_rate(const GameParams& g, std::int64_t n_players) {
  check_players(n_players, "async_rate");
  const double n = static_cast<double>(n_players);
  const double gain = (g.a() - 1.0) / n;
  const double loss = -(1.0 - g.b()) / n;
  if (loss <= -1.0)
    throw std::domain_error("async_rate: pooled loss factor 1 - (1-b)/n must stay positive");
  return n * (g.p() * std::log1p(gain) + g.q() * std::log1p(loss));
}

double async_rate_limit(const GameParams& g) {
  return arithmetic_mean(g) - 1.0;
}

}  // namespace multigrowth::analytics
