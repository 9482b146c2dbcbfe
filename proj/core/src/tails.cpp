#include "multigrowth/tails.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "multigrowth/analytics.hpp"
#include "multigrowth/numeric.hpp"
#include "log_binomial.hpp"

namespace multigrowth::tails {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_horizon(std::int64_t t, const char* who) {
  if (t < 1) throw std::invalid_argument(std::string(who) + ": horizon t must be >= 1");
}

}  // namespace

double alpha_threshold(const GameParams& g, TailMode mode) {
  if (!(g.a() > 1.0 && g.b() > 0.0 && g.b() < 1.0))
    throw std::domain_error("alpha_threshold: needs a > 1 and 0 < b < 1");
  const double la = std::log(g.a());
  const double lb = std::log(g.b());
  switch (mode) {
    case TailMode::beat_one:
      // n*la + (t-n)*lb > 0 rearranged for n/t.
      return -lb / (la - lb);
    case TailMode::beat_arithmetic:
      // n*la + (t-n)*lb > t*ln(M_a) rearranged likewise.
      return (analytics::shared_rate_limit(g) - lb) / (la - lb);
  }
  throw std::logic_error("alpha_threshold: unhandled mode");
}

double growth_probability_exact(const GameParams& g, std::int64_t t, TailMode mode) {
  check_horizon(t, "growth_probability_exact");
  const double alpha = alpha_threshold(g, mode);
  // Strictly more than alpha*t wins qualify; a history landing exactly on
  // the threshold ties the target instead of beating it.
  const std::int64_t first = static_cast<std::int64_t>(std::floor(alpha * static_cast<double>(t))) + 1;
  if (first > t) return 0.0;
  const double log_p = std::log(g.p());
  const double log_q = std::log(g.q());
  LogSumExp acc;
  for (std::int64_t n = first; n <= t; ++n) {
    acc.add_log(detail::log_choose(t, n) +
                static_cast<double>(n) * log_p +
                static_cast<double>(t - n) * log_q);
  }
  return std::exp(acc.log_total());
}

double growth_probability_gaussian(const GameParams& g, std::int64_t t, TailMode mode) {
  check_horizon(t, "growth_probability_gaussian");
  const double alpha = alpha_threshold(g, mode);
  const double z = alpha - g.p();
  return std::exp(-static_cast<double>(t) * z * z / (2.0 * g.p() * g.q()));
}

RequiredRealizations required_realizations(const GameParams& g, std::int64_t t, TailMode mode) {
  check_horizon(t, "required_realizations");
  const double alpha = alpha_threshold(g, mode);
  const double z = alpha - g.p();
  RequiredRealizations req;
  req.log_count = static_cast<double>(t) * z * z / (2.0 * g.p() * g.q());
  req.count = std::exp(req.log_count);  // +inf past ~e^709, by design
  return req;
}

TailReport make_tail_report(const GameParams& g, std::int64_t t, TailMode mode) {
  TailReport report;
  report.mode = mode;
  report.t = t;
  report.alpha = alpha_threshold(g, mode);
  report.prob_exact = growth_probability_exact(g, t, mode);
  report.prob_gaussian = growth_probability_gaussian(g, t, mode);
  report.realizations = required_realizations(g, t, mode);
  return report;
}

ContributionDecomposition contribution_decomposition(const GameParams& g, std::int64_t t) {
  check_horizon(t, "contribution_decomposition");
  const double la = std::log(g.a());
  const double lb = g.b() > 0.0 ? std::log(g.b()) : kNegInf;
  const double log_p = std::log(g.p());
  const double log_q = std::log(g.q());

  ContributionDecomposition out;
  out.rows.reserve(static_cast<std::size_t>(t + 1));
  for (std::int64_t n = 0; n <= t; ++n) {
    const std::int64_t losses = t - n;
    ContributionRow row;
    row.n = n;
    // Skip the loss term when there are no losses; 0 * (-inf) is a NaN trap
    // for b = 0 games.
    row.log_value = static_cast<double>(n) * la +
                    (losses > 0 ? static_cast<double>(losses) * lb : 0.0);
    row.log_prob = detail::log_choose(t, n) +
                   static_cast<double>(n) * log_p +
                   static_cast<double>(losses) * log_q;
    row.log_contribution = row.log_value + row.log_prob;
    out.rows.push_back(row);
  }

  // The binomial mode has the closed form floor((t+1)p); scanning the rows
  // would reproduce it except when two modes tie to the last bit.
  out.argmax_prob = static_cast<std::int64_t>(std::floor((static_cast<double>(t) + 1.0) * g.p()));
  out.typical_contribution = out.rows[static_cast<std::size_t>(out.argmax_prob)].log_value;

  std::int64_t best = 0;
  for (std::int64_t n = 1; n <= t; ++n) {
    if (out.rows[static_cast<std::size_t>(n)].log_contribution >=
        out.rows[static_cast<std::size_t>(best)].log_contribution) {
      best = n;
    }
  }
  out.argmax_contribution = best;
  return out;
}

}  // namespace multigrowth::tails
