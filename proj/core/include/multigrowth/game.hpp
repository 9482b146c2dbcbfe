#pragma once

#include <cmath>
#include <stdexcept>

namespace multigrowth {

// One round of a binary multiplicative game: wealth is multiplied by `a`
// with probability `p` and by `b` with probability `1 - p`.
//
// Conventions: 0 <= b <= a, a > 0, p strictly inside (0, 1). b == 0 models
// total loss, b == a a deterministic game. Degenerate win probabilities are
// rejected because every rate formula divides by p or q somewhere and the
// game they describe is not random.
class GameParams {
 public:
  GameParams(double a, double b, double p) : a_(a), b_(b), p_(p) {
    if (!std::isfinite(a) || a <= 0.0)
      throw std::invalid_argument("GameParams: win factor a must be finite and > 0");
    if (!std::isfinite(b) || b < 0.0)
      throw std::invalid_argument("GameParams: loss factor b must be finite and >= 0");
    if (b > a)
      throw std::invalid_argument("GameParams: loss factor b must not exceed win factor a");
    if (!std::isfinite(p) || p <= 0.0 || p >= 1.0)
      throw std::invalid_argument("GameParams: win probability p must lie strictly in (0, 1)");
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return 1.0 - p_; }

 private:
  double a_;
  double b_;
  double p_;
};

// Betting view of the same game: stake a fraction f of current wealth on an
// event with win probability p paying d-to-1. Winning multiplies wealth by
// 1 + f*d, losing by 1 - f.
class KellyParams {
 public:
  KellyParams(double p, double d, double f) : p_(p), d_(d), f_(f) {
    if (!std::isfinite(p) || p <= 0.0 || p >= 1.0)
      throw std::invalid_argument("KellyParams: win probability p must lie strictly in (0, 1)");
    if (!std::isfinite(d) || d <= 0.0)
      throw std::invalid_argument("KellyParams: payout ratio d must be finite and > 0");
    if (!std::isfinite(f) || f < 0.0 || f >= 1.0)
      throw std::invalid_argument("KellyParams: stake fraction f must lie in [0, 1)");
  }

  double p() const noexcept { return p_; }
  double d() const noexcept { return d_; }
  double f() const noexcept { return f_; }

  GameParams to_game() const { return GameParams(1.0 + f_ * d_, 1.0 - f_, p_); }

 private:
  double p_;
  double d_;
  double f_;
};

// Inverse of KellyParams::to_game. Only games with b < 1 (a real risk of
// losing part of the stake) and a > 1 have a betting representation.
inline KellyParams to_kelly(const GameParams& g) {
  if (g.b() >= 1.0 || g.a() <= 1.0)
    throw std::domain_error("to_kelly: game needs b < 1 and a > 1 to be a stake");
  const double f = 1.0 - g.b();
  const double d = (g.a() - 1.0) / f;
  return KellyParams(g.p(), d, f);
}

}  // namespace multigrowth
