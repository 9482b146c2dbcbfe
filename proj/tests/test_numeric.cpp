#include "doctest.h"

#include <cmath>
#include <limits>

#include "multigrowth/numeric.hpp"

using multigrowth::LogSumExp;
using multigrowth::NeumaierSum;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("compensated sum survives catastrophic cancellation") {
  // Plain left-to-right addition returns 0 here; the compensation keeps the
  // small terms alive.
  NeumaierSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);
}

TEST_CASE("compensated sum of many small terms is exact to the ulp") {
  NeumaierSum s;
  for (int i = 0; i < 10; ++i) s.add(0.1);
  CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("log-space accumulator reproduces small exact sums") {
  LogSumExp lse;
  lse.add_log(std::log(1.0));
  lse.add_log(std::log(2.0));
  lse.add_log(std::log(3.0));
  CHECK(lse.log_total() == doctest::Approx(std::log(6.0)).epsilon(1e-15));
}

TEST_CASE("log-space accumulator shifts far outside double range") {
  LogSumExp lse;
  lse.add_log(2000.0);
  lse.add_log(2000.0);
  CHECK(lse.log_total() == doctest::Approx(2000.0 + std::log(2.0)).epsilon(1e-15));

  LogSumExp tiny;
  tiny.add_log(-2000.0);
  tiny.add_log(-2000.0);
  CHECK(tiny.log_total() == doctest::Approx(-2000.0 + std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("zero terms leave the log-space accumulator empty") {
  LogSumExp lse;
  CHECK(lse.log_total() == -kInf);
  lse.add_log(-kInf);
  CHECK(lse.log_total() == -kInf);
  lse.add_log(0.0);  // one unit of mass
  lse.add_log(-kInf);
  CHECK(lse.log_total() == 0.0);
}

TEST_CASE("merging partial accumulators matches one big accumulation") {
  LogSumExp whole, left, right;
  for (int i = 0; i < 40; ++i) {
    const double v = -3.0 * i + 0.25 * (i % 7);
    whole.add_log(v);
    (i < 20 ? left : right).add_log(v);
  }
  left.merge(right);
  CHECK(left.log_total() == doctest::Approx(whole.log_total()).epsilon(1e-14));
}
