#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "multigrowth/game.hpp"
#include "multigrowth/numeric.hpp"
#include "multigrowth/tails.hpp"

using namespace multigrowth;
using namespace multigrowth::tails;

namespace {

const GameParams kRef(2.0, 1.0 / 3.0, 0.5);
const GameParams kSymmetric(2.0, 0.5, 0.5);

// Frozen exact binomial tails for the reference game (break-even threshold),
// from an independent 50-digit evaluation.
constexpr double kExact100 = 0.0104893678389259;
constexpr double kExact400 = 2.44987504671937e-6;
constexpr double kExact1600 = 3.96321388864454e-20;

}  // namespace

TEST_CASE("win-fraction thresholds of the reference game") {
  const double beat_one = alpha_threshold(kRef, TailMode::beat_one);
  CHECK(beat_one == doctest::Approx(std::log(3.0) / std::log(6.0)).epsilon(1e-15));
  // Defining property: a history at exactly the threshold fraction neither
  // grows nor shrinks.
  CHECK(beat_one * std::log(kRef.a()) + (1.0 - beat_one) * std::log(kRef.b()) ==
        doctest::Approx(0.0).epsilon(1e-14));

  const double beat_arith = alpha_threshold(kRef, TailMode::beat_arithmetic);
  CHECK(beat_arith == doctest::Approx(std::log(3.5) / std::log(6.0)).epsilon(1e-15));
  CHECK(beat_arith > beat_one);  // beating the mean takes more wins

  CHECK(alpha_threshold(kSymmetric, TailMode::beat_one) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("threshold needs a genuine win-loss split") {
  CHECK_THROWS_AS(alpha_threshold(GameParams(3.0, 0.0, 0.5), TailMode::beat_one),
                  std::domain_error);
  CHECK_THROWS_AS(alpha_threshold(GameParams(2.0, 1.0, 0.5), TailMode::beat_one),
                  std::domain_error);
  CHECK_THROWS_AS(alpha_threshold(GameParams(0.9, 0.5, 0.5), TailMode::beat_one),
                  std::domain_error);
}

TEST_CASE("exact growth probabilities match the frozen tails") {
  CHECK(growth_probability_exact(kRef, 100, TailMode::beat_one) ==
        doctest::Approx(kExact100).epsilon(1e-10));
  CHECK(growth_probability_exact(kRef, 400, TailMode::beat_one) ==
        doctest::Approx(kExact400).epsilon(1e-10));
  CHECK(growth_probability_exact(kRef, 1600, TailMode::beat_one) ==
        doctest::Approx(kExact1600).epsilon(1e-10));
}

TEST_CASE("two-round symmetric game grows only on a double win") {
  CHECK(growth_probability_exact(kSymmetric, 2, TailMode::beat_one) ==
        doctest::Approx(0.25).epsilon(1e-15));
  // One round: a single win is already above water.
  CHECK(growth_probability_exact(kSymmetric, 1, TailMode::beat_one) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("largest-integrand approximation at the worked horizon") {
  const double alpha = std::log(3.0) / std::log(6.0);
  const double expected = std::exp(-100.0 * (alpha - 0.5) * (alpha - 0.5) / 0.5);
  CHECK(growth_probability_gaussian(kRef, 100, TailMode::beat_one) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(growth_probability_gaussian(kRef, 100, TailMode::beat_one) ==
        doctest::Approx(0.0772693857752).epsilon(1e-9));
}

TEST_CASE("marginal game needs no luck at all") {
  // alpha equals p, the exponent vanishes, and one realization suffices.
  CHECK(growth_probability_gaussian(kSymmetric, 100, TailMode::beat_one) == 1.0);
  const RequiredRealizations req =
      required_realizations(kSymmetric, 1000, TailMode::beat_one);
  CHECK(req.count == 1.0);
  CHECK(req.log_count == 0.0);
}

TEST_CASE("decay slopes of the exact and approximate tails agree") {
  // Least-squares slope of ln P against t over three horizons, for both
  // forms; the approximation drops a slowly varying prefactor, so only the
  // slopes are comparable.
  const double ts[] = {100.0, 400.0, 1600.0};
  double exact_log[3], gauss_log[3];
  for (int i = 0; i < 3; ++i) {
    const auto t = static_cast<std::int64_t>(ts[i]);
    exact_log[i] = std::log(growth_probability_exact(kRef, t, TailMode::beat_one));
    gauss_log[i] = std::log(growth_probability_gaussian(kRef, t, TailMode::beat_one));
  }
  const auto slope = [&](const double* y) {
    const double tbar = (ts[0] + ts[1] + ts[2]) / 3.0;
    const double ybar = (y[0] + y[1] + y[2]) / 3.0;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 3; ++i) {
      num += (ts[i] - tbar) * (y[i] - ybar);
      den += (ts[i] - tbar) * (ts[i] - tbar);
    }
    return num / den;
  };
  const double ratio = slope(exact_log) / slope(gauss_log);
  CHECK(ratio > 1.0);
  CHECK(ratio < 1.15);
}

TEST_CASE("realization counts are reciprocals of the approximate tail") {
  const RequiredRealizations beat1 = required_realizations(kRef, 100, TailMode::beat_one);
  CHECK(beat1.count == doctest::Approx(12.9417361089).epsilon(1e-9));
  CHECK(beat1.log_count ==
        doctest::Approx(-std::log(growth_probability_gaussian(kRef, 100, TailMode::beat_one)))
            .epsilon(1e-12));

  const RequiredRealizations arith =
      required_realizations(kRef, 100, TailMode::beat_arithmetic);
  CHECK(arith.count == doctest::Approx(2792.13103393).epsilon(1e-8));
  CHECK(arith.log_count == doctest::Approx(7.93456039470555).epsilon(1e-10));
}

TEST_CASE("huge realization counts survive in log form") {
  const RequiredRealizations req =
      required_realizations(kRef, 1 << 20, TailMode::beat_arithmetic);
  CHECK(std::isinf(req.count));  // the plain count overflows, by design
  CHECK(req.log_count == doctest::Approx(1048576.0 * 0.0793456039470555).epsilon(1e-9));
}

TEST_CASE("full report bundles the pieces consistently") {
  const TailReport rep = make_tail_report(kRef, 100, TailMode::beat_one);
  CHECK(rep.t == 100);
  CHECK(rep.mode == TailMode::beat_one);
  CHECK(rep.alpha == alpha_threshold(kRef, TailMode::beat_one));
  CHECK(rep.prob_exact == growth_probability_exact(kRef, 100, TailMode::beat_one));
  CHECK(rep.prob_gaussian == growth_probability_gaussian(kRef, 100, TailMode::beat_one));
  CHECK(rep.realizations.count >= 1.0);
  CHECK(rep.prob_exact >= 0.0);
  CHECK(rep.prob_exact <= 1.0);
}

TEST_CASE("win-count decomposition of the ensemble mean at the worked horizon") {
  const ContributionDecomposition dec = contribution_decomposition(kRef, 100);
  REQUIRE(dec.rows.size() == 101);
  CHECK(dec.argmax_prob == 50);
  CHECK(dec.typical_contribution ==
        doctest::Approx(50.0 * std::log(2.0 / 3.0)).epsilon(1e-12));
  CHECK(dec.argmax_contribution == 86);

  // Each row is self-consistent and the columns close onto the binomial
  // theorem: probabilities sum to 1, contributions to the mean growth.
  LogSumExp prob_sum, contrib_sum;
  for (const auto& row : dec.rows) {
    CHECK(row.log_contribution == row.log_value + row.log_prob);
    prob_sum.add_log(row.log_prob);
    contrib_sum.add_log(row.log_contribution);
  }
  CHECK(std::abs(prob_sum.log_total()) < 1e-9);
  CHECK(std::abs(contrib_sum.log_total() - 100.0 * std::log(7.0 / 6.0)) < 1e-9);

  // The payoff-weighted maximum sits in histories that are essentially
  // unreachable: ~3.6 sigma above the mode, probability below a percent.
  CHECK(std::exp(dec.rows[86].log_prob) < 1e-2);
  CHECK(dec.rows[86].log_contribution > dec.rows[50].log_contribution);
}

TEST_CASE("decomposition handles the all-or-nothing game") {
  const ContributionDecomposition dec = contribution_decomposition(GameParams(3.0, 0.0, 0.5), 5);
  REQUIRE(dec.rows.size() == 6);
  const double inf = std::numeric_limits<double>::infinity();
  for (int n = 0; n < 5; ++n) {
    CHECK(dec.rows[n].log_value == -inf);
    CHECK(dec.rows[n].log_contribution == -inf);
  }
  CHECK(dec.rows[5].log_value == doctest::Approx(5.0 * std::log(3.0)).epsilon(1e-15));
  LogSumExp contrib_sum;
  for (const auto& row : dec.rows) contrib_sum.add_log(row.log_contribution);
  CHECK(contrib_sum.log_total() ==
        doctest::Approx(5.0 * std::log(1.5)).epsilon(1e-12));
  CHECK(dec.argmax_contribution == 5);
}

TEST_CASE("typical history tracks the geometric mean over long horizons") {
  const ContributionDecomposition dec = contribution_decomposition(kRef, 1000);
  CHECK(dec.argmax_prob == 500);
  CHECK(dec.typical_contribution / 1000.0 ==
        doctest::Approx(std::log(std::sqrt(2.0 / 3.0))).epsilon(1e-12));
}
