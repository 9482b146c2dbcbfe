#pragma once

#include <stdexcept>
#include <string>

namespace multigrowth {

// A root or threshold was requested where none exists, e.g. asking for the
// sharing level that turns a group profitable when even full sharing loses.
class NoRootError : public std::runtime_error {
 public:
  explicit NoRootError(const std::string& what) : std::runtime_error(what) {}
};

// A stochastic search ran out of its sampling budget before the result could
// be certified against Monte Carlo noise.
class BudgetExhaustedError : public std::runtime_error {
 public:
  explicit BudgetExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace multigrowth
