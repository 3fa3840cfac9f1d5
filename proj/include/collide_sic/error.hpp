// Error types shared by every collide_sic module.
//
// Each failure class maps to a stable CLI exit code (see tools/collide_sic.cpp):
// configuration and usage problems exit 2, work-budget refusals exit 3.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace collide_sic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed inputs: ragged sequence files, mismatched periods, bad permutations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A correlation query that does not fit the sequence set it is evaluated on.
class InvalidQuery : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Rate vectors off the capacity boundary where the boundary is required.
class BoundaryViolation : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// G-array with a wrong shape or a row of the wrong weight.
class LayoutError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// (n, m) coding parameters that the finite-field code cannot realise.
class ParameterError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class FieldCapacityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Fewer distinct coded packets than the code dimension.  Not fatal for SIC:
/// the receiver simply waits for another iteration.
class InsufficientPackets : public Error {
 public:
  InsufficientPackets(std::size_t have, std::size_t need)
      : Error("insufficient packets: have " + std::to_string(have) + ", need " +
              std::to_string(need)),
        have_(have),
        need_(need) {}
  std::size_t have() const noexcept { return have_; }
  std::size_t need() const noexcept { return need_; }

 private:
  std::size_t have_;
  std::size_t need_;
};

/// Exhaustive enumeration larger than the configured work budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, long double estimate, std::uint64_t budget)
      : Error(what + ": estimated " + std::to_string(static_cast<double>(estimate)) +
              " work units exceeds budget " + std::to_string(budget)),
        estimate_(estimate),
        budget_(budget) {}
  long double estimate() const noexcept { return estimate_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  long double estimate_;
  std::uint64_t budget_;
};

/// Observed kind pattern matches no shift vector of the given set.
class TraceMismatch : public Error {
 public:
  using Error::Error;
};

/// Blind identification produced more than one consistent shift vector.
class AmbiguousIdentification : public Error {
 public:
  explicit AmbiguousIdentification(std::vector<std::vector<std::size_t>> candidates)
      : Error("ambiguous shift identification: " + std::to_string(candidates.size()) +
              " candidate shift vectors"),
        candidates_(std::move(candidates)) {}
  const std::vector<std::vector<std::size_t>>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<std::vector<std::size_t>> candidates_;
};

/// A guarantee of the construction or planner was violated; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace collide_sic
