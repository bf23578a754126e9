#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace see {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid dimensions, hyperparameters or names supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// API misuse at run time, e.g. stepping a finished episode or sampling an
/// empty buffer.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant (mismatched forward trace and the like).
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Raised when a loss or gradient becomes non-finite. `step()` carries the
/// optimizer step or environment step at which it happened, depending on
/// which layer raised it last.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& reason, std::uint64_t step)
      : Error(reason + " (step " + std::to_string(step) + ")"), reason_(reason), step_(step) {}

  /// Re-raise at an outer layer with a new step and a fully formatted message.
  DivergenceError(std::uint64_t step, const std::string& message, const std::string& reason)
      : Error(message), reason_(reason), step_(step) {}

  const std::string& reason() const noexcept { return reason_; }
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::string reason_;
  std::uint64_t step_;
};

}  // namespace see
