#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pitchap {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configuration value violates a block or scenario invariant.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)), reason_(what) {}

  const std::string& key() const noexcept { return key_; }
  /// Message without the key prefix.
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string key_;
  std::string reason_;
};

/// The tail-sizing moment balance has a vanishing denominator.
class SingularConfigurationError : public Error {
 public:
  SingularConfigurationError(const std::string& what, std::string term)
      : Error(what), term_(std::move(term)) {}

  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

/// A closed-loop run produced a non-finite (or runaway) signal.
class DivergedRunError : public Error {
 public:
  DivergedRunError(std::size_t step, std::string signal, std::string leg = {})
      : Error(message(step, signal, leg)),
        step_(step),
        signal_(std::move(signal)),
        leg_(std::move(leg)) {}

  std::size_t step() const noexcept { return step_; }
  const std::string& signal() const noexcept { return signal_; }
  const std::string& leg() const noexcept { return leg_; }

  DivergedRunError with_leg(std::string leg) const {
    return DivergedRunError(step_, signal_, std::move(leg));
  }

 private:
  static std::string message(std::size_t step, const std::string& signal,
                             const std::string& leg) {
    std::string m = "run diverged at step " + std::to_string(step) + " (" + signal + ")";
    if (!leg.empty()) m = "leg " + leg + ": " + m;
    return m;
  }

  std::size_t step_;
  std::string signal_;
  std::string leg_;
};

/// The response never reached the 10% threshold of the commanded step.
class NoResponseError : public Error {
 public:
  using Error::Error;
};

/// Every vertex of the initial simplex diverged.
class UntunableStartError : public Error {
 public:
  using Error::Error;
};

}  // namespace pitchap
