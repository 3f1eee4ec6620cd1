#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lerrw {

/// Invalid configuration or parameters supplied by the caller. The CLI maps
/// this to exit code 2, so the message should name the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function (digamma at z <= 0,
/// Beta shapes that are not positive, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A path that is not a nearest-neighbour walk on {0, 1, 2, ...} from 0.
class InvalidPathError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No closed-form predictor row covers the requested (alpha, beta) pair.
class NoRegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration requested above the supported size cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A resistance quantity left the representable double range.
class OverflowError : public std::overflow_error {
 public:
  OverflowError(const std::string& what, std::uint64_t site)
      : std::overflow_error(what + " (at x = " + std::to_string(site) + ")"),
        site_(site) {}

  std::uint64_t site() const noexcept { return site_; }

 private:
  std::uint64_t site_;
};

}  // namespace lerrw
