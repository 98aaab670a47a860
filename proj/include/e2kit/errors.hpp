#pragma once

#include <stdexcept>
#include <string>

namespace e2kit {

// Exit-code convention shared by the library and the CLI:
//   1 = assertion / acceptance failure
//   2 = usage / config / violated-hypothesis error
//   3 = resource ceiling (enumeration size, precision budget)
class Error : public std::runtime_error {
 public:
  Error(std::string msg, int exit_code)
      : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

// Bad CLI arguments, malformed config files, unknown keys.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::string msg) : Error(std::move(msg), 2) {}
};

// A parameter window or sum hypothesis failed; the message names the
// violated inequality.
class WindowError : public Error {
 public:
  explicit WindowError(std::string msg) : Error(std::move(msg), 2) {}
};

// The Type II admissibility gate (tau threshold or empty N-window).
class AdmissibilityError : public Error {
 public:
  explicit AdmissibilityError(std::string msg) : Error(std::move(msg), 2) {}
};

// Requested enumeration exceeds the configured ceiling.
class CeilingError : public Error {
 public:
  explicit CeilingError(std::string msg) : Error(std::move(msg), 3) {}
};

// An interval was too wide to decide a comparison / produce the next
// partial quotient.
class PrecisionError : public Error {
 public:
  explicit PrecisionError(std::string msg) : Error(std::move(msg), 3) {}
};

// A truncated tail cannot be brought below the requested budget.
class TruncationError : public Error {
 public:
  explicit TruncationError(std::string msg) : Error(std::move(msg), 2) {}
};

// Internal numeric failure (quadrature non-convergence, oracle mismatch).
class ComputeError : public Error {
 public:
  explicit ComputeError(std::string msg) : Error(std::move(msg), 1) {}
};

}  // namespace e2kit
