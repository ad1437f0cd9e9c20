#pragma once

#include <stdexcept>
#include <string>

namespace oceansrc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the physical domain (depth outside [0, h], point inside the
// inclusion, invalid geometry, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Iterations or quadratures that failed to converge, or diverged.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A dense allocation would exceed the configured memory cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace oceansrc
