#pragma once

#include <stdexcept>
#include <string>

namespace mimo_lab {

// Bad or inconsistent user input (config files, CLI arguments). Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure could not produce a trustworthy answer. Maps to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, int iterations, double residual)
      : NumericalError(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

// Orthogonal pilots need one channel use per user.
class PilotBudgetError : public std::invalid_argument {
 public:
  explicit PilotBudgetError(const std::string& what) : std::invalid_argument(what) {}
};

class UnsupportedModelError : public std::invalid_argument {
 public:
  explicit UnsupportedModelError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a full M-dimensional computation would exceed the configured size cap.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

}  // namespace mimo_lab
