#pragma once

#include <stdexcept>
#include <string>

namespace qnsp {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid or run configuration (odd grid size, bad parameter ranges, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Operation called with arguments of the wrong rank, sign or shape.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Elliptic problem without a solution (non-zero mean source on the torus).
class SolvabilityError : public Error {
 public:
  SolvabilityError(const std::string& what, double mean)
      : Error(what + " (mean = " + std::to_string(mean) + ")"), mean_(mean) {}
  double mean() const noexcept { return mean_; }

 private:
  double mean_;
};

/// A nonlinear function was evaluated outside its domain (e.g. log of n <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Density left the admissible band during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(double t, double min_density, double max_density)
      : Error("density floor violated at t = " + std::to_string(t) +
              " (min n = " + std::to_string(min_density) +
              ", max n = " + std::to_string(max_density) + ")"),
        t_(t),
        min_n_(min_density),
        max_n_(max_density) {}
  double time() const noexcept { return t_; }
  double min_density() const noexcept { return min_n_; }
  double max_density() const noexcept { return max_n_; }

 private:
  double t_, min_n_, max_n_;
};

/// NaN or Inf detected in a state.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double t) : Error(what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// A hierarchy order was requested before the orders it depends on.
class DependencyError : public Error {
 public:
  using Error::Error;
};

/// Polynomial extraction of an epsilon-Taylor coefficient is ill-posed.
class ExtractionError : public Error {
 public:
  ExtractionError(const std::string& what, double condition)
      : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Time requested outside a stored trajectory.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Least-squares rate fit impossible (too few points, non-positive errors).
class FitError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  IoError(const std::string& what, const std::string& path)
      : Error(what + ": " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qnsp
