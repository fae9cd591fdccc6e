#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maflow {

/// Invalid index, order or parameter combination.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the domain of a formula (e.g. spectrum outside the positive cone).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or non-finite field data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The potential no longer gives a positive form chi_u at some grid point.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& what, std::size_t point, double margin)
      : std::runtime_error(what), point_(point), margin_(margin) {}

  std::size_t point() const noexcept { return point_; }
  double margin() const noexcept { return margin_; }

 private:
  std::size_t point_;
  double margin_;
};

/// Step size was halved too many times without recovering admissibility.
class StiffnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation called on a state that does not satisfy its precondition.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Not enough usable samples for a least-squares decay fit.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maflow
