// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#ifndef QTENSOR_COMMON_HPP
#define QTENSOR_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtensor {

using Complex = std::complex<double>;

// Misuse of an API contract (bad arguments, mismatched jets, unknown names).
// Maps to exit code 2 at the CLI boundary.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// A point outside the domain of a model, or a field precondition (phi > 0)
// violated at the requested point.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Singular constant term where an inverse was required.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double smallest_singular_value)
      : std::runtime_error(what + " (smallest singular value " +
                           std::to_string(smallest_singular_value) + ")"),
        smallest_singular_value(smallest_singular_value) {}
  double smallest_singular_value;
};

// Numerically inconsistent data handed between modules (e.g. a supposedly
// orthonormal-frame tensor with a large imaginary diagonal part).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A chart point, n complex coordinates.
using Point = std::vector<Complex>;

// Relative residual against scale = max(1, reference max-norm).
inline double relative_residual(double abs_residual, double reference_scale) {
  return abs_residual / std::max(1.0, reference_scale);
}

}  // namespace qtensor

#endif
