// errors.hpp
// Exception hierarchy shared by the whole library.

#pragma once

#include <stdexcept>
#include <string>

namespace qpm {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape or index disagreement between operands.
class DimensionError : public Error {
  using Error::Error;
};

// An input document does not match the expected encoding.
class SchemaError : public Error {
  using Error::Error;
};

// A domain predicate failed: non-hermitian observable, invalid density,
// broken measurement family, malformed hidden-variable model, ...
class ValidationError : public Error {
  using Error::Error;
};

// Numerical integrity breach: a residual or imaginary part above tolerance,
// or an iteration that did not converge.
class NumericalError : public Error {
  using Error::Error;
};

}  // namespace qpm
