#pragma once

#include <stdexcept>
#include <string>

namespace mpsdfe {

/// Malformed input: mismatched lengths or bond dimensions, out-of-range
/// parameters, or a violated precondition such as a non-canonical MPS.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical invariant failed: zero-norm state, negative weight beyond
/// roundoff, imaginary part where a real value is required.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace detail
}  // namespace mpsdfe
