#pragma once

#include <stdexcept>
#include <string>

namespace caplab {

/// Base class for all errors raised by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A label or dimension does not fit the subsystem layout it is used with.
struct layout_error : error {
  using error::error;
};

/// A numerical object violates one of its invariants (normalization,
/// hermiticity, unitarity, ...) beyond the stated tolerance.
struct validity_error : error {
  using error::error;
};

/// Malformed input file or gate descriptor.
struct parse_error : error {
  using error::error;
};

/// The operation is not defined for these dimensions.
struct unsupported_error : error {
  using error::error;
};

/// A stated precondition failed; carries the offending residual.
struct precondition_error : error {
  double residual;
  precondition_error(const std::string& what, double r) : error(what), residual(r) {}
};

}  // namespace caplab
