#pragma once

#include <stdexcept>
#include <string>

namespace bmf {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or size mismatch between operands, or non-positive dimensions.
class dimension_error : public error {
 public:
  using error::error;
};

// Scalar argument outside its documented range.
class argument_error : public error {
 public:
  using error::error;
};

// Input values violate a domain precondition (e.g. negative magnitudes).
class domain_error : public error {
 public:
  using error::error;
};

// A format cannot represent the input (e.g. column index overflow).
class capacity_error : public error {
 public:
  using error::error;
};

// No admissible solution exists for the requested optimization.
class infeasible_error : public error {
 public:
  using error::error;
};

// Malformed or truncated on-disk data.
class parse_error : public error {
 public:
  using error::error;
};

// Filesystem-level failure (open/read/write).
class io_error : public error {
 public:
  using error::error;
};

}  // namespace bmf
