#pragma once

#include <stdexcept>

namespace curvreal {

// Operands disagree in dimension or degree cap. Mixing caps is never resolved
// implicitly; callers truncate on purpose or not at all.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical precondition is violated: non-unit constant term, degenerate
// form, wrong signature, dimension below what an operation needs.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A document failed load-time validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed. Always a bug in this library, never user error.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace curvreal
