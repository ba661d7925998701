#pragma once

#include <stdexcept>
#include <string>

namespace burkholder {

/// Incompatible statistic tags or shapes were combined.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An argument lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine failed to converge or produced a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace burkholder
