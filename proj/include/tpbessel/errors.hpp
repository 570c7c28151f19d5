#pragma once

#include <stdexcept>
#include <string>

namespace tpbessel {

// Argument outside the mathematical domain (cut, singular point).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation inside the validity region of an approximation was refused.
class guard_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Contour or config parameters violate their invariants.
class spec_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Oracle could not certify a value within its precision limit.
class precision_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tpbessel
