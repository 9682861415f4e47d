#pragma once

#include <stdexcept>
#include <string>

namespace depthlab {

/// A precondition on an argument value was violated (out-of-range key, bad rate, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The request exceeds a configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace depthlab
