#pragma once

#include <stdexcept>
#include <string>

namespace hyperlab {

/// Raised for invalid mathematical input (bad parameters, singular data...).
/// The CLI maps it to exit status 1.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hyperlab
