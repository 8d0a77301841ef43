#pragma once

#include <stdexcept>
#include <string>

namespace momentcone {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  Domain = 3,
  InsufficientMoments = 4,
  Parse = 5,
};

// Single exception type for the core; the C layer maps code() onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace momentcone
