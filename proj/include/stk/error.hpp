#pragma once

#include <stdexcept>
#include <string>

namespace stk {

enum class ErrorKind {
  kInvalidArgument,
  kInvalidDistribution,
  kShape,
  kAlignment,
  kUnknownLabel,
  kCoverage,
  kIntegrity,
  kParse,
  kSchema,
  kDegenerateMarginals,
  kDivergence,
  kIo,
  kUsage,
};

const char* ErrorKindName(ErrorKind kind);

// All library failures surface as stk::Error; kind() drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace stk
