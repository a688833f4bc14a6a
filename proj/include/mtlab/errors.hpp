#pragma once

#include <stdexcept>
#include <string>

namespace mtlab {

enum class ErrorCode {
  InvalidArgument,
  NegativeWeight,
  UnequalMass,
  TooLarge,
  OutOfRange,
  BranchBeforeArrival,
  HorizonExceeded,
  InvalidStep,
  NonPositiveSpeed,
  DenominatorNonpositive,
  ConfigInvalid,
  AssumptionViolated,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

const char* error_code_name(ErrorCode code);

}  // namespace mtlab
