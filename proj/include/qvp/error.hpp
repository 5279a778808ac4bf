#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qvp {

enum class ErrorCode {
  kParse,
  kValidation,
  kDimensionMismatch,
  kDenominatorNonPositive,
  kNonnegativityViolated,
  kDenominatorNonPositiveOnSimplex,
  kInfeasibleSet,
  kInfeasiblePoint,
  kUnbounded,
  kInvalidBox,
  kDegenerateIdealAttained,
  kVertexNotInSet,
  kWNotAbove,
  kBracketInversion,
  kIterationCapExceeded,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qvp
