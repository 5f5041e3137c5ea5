#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgf {

enum class ErrorCode {
  NonHermitianS,
  DimensionMismatch,
  InvalidLines,
  NonpositiveEnergy,
  SingularPencil,
  SingularCore,
  DegenerateElimination,
  SingularInner,
  SingularD2,
  SingularSystem,
  ConfigMismatch,
  UnsupportedLayout,
  BadAlpha,
  Infeasible,
  InfeasibleNegCase,
  InvalidSpec,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the
// message always starts with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qgf
