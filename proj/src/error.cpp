#include "qgf/error.hpp"

namespace qgf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianS: return "NonHermitianS";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidLines: return "InvalidLines";
    case ErrorCode::NonpositiveEnergy: return "NonpositiveEnergy";
    case ErrorCode::SingularPencil: return "SingularPencil";
    case ErrorCode::SingularCore: return "SingularCore";
    case ErrorCode::DegenerateElimination: return "DegenerateElimination";
    case ErrorCode::SingularInner: return "SingularInner";
    case ErrorCode::SingularD2: return "SingularD2";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::UnsupportedLayout: return "UnsupportedLayout";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InfeasibleNegCase: return "InfeasibleNegCase";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace qgf
