#include "qgf/tolerances.hpp"

#include <cstdlib>
#include <string>

namespace qgf {

Tolerances Tolerances::from_env() {
  Tolerances tol;
  if (const char* raw = std::getenv("QGF_TOL")) {
    try {
      const double value = std::stod(raw);
      if (value > 0.0) {
        tol.hermitian = value;
        tol.selfadjoint = value;
        tol.flat = value;
      }
    } catch (const std::exception&) {
      // malformed override: keep defaults
    }
  }
  return tol;
}

}  // namespace qgf
