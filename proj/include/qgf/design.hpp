#pragma once

// Construction of flat-passband couplings in the standard r = 2 layout
// (input 0, output 1, controllers, then drains).

#include <vector>

#include <json.hpp>

#include "qgf/closed_forms.hpp"
#include "qgf/flatband.hpp"

namespace qgf {

enum class MaximalVariant {
  Zero,     // S = 0
  Plus,     // S = s [[1, conj(alpha)], [alpha, 1]]
  PmUpper,  // S = s [[1 + sqrt2, conj(alpha)], [alpha, 1 - sqrt2]], not flat (g != 0)
  PmLower,  // S = s [[1 - sqrt2, conj(alpha)], [alpha, 1 + sqrt2]], not flat (g != 0)
};

// T = [[v, w], [alpha v, -alpha w]] with ||v|| = ||w|| = 1/sqrt(2) spread
// evenly over dim_v controllers and dim_w drains. Passband value 1/4 for the
// Zero and Plus variants.
Layout design_maximal(cplx alpha, int dim_v, int dim_w, double s, MaximalVariant variant,
                      double V = 1.0);

struct DesignSpec {
  int controllers = 1;
  int drains = 1;
  FlatCase flat_case = FlatCase::SZero;
  CRow v1;                 // controllers entries
  cplx lambda{1.0, 0.0};   // v2 = lambda v1
  CRow w1;                 // drains entries; only its direction is used in the opposite_sign case
  double w2_phase = 0.0;   // phase of the w2 component orthogonal to w1
  double s = 0.0;          // scale of S (ignored for S_zero)
  double V = 1.0;          // controller potential
};

struct SignPairing {
  int ratio = 1;  // sign in sqrt(|s11|/|s22|) = (sqrt2 + sign sgn(s11)) ||v1||/||v2||
  int s21 = 1;    // sign in s21 = sign sqrt(|s11 s22|) v2 v1^* / (||v1|| ||v2||)
};

// Builds w2 from the diagonality and norm conditions and S from the requested
// case. In the opposite_sign case the four sign pairings are tried in order
// (+,+), (+,-), (-,+), (-,-) and the first passing check_flat is returned.
// None does: s11 s22 < 0 makes det S < 0, so g = -det S cannot vanish, and
// the call ends in Infeasible.
Layout design_flat(const DesignSpec& spec, const Tolerances& tol = {});

// Partition implied by the spec (v2, the rescaled w1 and the solved w2),
// without S.
Partition design_partition(const DesignSpec& spec);

// Opposite_sign pairings whose coupling passes check_flat.
std::vector<SignPairing> admissible_pairings(const DesignSpec& spec, const Tolerances& tol = {});

nlohmann::json to_json(const DesignSpec& spec);
DesignSpec design_spec_from_json(const nlohmann::json& j);

}  // namespace qgf
