#pragma once

// Flat-passband analysis for r = 2 couplings. Standard layout: input on
// coordinate 0, output on 1, controllers on 2..q-1 (shared potential V),
// drains on q..n-1, and
//
//   T = [[v1, w1],
//        [v2, w2]]
//
// with v_i over the controller columns and w_i over the drain columns.

#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qgf/closed_forms.hpp"
#include "qgf/coupling.hpp"

namespace qgf {

struct Partition {
  CRow v1, v2;  // controllers
  CRow w1, w2;  // drains
  double V = 0.0;  // shared controller potential, 0 without controllers

  int controllers() const { return static_cast<int>(v1.size()); }
  int drains() const { return static_cast<int>(w1.size()); }
  int q() const { return 2 + controllers(); }
  CMatrix T() const;
};

struct FlatbandInput {
  Partition partition;
  CMatrix S;  // 2 x 2, in the standard layout
};

// Brings an r = 2 coupling into the standard layout (swapping the first two
// coordinates if the output comes first, grouping controllers before drains).
// Throws UnsupportedLayout unless r = 2 with input/output on coordinates
// {0, 1}, and ConfigMismatch when controller potentials differ.
FlatbandInput make_partition(const STCoupling& c, const LineConfig& lines,
                             const Tolerances& tol = {});

Layout standard_layout(const Partition& p, const CMatrix& S);

struct CoefficientSet {
  double a = 0, b = 0, c = 0, d = 0, f = 0, g = 0;
};

// Denominator coefficients of T(E) on (0, V):
//   a + b i sigma + c sigma^2 + d sigma / sqrt(E) + f i / sqrt(E) + g / E,
// sigma = sqrt(V/E - 1).
CoefficientSet coefficients(const Partition& p, const CMatrix& S);

enum class FlatCase { SZero, SameSign, OppositeSign, Fail };

std::string_view to_string(FlatCase c);

struct FlatbandReport {
  CoefficientSet coeffs;
  double residual_diagonality = 0;  // |v2 v1^* + w2 w1^*|
  double residual_lin_dep = 0;      // ||v1||^2 ||v2||^2 - |v2 v1^*|^2
  double residual_simplified = 0;   // (1+|w1|^2-|v1|^2)(1+|w2|^2-|v2|^2) - 4|v1|^2|v2|^2
  double residual_c = 0;
  double residual_d = 0;
  double residual_g = 0;
  double residual_ab = 0;  // ||a| - |b||
  double residual_fb = 0;  // |f/b - s21/(v2 v1^*)|
  bool v_overlap_nonzero = false;  // v2 v1^* != 0
  FlatCase flat_case = FlatCase::Fail;
  int ratio_branch = 0;  // opposite_sign: matched sign in the norm-ratio condition
  int s21_branch = 0;    // opposite_sign: matched sign in the s21 condition
  double predicted_P = 0;
  bool verdict = false;
};

FlatbandReport check_flat(const Partition& p, const CMatrix& S, const Tolerances& tol = {});

nlohmann::json to_json(const FlatbandReport& report);

// (2 |v2 v1^*| / (1 + |w1|^2 + |w2|^2 + |w1|^2 |w2|^2 - |v2 v1^*|^2))^2
double passband_value(const Partition& p);

// P(E) above the band for a flat coupling:
//   P_0 ((1 - tau)^2 + kappa/E) / ((1 + tau)^2 + kappa/E),
//   tau = sqrt(1 - V/E), kappa = |s21|^2 / (|v1|^2 |v2|^2).
double analytic_P_above_V(const Partition& p, cplx s21, double V, double E);

// N points strictly inside (0, V): V j / (N + 1), j = 1..N.
std::vector<double> open_band_grid(double V, int points);

struct FlatnessStats {
  double max_P = 0;
  double min_P = 0;
  double deviation = 0;
};

FlatnessStats numerical_flatness(const STCoupling& c, const LineConfig& lines,
                                 std::span<const double> grid, const Tolerances& tol = {});

struct EdgeSlopeReport {
  std::vector<double> eps;
  std::vector<double> slopes;  // dP/dE at V (1 + eps) by central differences
  bool all_negative = false;
  bool divergence_law = false;  // consecutive |slope| ratios within [0.2, 2] x sqrt(eps ratio)
};

EdgeSlopeReport edge_slope(const STCoupling& c, const LineConfig& lines, double V,
                           std::span<const double> eps_list, const Tolerances& tol = {});

struct DiagonalityCheck {
  bool diagonal = false;
  double off_diagonal = 0;
  CMatrix limit;  // T1 (I + T2^* T2)^{-1} T1^*
};

DiagonalityCheck r3_diagonality_check(const CMatrix& T1, const CMatrix& T2, double tol = 1e-10);

}  // namespace qgf
