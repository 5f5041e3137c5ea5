#pragma once

// Vertex couplings on a star graph in ST-form and in general (A, B) form,
// plus edge roles and the per-line momentum. Units: hbar = 2m = 1.
//
// ST-form with rank r on a vertex of degree n:
//
//   [ I_r  T ] Psi'(0) = [  S    0       ] Psi(0)
//   [ 0    0 ]           [ -T^*  I_{n-r} ]
//
// S is r x r Hermitian, T is r x (n-r) arbitrary. Coordinates 0..r-1 are the
// lines with independent derivative rows.

#include <optional>
#include <string>
#include <vector>

#include "qgf/error.hpp"
#include "qgf/linalg.hpp"
#include "qgf/tolerances.hpp"

namespace qgf {

struct STCoupling {
  int n = 0;
  int r = 0;
  CMatrix S;  // r x r
  CMatrix T;  // r x (n - r)
};

// n and r inferred from the block shapes.
STCoupling make_st(const CMatrix& S, const CMatrix& T);

struct ValidationResult {
  bool ok = true;
  std::optional<ErrorCode> code;
  std::string message;

  explicit operator bool() const { return ok; }
  static ValidationResult pass() { return {}; }
  static ValidationResult fail(ErrorCode code, std::string message) {
    return {false, code, std::move(message)};
  }
};

ValidationResult validate_st(const STCoupling& c, const Tolerances& tol = {});

// Throws the validation error instead of returning it.
void require_valid(const STCoupling& c, const Tolerances& tol = {});

// A Psi(0) + B Psi'(0) = 0.
struct GeneralBC {
  CMatrix A;
  CMatrix B;
};

// A = -[[S, 0], [-T^*, I]], B = [[I, T], [0, 0]].
GeneralBC st_to_general(const STCoupling& c);

struct SelfAdjointCheck {
  bool ok = false;
  int rank = 0;                     // rank of (A|B)
  double commutator_residual = 0;   // max |AB^* - BA^*|
};

SelfAdjointCheck check_selfadjoint(const GeneralBC& bc, const Tolerances& tol = {});

enum class Role { Input, Output, Controller, Drain };

std::string_view to_string(Role role);

struct Line {
  Role role = Role::Drain;
  double V = 0.0;  // nonzero only for controllers

  static Line input() { return {Role::Input, 0.0}; }
  static Line output() { return {Role::Output, 0.0}; }
  static Line controller(double V) { return {Role::Controller, V}; }
  static Line drain() { return {Role::Drain, 0.0}; }
};

// Roles indexed by ST coordinate.
struct LineConfig {
  std::vector<Line> lines;

  int size() const { return static_cast<int>(lines.size()); }
  int input_index() const;   // -1 when absent
  int output_index() const;  // -1 when absent
  std::vector<int> auxiliary_indices() const;  // controllers and drains, in order
  double max_potential() const;                // 0 without controllers
};

ValidationResult validate_lines(const LineConfig& lines, int n);
void require_valid(const LineConfig& lines, int n);

// sqrt(E - V) above the threshold, i sqrt(V - E) below, 0 at E = V.
cplx momentum(double E, double V);

}  // namespace qgf
