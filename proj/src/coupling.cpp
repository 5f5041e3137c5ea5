#include "qgf/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qgf {

STCoupling make_st(const CMatrix& S, const CMatrix& T) {
  STCoupling c;
  c.r = static_cast<int>(S.rows());
  c.n = c.r + static_cast<int>(T.cols());
  c.S = S;
  c.T = T;
  return c;
}

ValidationResult validate_st(const STCoupling& c, const Tolerances& tol) {
  std::ostringstream msg;
  if (c.n < 0 || c.r < 0 || c.r > c.n) {
    msg << "rank r=" << c.r << " outside [0, n=" << c.n << "]";
    return ValidationResult::fail(ErrorCode::DimensionMismatch, msg.str());
  }
  if (c.S.rows() != c.r || c.S.cols() != c.r) {
    msg << "S is " << c.S.rows() << "x" << c.S.cols() << ", expected " << c.r << "x" << c.r;
    return ValidationResult::fail(ErrorCode::DimensionMismatch, msg.str());
  }
  if (c.T.rows() != c.r || c.T.cols() != c.n - c.r) {
    msg << "T is " << c.T.rows() << "x" << c.T.cols() << ", expected " << c.r << "x"
        << (c.n - c.r);
    return ValidationResult::fail(ErrorCode::DimensionMismatch, msg.str());
  }
  if (!c.S.allFinite() || !c.T.allFinite()) {
    return ValidationResult::fail(ErrorCode::DimensionMismatch, "non-finite entry in S or T");
  }
  const double herm = hermitian_residual(c.S);
  if (herm > tol.hermitian) {
    msg << "S deviates from its adjoint by " << herm;
    return ValidationResult::fail(ErrorCode::NonHermitianS, msg.str());
  }
  return ValidationResult::pass();
}

void require_valid(const STCoupling& c, const Tolerances& tol) {
  const auto res = validate_st(c, tol);
  if (!res) throw Error(*res.code, res.message);
}

GeneralBC st_to_general(const STCoupling& c) {
  require_valid(c);
  const int n = c.n;
  const int r = c.r;
  const int m = n - r;
  GeneralBC bc{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
  bc.A.topLeftCorner(r, r) = -c.S;
  bc.A.bottomLeftCorner(m, r) = c.T.adjoint();
  bc.A.bottomRightCorner(m, m) = -CMatrix::Identity(m, m);
  bc.B.topLeftCorner(r, r) = CMatrix::Identity(r, r);
  bc.B.topRightCorner(r, m) = c.T;
  return bc;
}

SelfAdjointCheck check_selfadjoint(const GeneralBC& bc, const Tolerances& tol) {
  SelfAdjointCheck out;
  const auto n = bc.A.rows();
  if (bc.A.cols() != n || bc.B.rows() != n || bc.B.cols() != n) {
    out.commutator_residual = std::numeric_limits<double>::infinity();
    return out;
  }
  CMatrix joined(n, 2 * n);
  joined << bc.A, bc.B;
  out.rank = numerical_rank(joined, tol.rank_rel);
  out.commutator_residual = max_abs(bc.A * bc.B.adjoint() - bc.B * bc.A.adjoint());
  out.ok = out.rank == n && out.commutator_residual < tol.selfadjoint;
  return out;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Input: return "input";
    case Role::Output: return "output";
    case Role::Controller: return "controller";
    case Role::Drain: return "drain";
  }
  return "unknown";
}

int LineConfig::input_index() const {
  const auto it = std::find_if(lines.begin(), lines.end(),
                               [](const Line& l) { return l.role == Role::Input; });
  return it == lines.end() ? -1 : static_cast<int>(it - lines.begin());
}

int LineConfig::output_index() const {
  const auto it = std::find_if(lines.begin(), lines.end(),
                               [](const Line& l) { return l.role == Role::Output; });
  return it == lines.end() ? -1 : static_cast<int>(it - lines.begin());
}

std::vector<int> LineConfig::auxiliary_indices() const {
  std::vector<int> idx;
  for (int j = 0; j < size(); ++j) {
    if (lines[j].role == Role::Controller || lines[j].role == Role::Drain) idx.push_back(j);
  }
  return idx;
}

double LineConfig::max_potential() const {
  double v = 0.0;
  for (const auto& l : lines) v = std::max(v, l.V);
  return v;
}

ValidationResult validate_lines(const LineConfig& lines, int n) {
  std::ostringstream msg;
  if (lines.size() != n) {
    msg << lines.size() << " lines for a vertex of degree " << n;
    return ValidationResult::fail(ErrorCode::InvalidLines, msg.str());
  }
  int inputs = 0;
  int outputs = 0;
  for (int j = 0; j < lines.size(); ++j) {
    const Line& l = lines.lines[j];
    switch (l.role) {
      case Role::Input: ++inputs; break;
      case Role::Output: ++outputs; break;
      case Role::Controller:
        if (!(l.V > 0.0) || !std::isfinite(l.V)) {
          msg << "controller on line " << j << " needs a positive potential, got " << l.V;
          return ValidationResult::fail(ErrorCode::InvalidLines, msg.str());
        }
        continue;
      case Role::Drain: break;
    }
    if (l.V != 0.0) {
      msg << to_string(l.role) << " line " << j << " must carry zero potential";
      return ValidationResult::fail(ErrorCode::InvalidLines, msg.str());
    }
  }
  if (inputs != 1 || outputs != 1) {
    msg << "need exactly one input and one output, got " << inputs << " and " << outputs;
    return ValidationResult::fail(ErrorCode::InvalidLines, msg.str());
  }
  return ValidationResult::pass();
}

void require_valid(const LineConfig& lines, int n) {
  const auto res = validate_lines(lines, n);
  if (!res) throw Error(*res.code, res.message);
}

cplx momentum(double E, double V) {
  if (!(E > 0.0)) {
    throw Error(ErrorCode::NonpositiveEnergy, "energy must be positive, got " + std::to_string(E));
  }
  if (E > V) return {std::sqrt(E - V), 0.0};
  if (E < V) return {0.0, std::sqrt(V - E)};
  return {0.0, 0.0};
}

}  // namespace qgf
