#include "qgf/closed_forms.hpp"

#include <cmath>
#include <sstream>

namespace qgf {

namespace {

Line aux_line(double V) { return V > 0.0 ? Line::controller(V) : Line::drain(); }

CMatrix momentum_diag(const std::vector<double>& potentials, double E, double scale) {
  CMatrix K = CMatrix::Zero(static_cast<Eigen::Index>(potentials.size()),
                            static_cast<Eigen::Index>(potentials.size()));
  for (std::size_t j = 0; j < potentials.size(); ++j) {
    K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = momentum(E, potentials[j]) / scale;
  }
  return K;
}

void require_positive_energy(double E) {
  if (!(E > 0.0)) throw Error(ErrorCode::NonpositiveEnergy, "energy must be positive");
}

cplx reduced_amplitude(const CMatrix& M) {
  const cplx denom = 1.0 + M.trace() + M.determinant();
  return -2.0 * M(1, 0) / denom;
}

}  // namespace

Layout R1Layout::build() const {
  Layout out;
  CMatrix S(1, 1);
  S(0, 0) = s;
  out.coupling = make_st(S, t);
  out.lines.lines = {Line::input(), Line::output()};
  for (double V : potentials) out.lines.lines.push_back(aux_line(V));
  return out;
}

cplx closed_form_r1(const R1Layout& layout, double E) {
  require_positive_energy(E);
  if (layout.t.size() != static_cast<Eigen::Index>(layout.potentials.size()) + 1) {
    throw Error(ErrorCode::DimensionMismatch, "r=1 layout needs one potential per line 3..n");
  }
  const double root = std::sqrt(E);
  cplx denom = 1.0 + std::norm(layout.t(0)) - layout.s / (kI * root);
  for (std::size_t j = 0; j < layout.potentials.size(); ++j) {
    denom += momentum(E, layout.potentials[j]) / root * std::norm(layout.t(static_cast<Eigen::Index>(j) + 1));
  }
  return 2.0 * std::conj(layout.t(0)) / denom;
}

Layout LinDepLayout::build() const {
  const int rr = r();
  const int nn = n();
  const int m3 = nn - rr - 1;
  CMatrix S(rr, rr);
  S(0, 0) = s;
  S.block(0, 1, 1, rr - 1) = S2;
  S.block(1, 0, rr - 1, 1) = S2.adjoint();
  S.bottomRightCorner(rr - 1, rr - 1) = S4;
  CMatrix T = CMatrix::Zero(rr, nn - rr);
  T.block(0, 0, 1, m3) = T1;
  T(0, m3) = t;
  T.block(1, 0, rr - 1, m3) = T2;

  Layout out;
  out.coupling = make_st(S, T);
  out.lines.lines.push_back(Line::input());
  for (double V : potentials2) out.lines.lines.push_back(aux_line(V));
  for (double V : potentials3) out.lines.lines.push_back(aux_line(V));
  out.lines.lines.push_back(Line::output());
  return out;
}

cplx lindep_f(const LinDepLayout& layout, double E, const Tolerances& tol) {
  require_positive_energy(E);
  const CMatrix K2 = momentum_diag(layout.potentials2, E, 1.0);
  const CMatrix K3 = momentum_diag(layout.potentials3, E, 1.0);
  const CMatrix& T1 = layout.T1;
  const CMatrix& T2 = layout.T2;

  const cplx head = layout.s - (kI * T1 * K3 * T1.adjoint())(0, 0);
  if (layout.S4.rows() == 0) return head;

  const CMatrix inner = kI * K2 + kI * T2 * K3 * T2.adjoint() - layout.S4;
  const double cond = condition_number(inner);
  if (!(cond <= tol.cond_max)) {
    std::ostringstream msg;
    msg << "i K2 + i T2 K3 T2^* - S4 is singular at E=" << E << " (condition " << cond << ")";
    throw Error(ErrorCode::SingularInner, msg.str());
  }
  const CMatrix left = CMatrix(layout.S2) - kI * T1 * K3 * T2.adjoint();
  const CMatrix right = CMatrix(layout.S2.adjoint()) - kI * T2 * K3 * T1.adjoint();
  return head + (left * inner.partialPivLu().solve(right))(0, 0);
}

cplx closed_form_lindep(const LinDepLayout& layout, double E, const Tolerances& tol) {
  const cplx f = lindep_f(layout, E, tol);
  return 2.0 * std::conj(layout.t) / (1.0 + std::norm(layout.t) - f / (kI * std::sqrt(E)));
}

cplx lindep_high_energy_limit(const LinDepLayout& layout) {
  const auto m3 = layout.T1.size();
  const CMatrix G = CMatrix::Identity(m3, m3) + layout.T2.adjoint() * layout.T2;
  const cplx q = (layout.T1 * G.partialPivLu().solve(CMatrix(layout.T1.adjoint())))(0, 0);
  return 2.0 * std::conj(layout.t) / (1.0 + std::norm(layout.t) + q);
}

Layout R2Layout::build() const {
  Layout out;
  out.coupling = make_st(S, T);
  out.lines.lines = {Line::input(), Line::output()};
  for (double V : potentials) out.lines.lines.push_back(aux_line(V));
  return out;
}

ReducedForm closed_form_r2(const R2Layout& layout, double E) {
  require_positive_energy(E);
  const double root = std::sqrt(E);
  const CMatrix D = momentum_diag(layout.potentials, E, root);
  ReducedForm out;
  out.M = layout.T * D * layout.T.adjoint() - layout.S / (kI * root);
  out.amplitude = reduced_amplitude(out.M);
  return out;
}

Layout R3Layout::build() const {
  const auto m3 = T1.cols();
  const auto r = 2 + T2.rows();
  CMatrix T(r, m3);
  T << T1, T2;
  Layout out;
  out.coupling = make_st(CMatrix::Zero(r, r), T);
  out.lines.lines = {Line::input(), Line::output()};
  for (double V : potentials2) out.lines.lines.push_back(aux_line(V));
  for (double V : potentials3) out.lines.lines.push_back(aux_line(V));
  return out;
}

ReducedForm closed_form_r3plus(const R3Layout& layout, double E, const Tolerances& tol) {
  require_positive_energy(E);
  const double root = std::sqrt(E);
  const CMatrix D2 = momentum_diag(layout.potentials2, E, root);
  const CMatrix D3 = momentum_diag(layout.potentials3, E, root);
  CMatrix D2inv = CMatrix::Zero(D2.rows(), D2.cols());
  for (Eigen::Index j = 0; j < D2.rows(); ++j) {
    if (std::abs(D2(j, j)) * tol.cond_max < 1.0) {
      std::ostringstream msg;
      msg << "block-2 line " << j << " is at its threshold (k = 0) at E=" << E;
      throw Error(ErrorCode::SingularD2, msg.str());
    }
    D2inv(j, j) = 1.0 / D2(j, j);
  }
  const auto m3 = D3.rows();
  const CMatrix core = CMatrix::Identity(m3, m3) + layout.T2.adjoint() * D2inv * layout.T2 * D3;
  ReducedForm out;
  out.M = layout.T1 * D3 * core.partialPivLu().solve(CMatrix(layout.T1.adjoint()));
  out.amplitude = reduced_amplitude(out.M);
  return out;
}

}  // namespace qgf
