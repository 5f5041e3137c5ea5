#include "qgf/scattering.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace qgf {

namespace {

void require_positive_energy(double E) {
  if (!(E > 0.0)) {
    std::ostringstream msg;
    msg << "energy must be positive, got " << E;
    throw Error(ErrorCode::NonpositiveEnergy, msg.str());
  }
}

void require_conditioned(const CMatrix& m, double cond_max, ErrorCode code, const char* what,
                         double E) {
  const double cond = condition_number(m);
  if (!(cond <= cond_max)) {
    std::ostringstream msg;
    msg << what << " is singular at E=" << E << " (condition " << cond << ")";
    throw Error(code, msg.str());
  }
}

CMatrix pencil_scattering(const CMatrix& A, const CMatrix& B, double E, const Tolerances& tol) {
  const cplx ik = kI * std::sqrt(E);
  const CMatrix plus = A + ik * B;
  require_conditioned(plus, tol.cond_max, ErrorCode::SingularPencil, "A + i sqrt(E) B", E);
  return -plus.partialPivLu().solve(A - ik * B);
}

}  // namespace

ScatteringMatrix scattering_general(const GeneralBC& bc, double E, const Tolerances& tol) {
  require_positive_energy(E);
  return {E, pencil_scattering(bc.A, bc.B, E, tol)};
}

ScatteringMatrix scattering_st(const STCoupling& c, double E, const Tolerances& tol) {
  require_valid(c, tol);
  require_positive_energy(E);
  const int n = c.n;
  const int r = c.r;
  if (r == 0) return {E, -CMatrix::Identity(n, n)};

  const cplx ik = kI * std::sqrt(E);
  const CMatrix core = CMatrix::Identity(r, r) + c.T * c.T.adjoint() - c.S / ik;
  require_conditioned(core, tol.cond_max, ErrorCode::SingularCore, "I + TT^* - S/(i sqrt(E))", E);

  CMatrix left(n, r);  // [I; T^*]
  left << CMatrix::Identity(r, r), c.T.adjoint();
  const CMatrix right = left.adjoint();  // [I, T]
  CMatrix sc = -CMatrix::Identity(n, n) + 2.0 * left * core.partialPivLu().solve(right);
  return {E, std::move(sc)};
}

DissipativeBC reduce_vertex(const STCoupling& c, const LineConfig& lines, double E,
                            const Tolerances& tol) {
  require_valid(c, tol);
  require_valid(lines, c.n);
  require_positive_energy(E);

  const GeneralBC bc = st_to_general(c);
  const int n = c.n;
  const int in = lines.input_index();
  const int out = lines.output_index();
  const std::vector<int> aux = lines.auxiliary_indices();
  const int m = static_cast<int>(aux.size());

  // Columns: eliminated psi_j(0) with psi'_j(0) = i k_j psi_j(0) folded in, then
  // (psi_in, psi_out) from A, then (psi_in', psi_out') from B.
  CMatrix work(n, m + 4);
  for (int j = 0; j < m; ++j) {
    const int line = aux[static_cast<std::size_t>(j)];
    const cplx k = momentum(E, lines.lines[static_cast<std::size_t>(line)].V);
    work.col(j) = bc.A.col(line) + kI * k * bc.B.col(line);
  }
  work.col(m) = bc.A.col(in);
  work.col(m + 1) = bc.A.col(out);
  work.col(m + 2) = bc.B.col(in);
  work.col(m + 3) = bc.B.col(out);

  if (m > 0) {
    require_conditioned(work.leftCols(m), tol.cond_max, ErrorCode::DegenerateElimination,
                        "controller/drain block", E);
  }

  // Gaussian elimination with partial pivoting over the first m columns.
  for (int col = 0; col < m; ++col) {
    Eigen::Index pivot = col;
    work.col(col).tail(n - col).cwiseAbs().maxCoeff(&pivot);
    pivot += col;
    if (pivot != col) work.row(col).swap(work.row(pivot));
    const cplx p = work(col, col);
    for (int row = col + 1; row < n; ++row) {
      const cplx factor = work(row, col) / p;
      if (factor != cplx{0.0, 0.0}) work.row(row) -= factor * work.row(col);
      work(row, col) = 0.0;
    }
  }

  DissipativeBC d;
  d.E = E;
  d.A = work.block(m, m, 2, 2);
  d.B = work.block(m, m + 2, 2, 2);
  CMatrix joined(2, 4);
  joined << d.A, d.B;
  if (numerical_rank(joined, 1.0 / tol.cond_max) < 2) {
    std::ostringstream msg;
    msg << "reduced input/output conditions lost rank at E=" << E;
    throw Error(ErrorCode::DegenerateElimination, msg.str());
  }
  return d;
}

ScatteringMatrix dissipative_scattering(const DissipativeBC& d, const Tolerances& tol) {
  return dissipative_scattering(d, d.E, tol);
}

ScatteringMatrix dissipative_scattering(const DissipativeBC& d, double E, const Tolerances& tol) {
  require_positive_energy(E);
  return {E, pencil_scattering(d.A, d.B, E, tol)};
}

TransmissionSample transmission(const STCoupling& c, const LineConfig& lines, double E,
                                const Tolerances& tol) {
  const ScatteringMatrix sc = dissipative_scattering(reduce_vertex(c, lines, E, tol), tol);
  TransmissionSample s;
  s.E = E;
  s.t = sc.entries(1, 0);
  s.r_refl = sc.entries(0, 0);
  s.P = std::norm(s.t);
  return s;
}

double OracleSolution::flux_balance() const {
  double total = std::norm(reflection);
  const double k0 = std::sqrt(E);
  for (std::size_t j = 0; j < amplitudes.size(); ++j) {
    if (static_cast<int>(j) == input_slot) continue;
    const cplx k = momenta[j];
    if (k.imag() == 0.0 && k.real() > 0.0) total += (k.real() / k0) * std::norm(amplitudes[j]);
  }
  return total;
}

OracleSolution full_solve_oracle(const STCoupling& c, const LineConfig& lines, double E,
                                 const Tolerances& tol) {
  require_valid(c, tol);
  require_valid(lines, c.n);
  require_positive_energy(E);

  const GeneralBC bc = st_to_general(c);
  const int n = c.n;
  const int in = lines.input_index();
  const double k0 = std::sqrt(E);

  OracleSolution sol;
  sol.E = E;
  sol.input_slot = in;
  sol.momenta.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) sol.momenta[static_cast<std::size_t>(j)] = momentum(E, lines.lines[static_cast<std::size_t>(j)].V);

  // Unknown j is the reflection amplitude on the input slot and the outgoing
  // amplitude a_j elsewhere. psi_j(0) = unknown_j (+1 on the input), psi'_j(0)
  // = i k_j unknown_j (-i k0 on the input).
  CMatrix system(n, n);
  for (int j = 0; j < n; ++j) {
    system.col(j) = bc.A.col(j) + kI * sol.momenta[static_cast<std::size_t>(j)] * bc.B.col(j);
  }
  const CVector rhs = -(bc.A.col(in) - kI * k0 * bc.B.col(in));
  require_conditioned(system, tol.cond_max, ErrorCode::SingularSystem, "plane-wave system", E);
  const CVector x = system.fullPivLu().solve(rhs);

  sol.amplitudes.assign(x.data(), x.data() + n);
  sol.reflection = x(in);
  sol.transmission = x(lines.output_index());
  return sol;
}

}  // namespace qgf
