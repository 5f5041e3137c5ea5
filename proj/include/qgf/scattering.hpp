#pragma once

// Scattering on a star vertex. Incoming/outgoing convention on every line:
// psi_j(x) = in_j e^{-ikx} + out_j e^{ikx}, out = Sc(E) in.
//
// With nonzero potentials on auxiliary lines the full n x n formula does not
// apply; instead reduce_vertex() eliminates controllers and drains (which only
// carry outgoing waves, psi'_j(0) = i k_j psi_j(0)) and leaves a 2 x 2,
// generally non-self-adjoint, input/output boundary condition.

#include <vector>

#include "qgf/coupling.hpp"

namespace qgf {

struct ScatteringMatrix {
  double E = 0.0;
  CMatrix entries;
};

// Sc(E) = -(A + i sqrt(E) B)^{-1} (A - i sqrt(E) B). Zero potentials only.
ScatteringMatrix scattering_general(const GeneralBC& bc, double E, const Tolerances& tol = {});

// Sc(E) = -I + 2 [I; T^*] (I + TT^* - S/(i sqrt(E)))^{-1} [I, T].
ScatteringMatrix scattering_st(const STCoupling& c, double E, const Tolerances& tol = {});

// A_diss Psi_io(0) + B_diss Psi_io'(0) = 0 with Psi_io = (psi_in, psi_out).
// Rows are left as produced by elimination; only the row space is meaningful.
struct DissipativeBC {
  CMatrix A;
  CMatrix B;
  double E = 0.0;
};

DissipativeBC reduce_vertex(const STCoupling& c, const LineConfig& lines, double E,
                            const Tolerances& tol = {});

// 2 x 2 scattering of the reduced pair; (1,0) is the transmission amplitude,
// (0,0) the reflection amplitude.
ScatteringMatrix dissipative_scattering(const DissipativeBC& d, const Tolerances& tol = {});
ScatteringMatrix dissipative_scattering(const DissipativeBC& d, double E, const Tolerances& tol = {});

struct TransmissionSample {
  double E = 0.0;
  cplx t;       // input -> output amplitude
  cplx r_refl;  // input reflection amplitude
  double P = 0.0;
};

TransmissionSample transmission(const STCoupling& c, const LineConfig& lines, double E,
                                const Tolerances& tol = {});

// Independent check: plane-wave ansatz on every line, the full boundary
// condition, one dense n x n solve.
struct OracleSolution {
  double E = 0.0;
  cplx reflection;
  cplx transmission;
  std::vector<cplx> amplitudes;  // by ST coordinate; the input slot holds the reflection
  std::vector<cplx> momenta;     // by ST coordinate
  int input_slot = 0;

  // |r|^2 + sum over open channels (real k_j > 0) of (k_j / sqrt(E)) |a_j|^2.
  double flux_balance() const;
};

OracleSolution full_solve_oracle(const STCoupling& c, const LineConfig& lines, double E,
                                 const Tolerances& tol = {});

}  // namespace qgf
