#pragma once

// Closed-form transmission amplitudes for the special layouts. These are
// cross-checks of the generic reduction, not the main code path.
//
// Auxiliary potentials: 0 marks a drain, a positive value a controller.

#include <vector>

#include "qgf/coupling.hpp"

namespace qgf {

struct Layout {
  STCoupling coupling;
  LineConfig lines;
};

// r = 1: input on coordinate 0, output on 1, T = (t_2 ... t_n), S = (s).
struct R1Layout {
  CRow t;                           // n - 1 entries
  double s = 0.0;
  std::vector<double> potentials;   // lines 3..n, n - 2 entries

  Layout build() const;
};

// 2 conj(t_2) / (1 + |t_2|^2 - s/(i sqrt E) + sum_j (k_j / sqrt E) |t_j|^2)
cplx closed_form_r1(const R1Layout& layout, double E);

// Input and output columns of B linearly dependent: input on coordinate 0,
// output on coordinate n-1,
//   S = [[s, S2], [S2^*, S4]],  T = [[T1, t], [T2, 0]].
struct LinDepLayout {
  double s = 0.0;
  CRow S2;                          // 1 x (r-1)
  CMatrix S4;                       // (r-1) x (r-1)
  CRow T1;                          // 1 x (n-r-1)
  cplx t;
  CMatrix T2;                       // (r-1) x (n-r-1)
  std::vector<double> potentials2;  // coordinates 1..r-1
  std::vector<double> potentials3;  // coordinates r..n-2

  int r() const { return 1 + static_cast<int>(S4.rows()); }
  int n() const { return r() + static_cast<int>(T1.size()) + 1; }
  Layout build() const;
};

// f = s - i T1 K3 T1^* + (S2 - i T1 K3 T2^*)(i K2 + i T2 K3 T2^* - S4)^{-1}(S2^* - i T2 K3 T1^*)
cplx lindep_f(const LinDepLayout& layout, double E, const Tolerances& tol = {});

// 2 conj(t) / (1 + |t|^2 - f/(i sqrt E))
cplx closed_form_lindep(const LinDepLayout& layout, double E, const Tolerances& tol = {});

// 2 conj(t) / (1 + |t|^2 + T1 (I + T2^* T2)^{-1} T1^*), the E -> infinity value.
cplx lindep_high_energy_limit(const LinDepLayout& layout);

struct ReducedForm {
  CMatrix M;  // 2 x 2
  cplx amplitude;
};

// r = 2: input 0, output 1, auxiliaries 2..n-1.
struct R2Layout {
  CMatrix S;                       // 2 x 2
  CMatrix T;                       // 2 x (n-2)
  std::vector<double> potentials;  // n - 2 entries

  Layout build() const;
};

// M(E) = T D T^* - S/(i sqrt E), D = diag(k_j / sqrt E);
// amplitude -2 M_21 / (1 + tr M + det M).
ReducedForm closed_form_r2(const R2Layout& layout, double E);

// r >= 3 with S = 0: input 0, output 1, block-2 auxiliaries 2..r-1 (rows of
// T2), block-3 auxiliaries r..n-1 (columns of T).
struct R3Layout {
  CMatrix T1;                       // 2 x (n-r)
  CMatrix T2;                       // (r-2) x (n-r)
  std::vector<double> potentials2;  // r - 2 entries
  std::vector<double> potentials3;  // n - r entries

  Layout build() const;
};

// M(E) = T1 D3 (I + T2^* D2^{-1} T2 D3)^{-1} T1^*, i.e. T1 (D3^{-1} + T2^* D2^{-1} T2)^{-1} T1^*
// whenever D3 is invertible. Throws SingularD2 when a block-2 line sits at
// its threshold.
ReducedForm closed_form_r3plus(const R3Layout& layout, double E, const Tolerances& tol = {});

}  // namespace qgf
