#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qgf {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;

inline constexpr cplx kI{0.0, 1.0};

// sigma_max / sigma_min; +inf for a numerically zero sigma_min. Empty -> 1.
double condition_number(const CMatrix& m);

// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const CMatrix& m, double rel_tol);

double max_abs(const CMatrix& m);

// Entrywise max |m - m^*|.
double hermitian_residual(const CMatrix& m);

}  // namespace qgf
