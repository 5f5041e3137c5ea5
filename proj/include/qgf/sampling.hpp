#pragma once

#include <cstdint>
#include <random>

#include "qgf/linalg.hpp"

namespace qgf {

// Seeded random couplings: complex entries with real and imaginary parts
// uniform on [-2, 2], potentials uniform on [0.1, 10].
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  cplx entry() {
    const double re = uniform(-2.0, 2.0);
    const double im = uniform(-2.0, 2.0);
    return {re, im};
  }
  double potential() { return uniform(0.1, 10.0); }

  CMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = entry();
    return m;
  }
  CRow row(Eigen::Index n) { return matrix(1, n); }
  CMatrix hermitian(Eigen::Index n) {
    const CMatrix m = matrix(n, n);
    return 0.5 * (m + m.adjoint());
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qgf
