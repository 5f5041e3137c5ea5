#pragma once

namespace qgf {

struct Tolerances {
  double hermitian = 1e-10;    // |S - S^*| entrywise
  double selfadjoint = 1e-10;  // |AB^* - BA^*| entrywise
  double rank_rel = 1e-10;     // SVD threshold relative to sigma_max
  double flat = 1e-9;          // flat-band residuals
  double cond_max = 1e12;      // singularity threshold for every solve

  // Defaults, with QGF_TOL (a positive number) overriding the hermitian,
  // selfadjoint and flat thresholds when set.
  static Tolerances from_env();
};

}  // namespace qgf
