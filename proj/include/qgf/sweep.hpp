#pragma once

// Energy scans of the transmission probability and CSV output.

#include <ostream>
#include <vector>

#include "qgf/coupling.hpp"

namespace qgf {

enum class Spacing { Linear, Log };

struct EnergyGrid {
  double e_min = 0.0;
  double e_max = 0.0;
  int points = 500;
  Spacing spacing = Spacing::Linear;

  // Endpoints included. Throws NonpositiveEnergy for e_min <= 0, InvalidSpec
  // for e_max <= e_min or fewer than 2 points.
  std::vector<double> energies() const;
};

// 500 linear points on (0.002 Vmax, 5 Vmax), Vmax = 1 without controllers.
EnergyGrid default_grid(const LineConfig& lines);

struct SweepRecord {
  double E = 0;
  double P = 0;
  double re_t = 0;
  double im_t = 0;
  double refl2 = 0;
  double flux = 0;  // |r|^2 + |t|^2
};

// Energies where a solve is singular come back as NaN rows.
std::vector<SweepRecord> sweep(const STCoupling& c, const LineConfig& lines,
                               const std::vector<double>& energies, const Tolerances& tol = {});

// Header E,P,re_t,im_t,refl2,flux; 17 significant digits, "nan" for NaN.
void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace qgf
