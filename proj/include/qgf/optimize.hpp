#pragma once

// Maximization of the flat passband value over the norm parameters
//   x = ||w1||^2, y = ||w2||^2, z = ||v1||^2, |v2 v1^*|^2 = x y u, u in (0, 1],
// with
//   F(x, y, z, u) = (2 sqrt(xyu) / (1 + x + y + xy - xyu))^2
// subject to
//   G(x, y, z, u) = (1 + x - z)(1 + y - xyu/z) - 4xyu = 0.
// F does not depend on z; G is a quadratic in z, so (x, y, u) is feasible
// exactly when that quadratic has a positive root.

#include <optional>

namespace qgf {

double passband_objective(double x, double y, double u);

// Larger positive root of G = 0 in z, if any.
std::optional<double> constraint_z(double x, double y, double u);

double constraint_residual(double x, double y, double z, double u);

struct OptimizeOptions {
  int density = 50;       // grid points per axis
  int refine_steps = 3;   // zoomed re-grids around the incumbent
  double x_max = 4.0;
  double y_max = 4.0;
  double u_min = 0.0;
  double u_max = 1.0;
  bool polish = true;     // Lagrange-Newton solve on the u = 1 face
};

struct OptimizationResult {
  double x = 0, y = 0, z = 0, u = 0;
  double F_value = 0;
  bool at_boundary = false;  // u == 1
  bool polished = false;
  long evaluations = 0;
};

OptimizationResult optimize_passband(const OptimizeOptions& options = {});

// Smallest distance, over a grid of feasible points with u <= u_max, between
// the gradient of 2 sqrt(xyu)/(1+x+y+xy-xyu) and its best multiple of grad G
// (in (x, y, z, u)). A zero would be an interior stationary point of the
// Lagrange function.
struct StationarityScan {
  double min_residual = 0;
  double x = 0, y = 0, z = 0, u = 0;
  long samples = 0;
};

StationarityScan lagrange_stationarity_scan(int density, double u_max);

}  // namespace qgf
