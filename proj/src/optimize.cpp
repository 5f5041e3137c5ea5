#include "qgf/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace qgf {

namespace {

using Vec4 = std::array<double, 4>;

// 2 sqrt(xyu) / (1 + x + y + xy - xyu), the unsquared objective.
double objective_root(double x, double y, double u) {
  const double w = x * y * u;
  return 2.0 * std::sqrt(w) / ((1.0 + x) * (1.0 + y) - w);
}

Vec4 objective_root_gradient(double x, double y, double u) {
  const double w = x * y * u;
  const double num = 2.0 * std::sqrt(w);
  const double den = (1.0 + x) * (1.0 + y) - w;
  // d num / dq = num / (2q) for q in {x, y, u}
  const double dden_dx = (1.0 + y) - y * u;
  const double dden_dy = (1.0 + x) - x * u;
  const double dden_du = -x * y;
  auto part = [&](double dnum, double dden) { return (dnum * den - num * dden) / (den * den); };
  return {part(num / (2.0 * x), dden_dx), part(num / (2.0 * y), dden_dy), 0.0,
          part(num / (2.0 * u), dden_du)};
}

Vec4 constraint_gradient(double x, double y, double z, double u) {
  const double w = x * y * u;
  const double first = 1.0 + x - z;
  const double second = 1.0 + y - w / z;
  return {second + first * (-y * u / z) - 4.0 * y * u,
          first * (1.0 - x * u / z) - 4.0 * x * u,
          -second + first * (w / (z * z)),
          first * (-x * y / z) - 4.0 * x * y};
}

struct Candidate {
  double x = 0, y = 0, u = 0, z = 0, F = -1.0;
};

struct Box {
  double lo[3];
  double hi[3];
};

void scan_box(const Box& box, int density, Candidate& best, long& evals) {
  const int d = std::max(density, 1);
  for (int i = 0; i <= d; ++i) {
    const double x = box.lo[0] + (box.hi[0] - box.lo[0]) * i / d;
    for (int j = 0; j <= d; ++j) {
      const double y = box.lo[1] + (box.hi[1] - box.lo[1]) * j / d;
      for (int k = 0; k <= d; ++k) {
        const double u = box.lo[2] + (box.hi[2] - box.lo[2]) * k / d;
        if (x <= 0.0 || y <= 0.0 || u <= 0.0) continue;
        ++evals;
        const auto z = constraint_z(x, y, u);
        if (!z) continue;
        const double F = passband_objective(x, y, u);
        if (F > best.F) best = {x, y, u, *z, F};
      }
    }
  }
}

// Newton on the Lagrange system with u fixed at 1:
//   dL/dx = dL/dy = dL/dz = 0, G = 0, unknowns (x, y, z, lambda).
std::optional<Candidate> lagrange_polish(const Candidate& start) {
  const double u = 1.0;
  auto residual = [&](const Eigen::Vector4d& q) {
    const Vec4 gf = objective_root_gradient(q(0), q(1), u);
    const Vec4 gg = constraint_gradient(q(0), q(1), q(2), u);
    Eigen::Vector4d r;
    r << gf[0] - q(3) * gg[0], gf[1] - q(3) * gg[1], gf[2] - q(3) * gg[2],
        constraint_residual(q(0), q(1), q(2), u);
    return r;
  };

  Eigen::Vector4d q;
  {
    const Vec4 gf = objective_root_gradient(start.x, start.y, u);
    const Vec4 gg = constraint_gradient(start.x, start.y, start.z, u);
    const double lambda = (gf[0] * gg[0] + gf[1] * gg[1]) / (gg[0] * gg[0] + gg[1] * gg[1]);
    q << start.x, start.y, start.z, lambda;
  }

  for (int iter = 0; iter < 60; ++iter) {
    const Eigen::Vector4d r = residual(q);
    if (r.norm() < 1e-14) break;
    Eigen::Matrix4d J;
    for (int c = 0; c < 4; ++c) {
      const double h = 1e-7 * std::max(1.0, std::abs(q(c)));
      Eigen::Vector4d up = q, down = q;
      up(c) += h;
      down(c) -= h;
      J.col(c) = (residual(up) - residual(down)) / (2.0 * h);
    }
    const Eigen::Vector4d step = J.fullPivLu().solve(-r);
    if (!step.allFinite()) return std::nullopt;
    q += step;
    if (q(0) <= 0.0 || q(1) <= 0.0 || q(2) <= 0.0) return std::nullopt;
  }
  if (residual(q).norm() > 1e-10) return std::nullopt;
  Candidate out{q(0), q(1), u, q(2), passband_objective(q(0), q(1), u)};
  return out;
}

}  // namespace

double passband_objective(double x, double y, double u) {
  const double v = objective_root(x, y, u);
  return v * v;
}

std::optional<double> constraint_z(double x, double y, double u) {
  // m z^2 - (pm - 3w) z + pw = 0
  const double p = 1.0 + x;
  const double m = 1.0 + y;
  const double w = x * y * u;
  const double b = p * m - 3.0 * w;
  if (!(b > 0.0)) return std::nullopt;
  double disc = b * b - 4.0 * m * p * w;
  if (disc < 0.0) {
    if (disc < -1e-14 * b * b) return std::nullopt;
    disc = 0.0;
  }
  return (b + std::sqrt(disc)) / (2.0 * m);
}

double constraint_residual(double x, double y, double z, double u) {
  const double w = x * y * u;
  return (1.0 + x - z) * (1.0 + y - w / z) - 4.0 * w;
}

OptimizationResult optimize_passband(const OptimizeOptions& options) {
  const double domain_lo[3] = {0.0, 0.0, options.u_min};
  const double domain_hi[3] = {options.x_max, options.y_max, options.u_max};
  Box box{{domain_lo[0], domain_lo[1], domain_lo[2]}, {domain_hi[0], domain_hi[1], domain_hi[2]}};

  Candidate best;
  long evals = 0;
  scan_box(box, options.density, best, evals);

  for (int step = 0; step < options.refine_steps && best.F >= 0.0; ++step) {
    const double center[3] = {best.x, best.y, best.u};
    Box next{};
    for (int a = 0; a < 3; ++a) {
      const double half = 2.0 * (box.hi[a] - box.lo[a]) / std::max(options.density, 1);
      next.lo[a] = std::max(domain_lo[a], center[a] - half);
      next.hi[a] = std::min(domain_hi[a], center[a] + half);
    }
    box = next;
    scan_box(box, options.density, best, evals);
  }

  OptimizationResult res;
  res.evaluations = evals;
  if (best.F < 0.0) return res;  // nothing feasible

  if (options.polish && best.u >= 1.0) {
    if (const auto polished = lagrange_polish(best)) {
      if (polished->F >= best.F - 1e-9 && constraint_z(polished->x, polished->y, 1.0)) {
        best = *polished;
        res.polished = true;
      }
    }
  }

  res.x = best.x;
  res.y = best.y;
  res.z = best.z;
  res.u = best.u;
  res.F_value = best.F;
  res.at_boundary = std::abs(best.u - 1.0) < 1e-12;
  return res;
}

StationarityScan lagrange_stationarity_scan(int density, double u_max) {
  StationarityScan scan;
  scan.min_residual = std::numeric_limits<double>::infinity();
  const int d = std::max(density, 1);
  for (int i = 1; i <= d; ++i) {
    const double x = 4.0 * i / d;
    for (int j = 1; j <= d; ++j) {
      const double y = 4.0 * j / d;
      for (int k = 1; k <= d; ++k) {
        const double u = u_max * k / d;
        const auto z = constraint_z(x, y, u);
        if (!z) continue;
        ++scan.samples;
        const Vec4 gf = objective_root_gradient(x, y, u);
        const Vec4 gg = constraint_gradient(x, y, *z, u);
        double dot = 0.0, gg2 = 0.0;
        for (int c = 0; c < 4; ++c) {
          dot += gf[c] * gg[c];
          gg2 += gg[c] * gg[c];
        }
        const double lambda = gg2 > 0.0 ? dot / gg2 : 0.0;
        double r2 = 0.0;
        for (int c = 0; c < 4; ++c) r2 += std::pow(gf[c] - lambda * gg[c], 2);
        const double r = std::sqrt(r2);
        if (r < scan.min_residual) {
          scan.min_residual = r;
          scan.x = x;
          scan.y = y;
          scan.z = *z;
          scan.u = u;
        }
      }
    }
  }
  return scan;
}

}  // namespace qgf
