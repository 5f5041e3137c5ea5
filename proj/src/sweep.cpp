#include "qgf/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "qgf/scattering.hpp"

namespace qgf {

std::vector<double> EnergyGrid::energies() const {
  if (!(e_min > 0.0)) throw Error(ErrorCode::NonpositiveEnergy, "grid must start above E = 0");
  if (!(e_max > e_min)) throw Error(ErrorCode::InvalidSpec, "grid needs emax > emin");
  if (points < 2) throw Error(ErrorCode::InvalidSpec, "grid needs at least 2 points");

  std::vector<double> out(static_cast<std::size_t>(points));
  const double last = points - 1;
  for (int i = 0; i < points; ++i) {
    const double t = i / last;
    out[i] = spacing == Spacing::Linear
                 ? e_min + t * (e_max - e_min)
                 : std::exp(std::log(e_min) + t * (std::log(e_max) - std::log(e_min)));
  }
  out.back() = e_max;
  return out;
}

EnergyGrid default_grid(const LineConfig& lines) {
  double vmax = lines.max_potential();
  if (vmax <= 0.0) vmax = 1.0;
  return {0.002 * vmax, 5.0 * vmax, 500, Spacing::Linear};
}

std::vector<SweepRecord> sweep(const STCoupling& c, const LineConfig& lines,
                               const std::vector<double>& energies, const Tolerances& tol) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRecord> out;
  out.reserve(energies.size());
  for (double E : energies) {
    try {
      const auto s = transmission(c, lines, E, tol);
      const double refl2 = std::norm(s.r_refl);
      out.push_back({E, s.P, s.t.real(), s.t.imag(), refl2, refl2 + s.P});
    } catch (const Error&) {
      out.push_back({E, nan, nan, nan, nan, nan});
    }
  }
  return out;
}

namespace {

void put(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "nan";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "E,P,re_t,im_t,refl2,flux\n";
  for (const auto& r : records) {
    put(out, r.E);
    for (double v : {r.P, r.re_t, r.im_t, r.refl2, r.flux}) {
      out << ',';
      put(out, v);
    }
    out << '\n';
  }
}

}  // namespace qgf
