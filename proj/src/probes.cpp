#include "qgf/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qgf/closed_forms.hpp"
#include "qgf/flatband.hpp"
#include "qgf/sampling.hpp"
#include "qgf/scattering.hpp"

namespace qgf {

namespace {

constexpr int kBandPoints = 50;
constexpr double kNonzero = 1e-9;
constexpr double kDecoupledZero = 1e-12;

std::vector<double> random_potentials(Sampler& rng, int count) {
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(rng.coin() ? rng.potential() : 0.0);
  return out;
}

// Flatness window (0, V) with V the smallest controller potential (1 without
// controllers).
double band_edge(const LineConfig& lines) {
  double V = std::numeric_limits<double>::infinity();
  for (const auto& l : lines.lines) {
    if (l.role == Role::Controller) V = std::min(V, l.V);
  }
  return std::isfinite(V) ? V : 1.0;
}

void evaluate(const Layout& layout, bool decoupled, cplx limit, ProbeReport& rep) {
  const double V = band_edge(layout.lines);
  const auto grid = open_band_grid(V, kBandPoints);
  const FlatnessStats band = numerical_flatness(layout.coupling, layout.lines, grid);
  const double high = transmission(layout.coupling, layout.lines, kProbeHighEnergy).P;

  bool violation = false;
  if (decoupled) {
    ++rep.decoupled;
    const double worst = std::max(band.max_P, high);
    rep.max_decoupled_P = std::max(rep.max_decoupled_P, worst);
    violation = worst > kDecoupledZero;
  } else {
    ++rep.coupled;
    rep.min_high_energy_P = std::min(rep.min_high_energy_P, high);
    rep.max_limit_gap = std::max(rep.max_limit_gap, std::abs(high - std::norm(limit)));
    violation = high <= kNonzero;
  }
  const bool flat_positive = band.deviation < kNonzero && band.min_P > kNonzero;
  const bool decaying = high < kNonzero;
  if (flat_positive && decaying) violation = true;
  if (violation) ++rep.violations;
}

}  // namespace

std::string ProbeReport::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "layout: " << layout << "\n"
      << "samples: " << samples << "\n"
      << "coupled: " << coupled << "\n"
      << "decoupled: " << decoupled << "\n"
      << "errors: " << errors << "\n"
      << "min_high_energy_P: " << min_high_energy_P << "\n"
      << "max_decoupled_P: " << max_decoupled_P << "\n"
      << "max_limit_gap: " << max_limit_gap << "\n"
      << violations << " violations\n";
  return out.str();
}

ProbeReport probe_r1_impossibility(int samples, std::uint64_t seed) {
  ProbeReport rep;
  rep.layout = "r1";
  rep.samples = samples;
  rep.min_high_energy_P = std::numeric_limits<double>::infinity();
  Sampler rng(seed);
  for (int i = 0; i < samples; ++i) {
    const int n = rng.integer(3, 8);
    R1Layout l;
    l.t = rng.row(n - 1);
    l.s = rng.uniform(-2.0, 2.0);
    l.potentials = random_potentials(rng, n - 2);
    const bool decoupled = i % 10 == 9;
    if (decoupled) l.t(0) = 0.0;

    double norm_sum = 1.0;
    for (Eigen::Index j = 0; j < l.t.size(); ++j) norm_sum += std::norm(l.t(j));
    const cplx limit = 2.0 * std::conj(l.t(0)) / norm_sum;
    try {
      evaluate(l.build(), decoupled, limit, rep);
    } catch (const Error&) {
      ++rep.errors;
    }
  }
  return rep;
}

ProbeReport probe_lindep_impossibility(int samples, std::uint64_t seed) {
  ProbeReport rep;
  rep.layout = "lindep";
  rep.samples = samples;
  rep.min_high_energy_P = std::numeric_limits<double>::infinity();
  Sampler rng(seed);
  for (int i = 0; i < samples; ++i) {
    const int n = rng.integer(3, 8);
    const int r = rng.integer(2, n - 1);
    const int m3 = n - r - 1;
    LinDepLayout l;
    const CMatrix S = rng.hermitian(r);
    l.s = S(0, 0).real();
    l.S2 = S.block(0, 1, 1, r - 1);
    l.S4 = S.bottomRightCorner(r - 1, r - 1);
    l.T1 = rng.row(m3);
    l.t = rng.entry();
    l.T2 = rng.matrix(r - 1, m3);
    l.potentials2 = random_potentials(rng, r - 1);
    l.potentials3 = random_potentials(rng, m3);
    const bool decoupled = i % 10 == 9;
    if (decoupled) l.t = 0.0;
    try {
      evaluate(l.build(), decoupled, lindep_high_energy_limit(l), rep);
    } catch (const Error&) {
      ++rep.errors;
    }
  }
  return rep;
}

}  // namespace qgf
