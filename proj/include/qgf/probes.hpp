#pragma once

// Randomized checks that r = 1 couplings and couplings whose input/output
// columns of B are linearly dependent never give a flat passband that also
// vanishes at high energy.

#include <cstdint>
#include <string>

namespace qgf {

struct ProbeReport {
  std::string layout;
  int samples = 0;
  int coupled = 0;     // output coupling t != 0
  int decoupled = 0;   // t == 0
  int violations = 0;
  int errors = 0;      // samples where a solve failed
  double min_high_energy_P = 0;   // over coupled samples, at E = 1e6
  double max_decoupled_P = 0;     // over decoupled samples, all energies probed
  double max_limit_gap = 0;       // |P(1e6) - |limit amplitude|^2| over coupled samples

  std::string to_text() const;
};

inline constexpr double kProbeHighEnergy = 1e6;

ProbeReport probe_r1_impossibility(int samples, std::uint64_t seed);
ProbeReport probe_lindep_impossibility(int samples, std::uint64_t seed);

}  // namespace qgf
