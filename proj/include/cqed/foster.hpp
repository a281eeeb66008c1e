#pragma once

// Conversion between a distributed transmission-line resonator and its
// lumped-element ladder equivalent: a series capacitance (open-ended line
// only) followed by one series LC oscillator per mode.
//
// Half-wave (open at both ends): all harmonics, f_p = p*f_1, z_p = 2*z0/(p*pi),
// mode capacitance p-independent.
// Quarter-wave (shorted far end): odd harmonics only, f_p = p*f_1 for
// p = 1,3,5,..., z_p = 4*z0/(p*pi), no series capacitance.

#include <cmath>
#include <optional>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/errors.hpp"

namespace cqed {

enum class LineTopology { half_wave, quarter_wave };

struct LineSpec {
  double z_0;  // characteristic impedance (ohm)
  double f_1;  // bare fundamental of the unloaded line (Hz)
  LineTopology topology = LineTopology::half_wave;

  void validate() const {
    detail::require_positive(z_0, "foster", "z_0");
    detail::require_positive(f_1, "foster", "f_1");
  }
};

struct FosterMode {
  int p;       // harmonic index (1,2,3,... or 1,3,5,...)
  double f_p;  // Hz
  double z_p;  // ohm
  double c_p;  // F
  double l_p;  // H
};

struct FosterModes {
  LineTopology topology;
  std::optional<double> series_c;  // F, half-wave only
  std::vector<FosterMode> modes;   // ordered by increasing frequency
};

inline FosterModes decompose(const LineSpec& spec, int n_modes) {
  spec.validate();
  if (n_modes < 1) throw domain_error("foster", "n_modes", "must be >= 1");

  const double w1 = 2.0 * std::numbers::pi * spec.f_1;
  FosterModes out;
  out.topology = spec.topology;
  out.modes.reserve(static_cast<std::size_t>(n_modes));

  if (spec.topology == LineTopology::half_wave) {
    out.series_c = std::numbers::pi / (2.0 * w1 * spec.z_0);
    for (int m = 0; m < n_modes; ++m) {
      const int p = m + 1;
      FosterMode mode;
      mode.p = p;
      mode.f_p = p * spec.f_1;
      mode.z_p = 2.0 * spec.z_0 / (p * std::numbers::pi);
      mode.c_p = std::numbers::pi / (2.0 * w1 * spec.z_0);  // p-independent
      mode.l_p = 2.0 * spec.z_0 / (std::numbers::pi * w1) / (p * p);
      out.modes.push_back(mode);
    }
  } else {
    for (int m = 0; m < n_modes; ++m) {
      const int p = 2 * m + 1;  // odd harmonics
      FosterMode mode;
      mode.p = p;
      mode.f_p = p * spec.f_1;
      mode.z_p = 4.0 * spec.z_0 / (p * std::numbers::pi);
      mode.c_p = std::numbers::pi / (4.0 * w1 * spec.z_0);
      mode.l_p = 4.0 * spec.z_0 / (std::numbers::pi * w1) / (p * p);
      out.modes.push_back(mode);
    }
  }
  return out;
}

/// Inverse of decompose restricted to the fundamental: recover the line from
/// the mode-1 LC values. Round-trips with decompose to machine precision.
inline LineSpec line_from_lc(double c_r, double l_r, LineTopology topology) {
  detail::require_positive(c_r, "foster", "c_r");
  detail::require_positive(l_r, "foster", "l_r");
  const double z_eq = std::sqrt(l_r / c_r);
  LineSpec spec;
  spec.topology = topology;
  spec.f_1 = resonator_frequency(l_r, c_r);
  spec.z_0 = (topology == LineTopology::half_wave)
                 ? std::numbers::pi * z_eq / 2.0
                 : std::numbers::pi * z_eq / 4.0;
  return spec;
}

/// Whether the ladder's series capacitance may be dropped from a coupled
/// model: it shorts out once it exceeds `threshold` times the coupling
/// capacitor it sits in series with.
inline bool series_cap_negligible(double series_c, double c_c, double threshold = 5.0) {
  detail::require_positive(series_c, "foster", "series_c");
  detail::require_positive(c_c, "foster", "c_c");
  detail::require_positive(threshold, "foster", "threshold");
  return series_c > threshold * c_c;
}

}  // namespace cqed
