#pragma once

// Coupling-maximization analysis: normalized coupling from the capacitance
// ratios, the 1/2 bound it can never exceed, the resonator impedance each
// topology needs to realize a given (C_r, f), and a brute-force scan over
// capacitance choices.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/errors.hpp"

namespace cqed {

enum class ResonatorTopology { quarter_wave, half_wave, lumped };

inline const char* to_string(ResonatorTopology t) {
  switch (t) {
    case ResonatorTopology::quarter_wave: return "quarter_wave";
    case ResonatorTopology::half_wave: return "half_wave";
    case ResonatorTopology::lumped: return "lumped";
  }
  return "?";
}

struct DesignPoint {
  double c_j;       // F
  double c_c;       // F
  double c_r;       // F
  double target_f;  // Hz, design frequency with qubit and resonator matched
  ResonatorTopology topology = ResonatorTopology::quarter_wave;

  void validate() const {
    detail::require_positive(c_j, "design", "c_j");
    detail::require_positive(c_c, "design", "c_c");
    detail::require_positive(c_r, "design", "c_r");
    detail::require_positive(target_f, "design", "target_f");
  }
};

/// Normalized coupling g / sqrt(f_a f_r) from the capacitance ratios alone:
/// (1/2) / sqrt((1 + Cj/Cc)(1 + Cr/Cc)) <= 1/2.
inline double normalized_coupling(double c_j, double c_c, double c_r) {
  detail::require_positive(c_j, "design", "c_j");
  detail::require_positive(c_c, "design", "c_c");
  detail::require_positive(c_r, "design", "c_r");
  return 0.5 / std::sqrt((1.0 + c_j / c_c) * (1.0 + c_r / c_c));
}

/// Impedance the resonator needs so that its capacitance is c_r at frequency
/// f. Lumped: Z_eq = 1/(2 pi f c_r); the line topologies relate to that
/// through exact factors, quarter-wave pi/4 and half-wave pi/2.
inline double required_impedance(double c_r, double f, ResonatorTopology topology) {
  detail::require_positive(c_r, "design", "c_r");
  detail::require_positive(f, "design", "f");
  const double z_eq = 1.0 / (2.0 * std::numbers::pi * f * c_r);
  switch (topology) {
    case ResonatorTopology::lumped: return z_eq;
    case ResonatorTopology::quarter_wave: return std::numbers::pi * z_eq / 4.0;
    case ResonatorTopology::half_wave: return std::numbers::pi * z_eq / 2.0;
  }
  return z_eq;
}

struct DesignReport {
  double g_bar;              // normalized coupling
  double g;                  // Hz at the design frequency
  double required_z;         // ohm, per the chosen topology
  std::string regime;        // strong | ultrastrong | deep-strong
  double bound_margin;       // g / (sqrt(f_a f_r)/2) = 2 g_bar, <= 1
  double e_c;                // Hz implied by C_J,eff
  double e_j;                // Hz implied by the target frequency
  double ej_ec_ratio;
  bool transmon_regime_ok;   // E_J/E_c >= 20
  std::optional<double> quoted_g_bar;      // external comparison value
  std::optional<double> quoted_rel_dev;    // |formula - quoted| / quoted
};

inline DesignReport evaluate(const DesignPoint& point,
                             std::optional<double> quoted_g_bar = std::nullopt) {
  point.validate();
  DesignReport r;
  r.g_bar = normalized_coupling(point.c_j, point.c_c, point.c_r);
  r.g = r.g_bar * point.target_f;  // f_a = f_r = target_f
  r.required_z = required_impedance(point.c_r, point.target_f, point.topology);
  r.bound_margin = 2.0 * r.g_bar;
  r.regime = (r.g_bar >= 1.0) ? "deep-strong" : (r.g_bar >= 0.1) ? "ultrastrong" : "strong";

  const EffectiveCaps eff = effective_capacitances(point.c_j, point.c_c, point.c_r);
  r.e_c = charging_energy(eff.c_j_eff);
  // E_J from sqrt(8 E_J E_c) - E_c = target_f.
  const double s = point.target_f + r.e_c;
  r.e_j = s * s / (8.0 * r.e_c);
  r.ej_ec_ratio = r.e_j / r.e_c;
  r.transmon_regime_ok = r.ej_ec_ratio >= 20.0;

  if (quoted_g_bar) {
    r.quoted_g_bar = *quoted_g_bar;
    r.quoted_rel_dev = std::fabs(r.g_bar - *quoted_g_bar) / std::fabs(*quoted_g_bar);
  }
  return r;
}

struct ScanEntry {
  DesignPoint point;
  DesignReport report;
};

/// Cartesian scan over capacitance values, ranked by normalized coupling,
/// best first. Entries outside the weak-anharmonicity regime are flagged in
/// their reports, not dropped.
inline std::vector<ScanEntry> scan_coupling(const std::vector<double>& c_j_values,
                                            const std::vector<double>& c_c_values,
                                            const std::vector<double>& c_r_values,
                                            double target_f,
                                            ResonatorTopology topology =
                                                ResonatorTopology::quarter_wave) {
  if (c_j_values.empty() || c_c_values.empty() || c_r_values.empty())
    throw domain_error("design", "scan", "all three capacitance ranges must be non-empty");
  detail::require_positive(target_f, "design", "target_f");

  std::vector<ScanEntry> entries;
  entries.reserve(c_j_values.size() * c_c_values.size() * c_r_values.size());
  for (double cj : c_j_values) {
    for (double cc : c_c_values) {
      for (double cr : c_r_values) {
        DesignPoint p{cj, cc, cr, target_f, topology};
        entries.push_back({p, evaluate(p)});
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const ScanEntry& a, const ScanEntry& b) {
    if (a.report.g_bar != b.report.g_bar) return a.report.g_bar > b.report.g_bar;
    if (a.point.c_j != b.point.c_j) return a.point.c_j < b.point.c_j;
    if (a.point.c_c != b.point.c_c) return a.point.c_c < b.point.c_c;
    return a.point.c_r < b.point.c_r;
  });
  return entries;
}

}  // namespace cqed
