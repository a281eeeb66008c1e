#pragma once

// Lumped-element description of a charge qubit capacitively coupled to an
// LC resonator mode, and every closed-form quantity derived from it:
// effective capacitances, charging and junction energies, oscillator
// frequencies, impedances and the qubit-resonator coupling rate.
//
// Unit conventions used throughout the library:
//   * capacitance in farads, inductance in henries
//   * energies and frequencies as ordinary frequencies in hertz (E/h, w/2pi)
//   * external flux in units of the flux quantum phi0 = h/2e
// Angular factors live only inside formulas, never in stored values.

#include <cmath>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"

namespace cqed {

struct CircuitParams {
  double c_j;      // qubit island capacitance to ground (F)
  double c_c;      // coupling capacitance (F)
  double c_r;      // resonator mode capacitance (F)
  double l_r;      // resonator mode inductance (H)
  double e_j_max;  // maximum Josephson energy E_J,max/h (Hz)
  double flux = 0.0;  // external flux in units of phi0

  void validate() const {
    detail::require_positive(c_j, "circuit_core", "c_j");
    detail::require_positive(c_c, "circuit_core", "c_c");
    detail::require_positive(c_r, "circuit_core", "c_r");
    detail::require_positive(l_r, "circuit_core", "l_r");
    detail::require_positive(e_j_max, "circuit_core", "e_j_max");
  }
};

struct EffectiveCaps {
  double c_star_sq;  // C*^2 = Cc*Cj + Cc*Cr + Cj*Cr (F^2)
  double c_j_eff;    // C*^2 / (Cr + Cc)
  double c_r_eff;    // C*^2 / (Cj + Cc)
};

inline EffectiveCaps effective_capacitances(double c_j, double c_c, double c_r) {
  detail::require_positive(c_j, "circuit_core", "c_j");
  detail::require_positive(c_c, "circuit_core", "c_c");
  detail::require_positive(c_r, "circuit_core", "c_r");
  const double c_star_sq = c_c * c_j + c_c * c_r + c_j * c_r;
  return {c_star_sq, c_star_sq / (c_r + c_c), c_star_sq / (c_j + c_c)};
}

inline EffectiveCaps effective_capacitances(const CircuitParams& p) {
  return effective_capacitances(p.c_j, p.c_c, p.c_r);
}

/// Island charging energy e^2/(2 C_J,eff), returned as E_c/h in hertz.
inline double charging_energy(double c_j_eff) {
  detail::require_positive(c_j_eff, "circuit_core", "c_j_eff");
  using namespace constants;
  return elementary_charge * elementary_charge / (2.0 * c_j_eff * planck);
}

struct JosephsonEnergy {
  double e_j;  // |E_J,max cos(pi*flux)| (Hz)
  int branch;  // sign of cos(pi*flux): the spectrum depends on |E_J| only
};

inline JosephsonEnergy josephson_energy(double e_j_max, double flux) {
  detail::require_positive(e_j_max, "circuit_core", "e_j_max");
  const double c = std::cos(std::numbers::pi * flux);
  return {e_j_max * std::fabs(c), c < 0.0 ? -1 : 1};
}

struct TransmonFrequency {
  double f_a;  // sqrt(8 E_J E_c) - E_c (Hz)
  bool outside_transmon_regime;  // E_J/E_c < 20
};

inline TransmonFrequency transmon_frequency(double e_j, double e_c) {
  detail::require_positive(e_c, "circuit_core", "e_c");
  if (e_j < 0.0) throw domain_error("circuit_core", "e_j", "must be non-negative");
  return {std::sqrt(8.0 * e_j * e_c) - e_c, e_j / e_c < 20.0};
}

/// Harmonic (weak-anharmonicity) qubit frequency sqrt(8 E_J E_c). This is the
/// convention under which the coupling formulas below are exact algebraic
/// identities of each other and the coupling bound g <= sqrt(f_a f_r)/2 holds.
inline double transmon_frequency_harmonic(double e_j, double e_c) {
  detail::require_positive(e_c, "circuit_core", "e_c");
  if (e_j < 0.0) throw domain_error("circuit_core", "e_j", "must be non-negative");
  return std::sqrt(8.0 * e_j * e_c);
}

inline double resonator_frequency(double l_r, double c_r_eff) {
  detail::require_positive(l_r, "circuit_core", "l_r");
  detail::require_positive(c_r_eff, "circuit_core", "c_r_eff");
  return 1.0 / (2.0 * std::numbers::pi * std::sqrt(l_r * c_r_eff));
}

/// Coupling rate g/2pi from the capacitance-ratio form,
///   g = (1/2) sqrt( f_a f_r / ((1 + Cj/Cc)(1 + Cr/Cc)) ).
/// Pure formula: the caller chooses which qubit frequency convention f_a uses.
inline double coupling_rate_formula(double f_a, double f_r, double c_j, double c_c,
                                    double c_r) {
  detail::require_positive(f_a, "circuit_core", "f_a");
  detail::require_positive(f_r, "circuit_core", "f_r");
  detail::require_positive(c_c, "circuit_core", "c_c");
  if (c_j < 0.0) throw domain_error("circuit_core", "c_j", "must be non-negative");
  if (c_r < 0.0) throw domain_error("circuit_core", "c_r", "must be non-negative");
  return 0.5 * std::sqrt(f_a * f_r / ((1.0 + c_j / c_c) * (1.0 + c_r / c_c)));
}

/// Josephson inductance phi0^2 / (4 pi^2 E_J), with E_J/h in hertz.
inline double josephson_inductance(double e_j) {
  detail::require_positive(e_j, "circuit_core", "e_j");
  using namespace constants;
  const double e_j_joule = e_j * planck;
  return flux_quantum * flux_quantum /
         (4.0 * std::numbers::pi * std::numbers::pi * e_j_joule);
}

struct CouplingForms {
  double capacitance_form;  // Hz, from the (1+Cj/Cc)(1+Cr/Cc) ratio form
  double impedance_form;    // Hz, from (1/2)(Cc/C*^2)/sqrt(Zr_eff Za_eff)
};

/// Both closed forms of the coupling rate, evaluated from the same physical
/// network. The qubit frequency entering the ratio form is the harmonic
/// sqrt(8 E_J E_c); under that convention the two routes agree to machine
/// precision, and they stay within 1% of each other for any E_J/E_c >= 20
/// definition of f_a.
inline CouplingForms coupling_rate(const CircuitParams& p) {
  p.validate();
  const EffectiveCaps eff = effective_capacitances(p);
  const double e_c = charging_energy(eff.c_j_eff);
  const double e_j = josephson_energy(p.e_j_max, p.flux).e_j;
  detail::require_positive(e_j, "circuit_core", "e_j");
  const double f_a = transmon_frequency_harmonic(e_j, e_c);
  const double f_r = resonator_frequency(p.l_r, eff.c_r_eff);
  const double cap_form = coupling_rate_formula(f_a, f_r, p.c_j, p.c_c, p.c_r);

  using namespace constants;
  const double z_r_eff = std::sqrt(p.l_r / eff.c_r_eff);
  const double z_a_eff = std::sqrt(josephson_inductance(e_j) / eff.c_j_eff);
  // angular coupling (1/2)(Cc/C*^2)/sqrt(Zr Za), converted to Hz
  const double imp_form = 0.25 / std::numbers::pi * (p.c_c / eff.c_star_sq) /
                          std::sqrt(z_r_eff * z_a_eff);
  return {cap_form, imp_form};
}

struct ImpedanceChain {
  double z_r;  // sqrt(Lr/Cr), mode impedance (ohm)
  double z_0;  // pi*Zr/2, characteristic impedance of the half-wave line (ohm)
};

inline ImpedanceChain impedance_chain(double c_r, double l_r) {
  detail::require_positive(c_r, "circuit_core", "c_r");
  detail::require_positive(l_r, "circuit_core", "l_r");
  const double z_r = std::sqrt(l_r / c_r);
  return {z_r, std::numbers::pi * z_r / 2.0};
}

/// Everything the network determines in closed form, in one pass.
struct DerivedParams {
  double c_star_sq;
  double c_j_eff;
  double c_r_eff;
  double e_c;        // Hz
  double e_j;        // flux-tuned |E_J|/h (Hz)
  int e_j_branch;    // sign of cos(pi*flux)
  double f_a;        // sqrt(8 E_J E_c) - E_c (Hz)
  double f_a_harmonic;  // sqrt(8 E_J E_c) (Hz); used inside coupling forms
  double f_r;        // loaded resonator frequency, uses C_r,eff (Hz)
  double f_r_bare;   // bare line fundamental, uses C_r (Hz)
  double l_j;        // Josephson inductance (H)
  double z_r_eff;    // sqrt(Lr/C_r,eff) (ohm)
  double z_a_eff;    // sqrt(Lj/C_J,eff) (ohm)
  double g;          // coupling rate, capacitance-ratio form (Hz)
  double g_impedance_form;  // coupling rate, impedance form (Hz)
  bool outside_transmon_regime;
};

inline DerivedParams derive(const CircuitParams& p) {
  p.validate();
  const EffectiveCaps eff = effective_capacitances(p);
  const JosephsonEnergy ej = josephson_energy(p.e_j_max, p.flux);
  const double e_c = charging_energy(eff.c_j_eff);
  const TransmonFrequency fa = transmon_frequency(ej.e_j, e_c);
  const CouplingForms forms = coupling_rate(p);

  DerivedParams d;
  d.c_star_sq = eff.c_star_sq;
  d.c_j_eff = eff.c_j_eff;
  d.c_r_eff = eff.c_r_eff;
  d.e_c = e_c;
  d.e_j = ej.e_j;
  d.e_j_branch = ej.branch;
  d.f_a = fa.f_a;
  d.f_a_harmonic = transmon_frequency_harmonic(ej.e_j, e_c);
  d.f_r = resonator_frequency(p.l_r, eff.c_r_eff);
  d.f_r_bare = resonator_frequency(p.l_r, p.c_r);
  d.l_j = josephson_inductance(ej.e_j);
  d.z_r_eff = std::sqrt(p.l_r / eff.c_r_eff);
  d.z_a_eff = std::sqrt(d.l_j / eff.c_j_eff);
  d.g = forms.capacitance_form;
  d.g_impedance_form = forms.impedance_form;
  d.outside_transmon_regime = fa.outside_transmon_regime;
  return d;
}

}  // namespace cqed
