#pragma once

// Assembly and dense diagonalization of the coupled qubit-resonator
// Hamiltonian in three tiers:
//
//   duffing_single   weakly-anharmonic oscillator qubit, one mode
//   exact_single     exact charge-basis qubit levels and matrix elements
//   exact_multimode  exact qubit plus the ladder of higher resonator modes
//
// The Hamiltonian, in ordinary-frequency units (Hz),
//   H = sum_k eps_k |k><k| + sum_p f_p a_p^dag a_p
//     + sum_p sum_kl g_kl,p (a_p + a_p^dag) |k><l|
// with g_kl,p = P * <k|n|l> * w_p. The scale P (Hz per unit charge matrix
// element) either comes from the full capacitance network or is anchored so
// that g_01 equals a given value when the qubit is tuned to the resonator.
//
// Basis ordering: qubit index slowest, then modes in ascending order, photon
// number fastest within each mode: flat = ((k*nph + n_1)*nph + n_2)...

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/cpb.hpp"
#include "cqed/errors.hpp"
#include "cqed/foster.hpp"

namespace cqed {

enum class ModelTier { duffing_single, exact_single, exact_multimode };

/// How the coupling of the higher resonator modes scales relative to the
/// fundamental. The ladder gives z_p = z_1/p for a half-wave line, so
///   impedance_ratio : w_p = z_p/z_1                      (decays as 1/p)
///   charge_zpf      : w_p = ((c_p/l_p)/(c_1/l_1))^(1/4)  (grows as sqrt p)
///   equal           : w_p = 1
/// impedance_ratio is the default: it weights each mode by its impedance
/// participation at the coupling port, and it is the only rule under which
/// the higher-mode dispersive shifts fall off fast enough for a short
/// truncation of this ladder to be self-consistent.
enum class ModeScaling { impedance_ratio, charge_zpf, equal };

/// Optional direct Hamiltonian parameters. When set they take precedence
/// over the values the capacitance network implies; this is how externally
/// fitted (E_c, f_r, g) sets are fed back into the model.
struct HamiltonianOverrides {
  std::optional<double> e_c;     // Hz
  std::optional<double> f_r;     // loaded fundamental (Hz)
  std::optional<double> g_res;   // g_01 when the qubit is at f_r (Hz)
  std::optional<double> f_bare;  // bare line fundamental (Hz)
};

struct ModelConfig {
  ModelTier tier = ModelTier::exact_single;
  int k_levels = 6;  // qubit levels retained
  int n_ph = 8;      // photon cutoff per mode
  int n_modes = 1;   // resonator modes (exact_multimode only)
  int n_cut = 15;    // charge basis half-width for the exact tiers
  std::size_t dim_cap = 20000;
  CircuitParams circuit;
  bool rwa = false;  // keep only excitation-conserving terms
  ModeScaling mode_scaling = ModeScaling::impedance_ratio;
  LineTopology resonator_topology = LineTopology::half_wave;
  double series_c_drop_threshold = 5.0;
  HamiltonianOverrides overrides;

  int active_modes() const {
    return (tier == ModelTier::exact_multimode) ? n_modes : 1;
  }

  std::size_t dimension() const {
    std::size_t d = static_cast<std::size_t>(k_levels);
    for (int p = 0; p < active_modes(); ++p) d *= static_cast<std::size_t>(n_ph);
    return d;
  }

  void validate() const {
    circuit.validate();
    if (k_levels < 2) throw domain_error("rabi_hamiltonian", "k_levels", "must be >= 2");
    if (n_ph < 2) throw domain_error("rabi_hamiltonian", "n_ph", "must be >= 2");
    if (n_modes < 1) throw domain_error("rabi_hamiltonian", "n_modes", "must be >= 1");
    if (tier != ModelTier::exact_multimode && n_modes != 1) {
      throw domain_error("rabi_hamiltonian", "n_modes",
                         "single-mode tiers require n_modes == 1");
    }
    if (dimension() > dim_cap) {
      throw domain_error(
          "rabi_hamiltonian", "dim_cap",
          "total dimension " + std::to_string(dimension()) + " exceeds cap " +
              std::to_string(dim_cap) +
              "; reduce k_levels/n_ph/n_modes (e.g. n_ph=5 for multimode runs)");
    }
  }
};

/// Flux-independent Hamiltonian parameters after resolving the circuit
/// against any overrides. p_scale is the coupling in Hz per unit charge
/// matrix element; it is what ties g_kl across flux to one anchor value.
struct ResolvedModel {
  double e_c;               // Hz
  double e_j_max;           // Hz
  double f_r;               // loaded fundamental (Hz)
  double f_bare;            // bare line fundamental (Hz)
  double p_scale;           // Hz per unit <k|n|l>
  double e_j_at_resonance;  // E_J solving eps_1 = f_r (Hz)
  double n01_at_resonance;  // exact <0|n|1> there
  double g_ref;             // g_01 at resonance = p_scale * n01_at_resonance (Hz)
};

namespace detail {

inline double cpb_eps1(double e_c, double e_j, int n_cut) {
  return solve_cpb(e_c, e_j, n_cut, 2).levels[1];
}

// E_J such that eps_1(E_J) equals the target frequency. eps_1 is strictly
// increasing in E_J, so plain bisection on an expanding bracket suffices.
inline double invert_eps1(double e_c, double f_target, int n_cut) {
  require_positive(f_target, "rabi_hamiltonian", "f_r");
  double lo = 0.0;
  double hi = std::max((f_target + e_c) * (f_target + e_c) / (8.0 * e_c), 8.0 * e_c);
  for (int i = 0; i < 60 && cpb_eps1(e_c, hi, n_cut) < f_target; ++i) hi *= 2.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cpb_eps1(e_c, mid, n_cut) < f_target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> mode_weights(const ModelConfig& cfg, int n_modes) {
  const LineSpec line =
      line_from_lc(cfg.circuit.c_r, cfg.circuit.l_r, cfg.resonator_topology);
  const FosterModes ladder = decompose(line, n_modes);
  std::vector<double> w(static_cast<std::size_t>(n_modes), 1.0);
  for (int p = 1; p < n_modes; ++p) {
    const FosterMode& m = ladder.modes[static_cast<std::size_t>(p)];
    const FosterMode& m1 = ladder.modes[0];
    switch (cfg.mode_scaling) {
      case ModeScaling::impedance_ratio:
        w[static_cast<std::size_t>(p)] = m.z_p / m1.z_p;
        break;
      case ModeScaling::charge_zpf:
        w[static_cast<std::size_t>(p)] = std::pow((m.c_p / m.l_p) / (m1.c_p / m1.l_p), 0.25);
        break;
      case ModeScaling::equal:
        w[static_cast<std::size_t>(p)] = 1.0;
        break;
    }
  }
  return w;
}

}  // namespace detail

inline ResolvedModel resolve(const ModelConfig& cfg) {
  cfg.validate();
  const EffectiveCaps eff = effective_capacitances(cfg.circuit);

  ResolvedModel r;
  r.e_c = cfg.overrides.e_c.value_or(charging_energy(eff.c_j_eff));
  r.e_j_max = cfg.circuit.e_j_max;
  r.f_r = cfg.overrides.f_r.value_or(resonator_frequency(cfg.circuit.l_r, eff.c_r_eff));
  // The loaded and bare fundamentals differ by sqrt(C_r,eff / C_r).
  r.f_bare =
      cfg.overrides.f_bare.value_or(r.f_r * std::sqrt(eff.c_r_eff / cfg.circuit.c_r));

  r.e_j_at_resonance = detail::invert_eps1(r.e_c, r.f_r, cfg.n_cut);
  r.n01_at_resonance = std::fabs(
      detail::solve_cpb(r.e_c, r.e_j_at_resonance, cfg.n_cut, 2).n_elements(0, 1));

  if (cfg.overrides.g_res) {
    r.p_scale = *cfg.overrides.g_res / r.n01_at_resonance;
  } else {
    using namespace constants;
    const double q_zpf = std::sqrt(0.5 * hbar * std::sqrt(eff.c_r_eff / cfg.circuit.l_r));
    r.p_scale =
        2.0 * elementary_charge / planck * (cfg.circuit.c_c / eff.c_star_sq) * q_zpf;
  }
  r.g_ref = r.p_scale * r.n01_at_resonance;
  return r;
}

/// Per-mode frequencies and coupling matrices g_kl (Hz) at the configured flux.
struct CouplingSet {
  std::vector<double> mode_f;       // Hz
  std::vector<double> mode_weight;  // w_p
  std::vector<Eigen::MatrixXd> g_kl;
};

inline CouplingSet coupling_set(const ModelConfig& cfg, const ResolvedModel& r) {
  if (cfg.tier == ModelTier::duffing_single) {
    throw domain_error("rabi_hamiltonian", "tier",
                       "coupling_set needs an exact tier; the Duffing tier has a "
                       "single scalar coupling");
  }
  cfg.validate();
  const double e_j = josephson_energy(r.e_j_max, cfg.circuit.flux).e_j;
  const int n_modes = cfg.active_modes();
  const CpbSpectrum cs = diagonalize_cpb(r.e_c, e_j, cfg.n_cut, cfg.k_levels);

  CouplingSet set;
  set.mode_weight = detail::mode_weights(cfg, n_modes);
  set.mode_f.resize(static_cast<std::size_t>(n_modes));
  // Mode 1 is the loaded fundamental of the single-mode model; the higher
  // ladder modes sit at harmonics of the bare line.
  set.mode_f[0] = r.f_r;
  if (n_modes > 1) {
    const LineSpec line =
        line_from_lc(cfg.circuit.c_r, cfg.circuit.l_r, cfg.resonator_topology);
    const FosterModes ladder = decompose(line, n_modes);
    for (int p = 1; p < n_modes; ++p) {
      set.mode_f[static_cast<std::size_t>(p)] =
          ladder.modes[static_cast<std::size_t>(p)].p * r.f_bare;
    }
  }
  for (int p = 0; p < n_modes; ++p) {
    set.g_kl.push_back(r.p_scale * set.mode_weight[static_cast<std::size_t>(p)] *
                       cs.n_elements);
  }
  return set;
}

inline CouplingSet coupling_set(const ModelConfig& cfg) {
  return coupling_set(cfg, resolve(cfg));
}

namespace detail {

// Digit helpers for the flat basis index (qubit slowest, mode P fastest).
inline std::size_t qubit_stride(int n_ph, int n_modes) {
  std::size_t s = 1;
  for (int p = 0; p < n_modes; ++p) s *= static_cast<std::size_t>(n_ph);
  return s;
}

inline std::size_t mode_stride(int n_ph, int n_modes, int mode) {
  std::size_t s = 1;
  for (int p = mode + 1; p < n_modes; ++p) s *= static_cast<std::size_t>(n_ph);
  return s;
}

inline int qubit_of(std::size_t flat, int n_ph, int n_modes) {
  return static_cast<int>(flat / qubit_stride(n_ph, n_modes));
}

inline int photon_of(std::size_t flat, int n_ph, int n_modes, int mode) {
  return static_cast<int>((flat / mode_stride(n_ph, n_modes, mode)) %
                          static_cast<std::size_t>(n_ph));
}

}  // namespace detail

/// Dense real-symmetric Hamiltonian matrix in Hz at cfg.circuit.flux.
inline Eigen::MatrixXd assemble(const ModelConfig& cfg, const ResolvedModel& r) {
  cfg.validate();
  const double e_j = josephson_energy(r.e_j_max, cfg.circuit.flux).e_j;
  const int n_modes = cfg.active_modes();
  const int k = cfg.k_levels;
  const int n_ph = cfg.n_ph;
  const std::size_t dim = cfg.dimension();

  std::vector<double> eps(static_cast<std::size_t>(k));
  Eigen::MatrixXd nmat = Eigen::MatrixXd::Zero(k, k);
  std::vector<double> mode_f;
  std::vector<double> weight;
  double coupling_scale = r.p_scale;

  if (cfg.tier == ModelTier::duffing_single) {
    const double f_a = std::sqrt(8.0 * e_j * r.e_c) - r.e_c;
    for (int i = 0; i < k; ++i)
      eps[static_cast<std::size_t>(i)] = i * f_a - 0.5 * r.e_c * i * (i - 1.0);
    // Harmonic-limit ladder: <i|n|i+1> = n01_asym * sqrt(i+1).
    const double n01 = (e_j > 0.0) ? charge_element_01_asymptotic(r.e_c, e_j) : 0.0;
    for (int i = 0; i + 1 < k; ++i)
      nmat(i, i + 1) = nmat(i + 1, i) = n01 * std::sqrt(double(i + 1));
    mode_f = {r.f_r};
    weight = {1.0};
    if (cfg.overrides.g_res) {
      // An anchored coupling is anchored within this tier's own matrix-element
      // convention, so that g_01 equals g_res exactly on resonance here too.
      const double ej_res = (r.f_r + r.e_c) * (r.f_r + r.e_c) / (8.0 * r.e_c);
      coupling_scale = *cfg.overrides.g_res / charge_element_01_asymptotic(r.e_c, ej_res);
    }
  } else {
    const CouplingSet set = coupling_set(cfg, r);
    const CpbSpectrum cs = diagonalize_cpb(r.e_c, e_j, cfg.n_cut, k);
    eps = cs.levels;
    nmat = cs.n_elements;
    mode_f = set.mode_f;
    weight = set.mode_weight;
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const int t = detail::qubit_of(i, n_ph, n_modes);
    double diag = eps[static_cast<std::size_t>(t)];
    for (int p = 0; p < n_modes; ++p)
      diag += detail::photon_of(i, n_ph, n_modes, p) * mode_f[static_cast<std::size_t>(p)];
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag;
  }

  const std::ptrdiff_t t_stride =
      static_cast<std::ptrdiff_t>(detail::qubit_stride(n_ph, n_modes));
  for (std::size_t i = 0; i < dim; ++i) {
    const int t1 = detail::qubit_of(i, n_ph, n_modes);
    for (int p = 0; p < n_modes; ++p) {
      const int n = detail::photon_of(i, n_ph, n_modes, p);
      if (n + 1 >= n_ph) continue;
      const std::ptrdiff_t ph_step =
          static_cast<std::ptrdiff_t>(detail::mode_stride(n_ph, n_modes, p));
      const double amp_ph = std::sqrt(double(n + 1));
      for (int t2 = 0; t2 < k; ++t2) {
        const double el = nmat(t2, t1);
        if (el == 0.0) continue;
        // This entry is a_p^dag together with |t2><t1|; it conserves the total
        // excitation number only when the qubit index drops by one.
        if (cfg.rwa && t2 - t1 != -1) continue;
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + ph_step +
                                 static_cast<std::ptrdiff_t>(t2 - t1) * t_stride;
        const double g =
            coupling_scale * weight[static_cast<std::size_t>(p)] * el * amp_ph;
        h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += g;
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += g;
      }
    }
  }
  return h;
}

inline Eigen::MatrixXd assemble(const ModelConfig& cfg) {
  return assemble(cfg, resolve(cfg));
}

struct StateLabel {
  int qubit = 0;             // dominant bare qubit level
  std::vector<int> photons;  // dominant bare photon numbers per mode
  double weight = 0.0;       // squared overlap with that bare state
};

struct SpectrumResult {
  std::vector<double> eigenfrequencies;  // Hz, ascending, ground = 0
  std::vector<StateLabel> labels;
  std::vector<double> transitions_from_ground;  // Hz
  std::vector<std::string> warnings;
};

/// Full diagonalization with eigenvectors kept; spectroscopy-level code works
/// from the overlap table directly.
struct DiagonalizedModel {
  Eigen::VectorXd eigenvalues;   // referenced to ground = 0
  Eigen::MatrixXd eigenvectors;  // columns
  int k_levels = 0;
  int n_ph = 0;
  int n_modes = 0;

  std::size_t flat_index(int qubit, const std::vector<int>& photons) const {
    std::size_t f = static_cast<std::size_t>(qubit);
    for (int p = 0; p < n_modes; ++p)
      f = f * static_cast<std::size_t>(n_ph) +
          static_cast<std::size_t>(photons[static_cast<std::size_t>(p)]);
    return f;
  }

  /// Eigenstate with maximum squared overlap on a bare product state.
  std::pair<int, double> find_state(int qubit, const std::vector<int>& photons) const {
    const Eigen::Index row = static_cast<Eigen::Index>(flat_index(qubit, photons));
    int best = 0;
    double best_w = -1.0;
    for (Eigen::Index c = 0; c < eigenvectors.cols(); ++c) {
      const double w = eigenvectors(row, c) * eigenvectors(row, c);
      if (w > best_w) {
        best_w = w;
        best = static_cast<int>(c);
      }
    }
    return {best, best_w};
  }
};

inline DiagonalizedModel diagonalize_full(const ModelConfig& cfg, const ResolvedModel& r) {
  const Eigen::MatrixXd h = assemble(cfg, r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  DiagonalizedModel out;
  out.eigenvalues = solver.eigenvalues().array() - solver.eigenvalues()(0);
  out.eigenvectors = solver.eigenvectors();
  out.k_levels = cfg.k_levels;
  out.n_ph = cfg.n_ph;
  out.n_modes = cfg.active_modes();
  return out;
}

inline DiagonalizedModel diagonalize_full(const ModelConfig& cfg) {
  return diagonalize_full(cfg, resolve(cfg));
}

inline SpectrumResult diagonalize(const ModelConfig& cfg) {
  const DiagonalizedModel d = diagonalize_full(cfg);
  const std::size_t dim = static_cast<std::size_t>(d.eigenvalues.size());

  SpectrumResult out;
  out.eigenfrequencies.resize(dim);
  out.labels.resize(dim);
  out.transitions_from_ground.reserve(dim - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    out.eigenfrequencies[i] = d.eigenvalues(static_cast<Eigen::Index>(i));
    // Dominant bare character; strict inequality keeps the lowest flat index
    // (lowest bare energy in this layout) on numerically exact ties.
    int best_row = 0;
    double best_w = -1.0;
    for (std::size_t rw = 0; rw < dim; ++rw) {
      const double v = d.eigenvectors(static_cast<Eigen::Index>(rw),
                                      static_cast<Eigen::Index>(i));
      const double w = v * v;
      if (w > best_w) {
        best_w = w;
        best_row = static_cast<int>(rw);
      }
    }
    StateLabel lab;
    lab.qubit = detail::qubit_of(static_cast<std::size_t>(best_row), d.n_ph, d.n_modes);
    lab.photons.resize(static_cast<std::size_t>(d.n_modes));
    for (int p = 0; p < d.n_modes; ++p)
      lab.photons[static_cast<std::size_t>(p)] =
          detail::photon_of(static_cast<std::size_t>(best_row), d.n_ph, d.n_modes, p);
    lab.weight = best_w;
    out.labels[i] = lab;
    if (i > 0) out.transitions_from_ground.push_back(out.eigenfrequencies[i]);
  }

  if (cfg.tier == ModelTier::exact_multimode) {
    const LineSpec line =
        line_from_lc(cfg.circuit.c_r, cfg.circuit.l_r, cfg.resonator_topology);
    const FosterModes ladder = decompose(line, 1);
    if (ladder.series_c &&
        !series_cap_negligible(*ladder.series_c, cfg.circuit.c_c,
                               cfg.series_c_drop_threshold)) {
      out.warnings.push_back(
          "foster series capacitance is not negligible against c_c; the ladder "
          "model drops it regardless");
    }
  }
  return out;
}

}  // namespace cqed
