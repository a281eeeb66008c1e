#pragma once

// Least-squares extraction of Hamiltonian parameters (E_c, E_J,max, f_r, g,
// flux offset/period) from peak-position data against the exact model, and
// the closed-form inversion that turns (f_r, g) plus the known qubit-side
// capacitances back into resonator circuit elements.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/errors.hpp"
#include "cqed/simplex.hpp"
#include "cqed/spectroscopy.hpp"

namespace cqed {

struct PeakPoint {
  double sweep_value = 0.0;  // raw sweep units (or phi0 units when period = 1)
  double frequency = 0.0;    // Hz
  std::string branch;        // optional: lower | upper | ge | ef
  double weight = 1.0;
};

struct PeakData {
  std::vector<PeakPoint> points;

  void validate() const {
    if (points.size() < 6)
      throw domain_error("fitting", "points", "need at least 6 peak positions");
    for (const PeakPoint& p : points) {
      if (!(p.frequency > 0.0))
        throw domain_error("fitting", "frequency", "must be strictly positive");
      if (!(p.weight > 0.0))
        throw domain_error("fitting", "weight", "must be strictly positive");
    }
  }

  /// CSV schema: header row required, columns sweep_value, frequency_hz,
  /// then optional branch and weight. '.' decimal separator, UTF-8.
  static PeakData from_csv(std::istream& in);
  static PeakData from_csv_file(const std::string& path);
  void to_csv(std::ostream& out) const;
};

inline PeakData PeakData::from_csv(std::istream& in) {
  PeakData data;
  std::string line;
  bool header_seen = false;
  int sweep_col = -1, freq_col = -1, branch_col = -1, weight_col = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
        if (cells[static_cast<std::size_t>(i)] == "sweep_value") sweep_col = i;
        else if (cells[static_cast<std::size_t>(i)] == "frequency_hz") freq_col = i;
        else if (cells[static_cast<std::size_t>(i)] == "branch") branch_col = i;
        else if (cells[static_cast<std::size_t>(i)] == "weight") weight_col = i;
      }
      if (sweep_col < 0 || freq_col < 0)
        throw domain_error("fitting", "csv",
                           "header row must name sweep_value and frequency_hz columns");
      header_seen = true;
      continue;
    }
    if (static_cast<int>(cells.size()) <= std::max(sweep_col, freq_col))
      throw domain_error("fitting", "csv", "row has too few columns: " + line);
    PeakPoint p;
    try {
      p.sweep_value = std::stod(cells[static_cast<std::size_t>(sweep_col)]);
      p.frequency = std::stod(cells[static_cast<std::size_t>(freq_col)]);
      if (weight_col >= 0 && weight_col < static_cast<int>(cells.size()) &&
          !cells[static_cast<std::size_t>(weight_col)].empty())
        p.weight = std::stod(cells[static_cast<std::size_t>(weight_col)]);
    } catch (const std::exception&) {
      throw domain_error("fitting", "csv", "unparsable numeric cell in row: " + line);
    }
    if (branch_col >= 0 && branch_col < static_cast<int>(cells.size()))
      p.branch = cells[static_cast<std::size_t>(branch_col)];
    data.points.push_back(std::move(p));
  }
  if (!header_seen) throw domain_error("fitting", "csv", "missing header row");
  return data;
}

inline PeakData PeakData::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("fitting", "csv", "cannot open " + path);
  return from_csv(in);
}

inline void PeakData::to_csv(std::ostream& out) const {
  out << "sweep_value,frequency_hz,branch,weight\n";
  char buf[96];
  for (const PeakPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%s,%.12g\n", p.sweep_value, p.frequency,
                  p.branch.c_str(), p.weight);
    out << buf;
  }
}

enum class FitParam { e_c, e_j_max, f_r, g, flux_offset, flux_period };

inline const char* to_string(FitParam p) {
  switch (p) {
    case FitParam::e_c: return "e_c";
    case FitParam::e_j_max: return "e_j_max";
    case FitParam::f_r: return "f_r";
    case FitParam::g: return "g";
    case FitParam::flux_offset: return "flux_offset";
    case FitParam::flux_period: return "flux_period";
  }
  return "?";
}

struct FitValues {
  double e_c = 0.0;      // Hz
  double e_j_max = 0.0;  // Hz
  double f_r = 0.0;      // Hz
  double g = 0.0;        // Hz at resonance
  double flux_offset = 0.0;  // raw units
  double flux_period = 1.0;  // raw units per phi0

  double get(FitParam p) const {
    switch (p) {
      case FitParam::e_c: return e_c;
      case FitParam::e_j_max: return e_j_max;
      case FitParam::f_r: return f_r;
      case FitParam::g: return g;
      case FitParam::flux_offset: return flux_offset;
      case FitParam::flux_period: return flux_period;
    }
    return 0.0;
  }
  void set(FitParam p, double v) {
    switch (p) {
      case FitParam::e_c: e_c = v; break;
      case FitParam::e_j_max: e_j_max = v; break;
      case FitParam::f_r: f_r = v; break;
      case FitParam::g: g = v; break;
      case FitParam::flux_offset: flux_offset = v; break;
      case FitParam::flux_period: flux_period = v; break;
    }
  }
};

struct FitConfig {
  std::vector<FitParam> free_params{FitParam::e_c, FitParam::e_j_max, FitParam::f_r,
                                    FitParam::g};
  FitValues initial;
  FitValues lower;
  FitValues upper;
  double tolerance = 1e-10;  // relative objective spread at convergence
  int max_iterations = 1200;
  int restarts = 2;
  std::uint64_t seed = 1;
  std::optional<double> known_c_j;  // enables circuit back-derivation (F)
  std::optional<double> known_c_c;  // (F)
  std::optional<double> f_a_for_inversion;  // defaults to fitted f_r

  void validate() const {
    if (free_params.empty())
      throw domain_error("fitting", "free_params", "must name at least one parameter");
    for (FitParam p : free_params) {
      const double lo = lower.get(p), hi = upper.get(p), x0 = initial.get(p);
      if (!(lo < hi))
        throw domain_error("fitting", to_string(p), "bounds must satisfy lo < hi");
      if (x0 < lo || x0 > hi)
        throw domain_error("fitting", to_string(p), "initial value outside bounds");
    }
  }
};

struct CircuitElements {
  double c_r;  // F
  double l_r;  // H
  double z_r;  // ohm
  double z_0;  // ohm
};

/// Invert the coupling ratio form for C_r given (f_r, g) and the known
/// qubit-side capacitances, then walk the chain to (L_r, Z_r, Z_0):
///   (1 + C_r/C_c) = f_a f_r / (4 g^2 (1 + C_J/C_c))
///   L_r = 1 / ((2 pi f_r)^2 C_r,eff),  Z_r = sqrt(L_r/C_r),  Z_0 = pi Z_r / 2.
inline CircuitElements extract_circuit(double f_r, double g, double c_j, double c_c,
                                       double f_a) {
  detail::require_positive(f_r, "fitting", "f_r");
  detail::require_positive(g, "fitting", "g");
  detail::require_positive(c_j, "fitting", "c_j");
  detail::require_positive(c_c, "fitting", "c_c");
  detail::require_positive(f_a, "fitting", "f_a");
  if (!(g < 0.5 * std::sqrt(f_a * f_r)))
    throw domain_error("fitting", "g", "at or above the coupling bound sqrt(f_a f_r)/2");

  const double ratio = f_a * f_r / (4.0 * g * g * (1.0 + c_j / c_c));
  if (!(ratio > 1.0))
    throw domain_error("fitting", "g",
                       "coupling too large for the stated capacitances: C_r would be "
                       "non-positive");
  CircuitElements out;
  out.c_r = c_c * (ratio - 1.0);
  const double c_r_eff = effective_capacitances(c_j, c_c, out.c_r).c_r_eff;
  const double w_r = 2.0 * std::numbers::pi * f_r;
  out.l_r = 1.0 / (w_r * w_r * c_r_eff);
  const ImpedanceChain chain = impedance_chain(out.c_r, out.l_r);
  out.z_r = chain.z_r;
  out.z_0 = chain.z_0;
  return out;
}

struct FitResult {
  FitValues params;
  double residual_rms = 0.0;  // Hz
  std::vector<double> per_point_residuals;  // Hz, signed (model - data)
  std::optional<CircuitElements> derived_circuit;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  bool g_weakly_constrained = false;
  std::vector<std::string> warnings;
};

namespace detail {

// Model branches at one flux for the current trial parameters.
inline BranchSample fit_branches(const ModelConfig& base, const ResolvedModel& r,
                                 double flux) {
  ModelConfig point = base;
  point.circuit.flux = flux;
  return branch_sample(point, r);
}

inline double branch_value(const BranchSample& s, const std::string& name) {
  if (name == "lower") return s.lower;
  if (name == "upper") return s.upper;
  if (name == "ge") return s.ge;
  if (name == "ef") return s.ef;
  throw domain_error("fitting", "branch", "unknown branch name '" + name + "'");
}

// CircuitParams consistent with a trial (e_c, e_j_max, f_r, g) set: the caps
// are placeholders, every physical quantity is overridden.
inline ModelConfig model_for(const ModelConfig& base, const FitValues& v) {
  ModelConfig cfg = base;
  cfg.circuit.e_j_max = v.e_j_max;
  cfg.overrides.e_c = v.e_c;
  cfg.overrides.f_r = v.f_r;
  cfg.overrides.g_res = v.g;
  return cfg;
}

}  // namespace detail

/// Weighted least squares of model transition branches against peak data.
/// Branch assignment: a datum with a branch hint is compared against that
/// branch; an unhinted datum is compared against the nearest branch. Unhinted
/// points within twice the initial-model splitting of the initial-model
/// crossing center are rejected up front, because nearest-branch assignment
/// is unstable exactly there.
inline FitResult fit(const PeakData& data, const FitConfig& cfg, const ModelConfig& model) {
  data.validate();
  cfg.validate();
  if (model.tier == ModelTier::duffing_single)
    throw domain_error("fitting", "tier", "fit requires exact_single or better");

  // Crossing guard from the initial model.
  {
    const ModelConfig init = detail::model_for(model, cfg.initial);
    const ResolvedModel r0 = resolve(init);
    const double center0 = r0.f_r;
    const double split0 = 2.0 * r0.g_ref;
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      const PeakPoint& p = data.points[i];
      if (p.branch.empty() && std::fabs(p.frequency - center0) < 2.0 * split0) {
        throw domain_error("fitting", "branch",
                           "point " + std::to_string(i) + " at " +
                               std::to_string(p.frequency) +
                               " Hz lies within 2x splitting of the crossing; give it a "
                               "branch hint");
      }
    }
  }

  // Degenerate-data warning: all qubit-side points on one side of the crossing
  // leave g weakly constrained.
  bool has_below = false, has_above = false;
  for (const PeakPoint& p : data.points) {
    const double phi0_units =
        (p.sweep_value - cfg.initial.flux_offset) / cfg.initial.flux_period;
    const double e_j = josephson_energy(cfg.initial.e_j_max, phi0_units).e_j;
    const double f_a = std::sqrt(8.0 * e_j * cfg.initial.e_c) - cfg.initial.e_c;
    (f_a < cfg.initial.f_r ? has_below : has_above) = true;
  }

  const std::vector<FitParam>& free = cfg.free_params;
  std::vector<double> x0, lo, hi;
  for (FitParam p : free) {
    x0.push_back(cfg.initial.get(p));
    lo.push_back(cfg.lower.get(p));
    hi.push_back(cfg.upper.get(p));
  }

  auto values_of = [&](const std::vector<double>& x) {
    FitValues v = cfg.initial;
    for (std::size_t i = 0; i < free.size(); ++i) v.set(free[i], x[i]);
    return v;
  };

  // Objective: weighted mean squared residual in MHz^2 for friendly scaling.
  auto objective = [&](const std::vector<double>& x) -> double {
    const FitValues v = values_of(x);
    try {
      const ModelConfig trial = detail::model_for(model, v);
      const ResolvedModel r = resolve(trial);
      double acc = 0.0, wsum = 0.0;
      for (const PeakPoint& p : data.points) {
        const double flux = (p.sweep_value - v.flux_offset) / v.flux_period;
        const detail::BranchSample s = detail::fit_branches(trial, r, flux);
        double m;
        if (!p.branch.empty()) {
          m = detail::branch_value(s, p.branch);
        } else {
          m = s.lower;
          for (const double cand : {s.upper, s.ge, s.ef}) {
            if (std::fabs(cand - p.frequency) < std::fabs(m - p.frequency)) m = cand;
          }
        }
        const double res_mhz = (m - p.frequency) / 1e6;
        acc += p.weight * res_mhz * res_mhz;
        wsum += p.weight;
      }
      return acc / wsum;
    } catch (const std::exception&) {
      return 1e30;  // infeasible trial point
    }
  };

  SimplexOptions sopt;
  sopt.max_iterations = cfg.max_iterations;
  sopt.f_tol_rel = cfg.tolerance;
  sopt.f_tol = 1e-16;
  sopt.restarts = cfg.restarts;
  sopt.seed = cfg.seed;
  sopt.lower = lo;
  sopt.upper = hi;
  const SimplexResult sr = nelder_mead(objective, x0, sopt);

  FitResult out;
  out.params = values_of(sr.x);
  out.converged = sr.converged;
  out.iterations = sr.iterations;
  out.evaluations = sr.evaluations;
  if (!sr.converged)
    out.warnings.push_back("optimizer hit the iteration cap; best-so-far returned");
  if (!(has_below && has_above)) {
    out.g_weakly_constrained = true;
    out.warnings.push_back("all points on one side of the crossing: g weakly constrained");
  }

  // Final residuals at the solution.
  {
    const ModelConfig fitted = detail::model_for(model, out.params);
    const ResolvedModel r = resolve(fitted);
    double acc = 0.0, wsum = 0.0;
    out.per_point_residuals.reserve(data.points.size());
    for (const PeakPoint& p : data.points) {
      const double flux = (p.sweep_value - out.params.flux_offset) / out.params.flux_period;
      const detail::BranchSample s = detail::fit_branches(fitted, r, flux);
      double m;
      if (!p.branch.empty()) {
        m = detail::branch_value(s, p.branch);
      } else {
        m = s.lower;
        for (const double cand : {s.upper, s.ge, s.ef}) {
          if (std::fabs(cand - p.frequency) < std::fabs(m - p.frequency)) m = cand;
        }
      }
      out.per_point_residuals.push_back(m - p.frequency);
      acc += p.weight * (m - p.frequency) * (m - p.frequency);
      wsum += p.weight;
    }
    out.residual_rms = std::sqrt(acc / wsum);
  }

  if (cfg.known_c_j && cfg.known_c_c) {
    const double f_a = cfg.f_a_for_inversion.value_or(out.params.f_r);
    out.derived_circuit =
        extract_circuit(out.params.f_r, out.params.g, *cfg.known_c_j, *cfg.known_c_c, f_a);
  }
  return out;
}

}  // namespace cqed
