#pragma once

// Flux-sweep simulation of the transition spectrum, avoided-crossing
// extraction, dressed anharmonicity, and synthetic line-shape traces for
// exercising the fitting path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/rabi.hpp"

namespace cqed {

/// Sweep axis, either directly in units of phi0 or in raw sweep units
/// (coil current, field) with a linear map phi = (raw - offset) / period.
struct FluxAxis {
  std::vector<double> values;
  struct RawMap {
    double offset;
    double period;  // raw units per phi0
  };
  std::optional<RawMap> raw_map;

  double flux_at(std::size_t i) const {
    const double v = values[i];
    if (!raw_map) return v;
    if (!(raw_map->period > 0.0))
      throw domain_error("spectroscopy", "period", "must be strictly positive");
    return (v - raw_map->offset) / raw_map->period;
  }

  static FluxAxis linspace(double start, double stop, int n) {
    if (n < 2) throw domain_error("spectroscopy", "axis", "needs at least 2 points");
    FluxAxis a;
    a.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      a.values[static_cast<std::size_t>(i)] = start + (stop - start) * i / (n - 1.0);
    return a;
  }
};

/// Named transition branches versus flux. "lower"/"upper" are the two
/// polariton transitions from the ground state (sorted, so upper >= lower
/// pointwise), "ge" follows the qubit-like first transition and "ef" the
/// qubit-like first-to-second transition.
struct TransitionSpectrum {
  FluxAxis axis;
  std::map<std::string, std::vector<double>> branches;
  std::vector<std::string> point_errors;  // per-point failures, sweep continues
};

namespace detail {

struct BranchSample {
  double lower, upper, ge, ef;
};

// One flux point: polaritons are the two eigenstates carrying the most weight
// on span{|qubit=1, vac>, |0, one photon in mode 1>}, which stays well defined
// through the crossing where per-state labels are ambiguous.
inline BranchSample branch_sample(const ModelConfig& cfg, const ResolvedModel& r) {
  const DiagonalizedModel d = diagonalize_full(cfg, r);
  std::vector<int> vac(static_cast<std::size_t>(d.n_modes), 0);
  std::vector<int> one = vac;
  one[0] = 1;
  const Eigen::Index row_q = static_cast<Eigen::Index>(d.flat_index(1, vac));
  const Eigen::Index row_c = static_cast<Eigen::Index>(d.flat_index(0, one));

  int best = -1, second = -1;
  double bw = -1.0, sw = -1.0;
  for (Eigen::Index c = 0; c < d.eigenvectors.cols(); ++c) {
    const double w = d.eigenvectors(row_q, c) * d.eigenvectors(row_q, c) +
                     d.eigenvectors(row_c, c) * d.eigenvectors(row_c, c);
    if (w > bw) {
      second = best; sw = bw;
      best = static_cast<int>(c); bw = w;
    } else if (w > sw) {
      second = static_cast<int>(c); sw = w;
    }
  }
  const double t1 = d.eigenvalues(best);
  const double t2 = d.eigenvalues(second);

  BranchSample out;
  out.lower = std::min(t1, t2);
  out.upper = std::max(t1, t2);
  out.ge = d.eigenvalues(d.find_state(1, vac).first);
  const auto [i_f, w_f] = d.find_state(2, vac);
  out.ef = d.eigenvalues(i_f) - out.ge;
  return out;
}

}  // namespace detail

/// Diagonalize at every axis point and collect the named branches.
/// Per-point failures are recorded and the sweep continues; failed points
/// carry NaN in every branch.
inline TransitionSpectrum flux_sweep(const ModelConfig& cfg, const FluxAxis& axis) {
  cfg.validate();
  const ResolvedModel r = resolve(cfg);

  TransitionSpectrum out;
  out.axis = axis;
  auto& lower = out.branches["lower"];
  auto& upper = out.branches["upper"];
  auto& ge = out.branches["ge"];
  auto& ef = out.branches["ef"];
  const std::size_t n = axis.values.size();
  lower.resize(n);
  upper.resize(n);
  ge.resize(n);
  ef.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    ModelConfig point = cfg;
    point.circuit.flux = axis.flux_at(i);
    try {
      const detail::BranchSample s = detail::branch_sample(point, r);
      lower[i] = s.lower;
      upper[i] = s.upper;
      ge[i] = s.ge;
      ef[i] = s.ef;
    } catch (const std::exception& ex) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      lower[i] = upper[i] = ge[i] = ef[i] = nan;
      out.point_errors.push_back("point " + std::to_string(i) + ": " + ex.what());
    }
  }
  return out;
}

struct CrossingEstimate {
  double center;       // Hz, mean of the two branches at minimum separation
  double splitting;    // Hz, minimum of (upper - lower)
  double flux_at_min;  // phi0 units (interpolated)
};

/// Minimum branch separation, refined by a three-point parabola around the
/// discrete minimum; the branches themselves are interpolated the same way to
/// evaluate the center. Requires the minimum to be interior to the axis.
inline CrossingEstimate avoided_crossing(const TransitionSpectrum& spec) {
  const auto it_lo = spec.branches.find("lower");
  const auto it_up = spec.branches.find("upper");
  if (it_lo == spec.branches.end() || it_up == spec.branches.end())
    throw domain_error("spectroscopy", "branches", "needs lower and upper branches");
  const std::vector<double>& lo = it_lo->second;
  const std::vector<double>& up = it_up->second;
  const std::size_t n = lo.size();
  if (n < 3) throw domain_error("spectroscopy", "axis", "needs at least 3 points");

  std::size_t imin = 0;
  double smin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = up[i] - lo[i];
    if (std::isfinite(s) && s < smin) {
      smin = s;
      imin = i;
    }
  }
  if (!std::isfinite(smin))
    throw domain_error("spectroscopy", "branches", "no finite separation found");
  if (imin == 0 || imin + 1 == n)
    throw domain_error("spectroscopy", "axis",
                       "crossing not bracketed: separation minimum on the boundary");

  const double x0 = spec.axis.flux_at(imin - 1);
  const double x1 = spec.axis.flux_at(imin);
  const double x2 = spec.axis.flux_at(imin + 1);

  // Parabola vertex through three samples; falls back to the grid minimum
  // when the parabola is flat or concave (no interior minimum).
  auto vertex_x = [](double xa, double xb, double xc, double ya, double yb, double yc) {
    const double d0 = (ya - yb) / (xa - xb);
    const double d1 = (yb - yc) / (xb - xc);
    const double a = (d0 - d1) / (xa - xc);
    if (!(a > 0.0)) return xb;
    return 0.5 * (xa + xb - d0 / a);
  };
  auto interp = [](double xa, double xb, double xc, double ya, double yb, double yc,
                   double x) {
    // Lagrange through the three points.
    const double l0 = (x - xb) * (x - xc) / ((xa - xb) * (xa - xc));
    const double l1 = (x - xa) * (x - xc) / ((xb - xa) * (xb - xc));
    const double l2 = (x - xa) * (x - xb) / ((xc - xa) * (xc - xb));
    return ya * l0 + yb * l1 + yc * l2;
  };

  const double xv = vertex_x(x0, x1, x2, up[imin - 1] - lo[imin - 1],
                             up[imin] - lo[imin], up[imin + 1] - lo[imin + 1]);
  const double xl = std::min(x0, x2), xr = std::max(x0, x2);
  const double xm = std::min(std::max(xv, xl), xr);
  const double lo_m = interp(x0, x1, x2, lo[imin - 1], lo[imin], lo[imin + 1], xm);
  const double up_m = interp(x0, x1, x2, up[imin - 1], up[imin], up[imin + 1], xm);

  CrossingEstimate est;
  est.flux_at_min = xm;
  est.splitting = std::max(0.0, up_m - lo_m);
  est.center = 0.5 * (lo_m + up_m);
  return est;
}

/// Difference between the ge and ef transitions of the qubit-like states at
/// the given flux. Only meaningful in the dispersive regime: the qubit must
/// sit below the resonator and the three qubit-like states must be cleanly
/// identifiable (squared overlap with the bare state above 0.5).
inline double dressed_anharmonicity(const ModelConfig& cfg, double flux) {
  ModelConfig point = cfg;
  point.circuit.flux = flux;
  point.validate();
  const ResolvedModel r = resolve(point);
  const DiagonalizedModel d = diagonalize_full(point, r);

  std::vector<int> vac(static_cast<std::size_t>(d.n_modes), 0);
  const auto [i1, w1] = d.find_state(1, vac);
  const auto [i2, w2] = d.find_state(2, vac);
  if (w1 < 0.5 || w2 < 0.5) {
    throw domain_error("spectroscopy", "flux",
                       "not in dispersive regime: qubit-like states are strongly mixed "
                       "(overlaps " + std::to_string(w1) + ", " + std::to_string(w2) + ")");
  }
  const double ge = d.eigenvalues(i1);
  if (ge >= r.f_r) {
    throw domain_error("spectroscopy", "flux",
                       "not in dispersive regime: qubit transition above the resonator");
  }
  const double ef = d.eigenvalues(i2) - ge;
  return ge - ef;
}

/// One simulated absorption trace per flux point: a sum of Lorentzians of the
/// given full width at half maximum centered on the branch frequencies, plus
/// seeded Gaussian amplitude noise, clamped to [0, 1].
struct LineShapeTrace {
  std::vector<double> frequencies;  // Hz
  std::vector<double> amplitudes;   // [0, 1]
  double width = 0.0;               // Hz (FWHM)
};

struct LineShapeOptions {
  int n_points = 1201;
  double noise_sigma = 0.0;   // amplitude units
  double span_margin = 10.0;  // widths of margin around the branch range
};

inline std::vector<LineShapeTrace> synth_lineshape(const TransitionSpectrum& spec,
                                                   double width, std::uint64_t seed,
                                                   const LineShapeOptions& opt = {}) {
  detail::require_positive(width, "spectroscopy", "width");
  if (opt.n_points < 2)
    throw domain_error("spectroscopy", "n_points", "needs at least 2 points");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<LineShapeTrace> traces;
  traces.reserve(spec.axis.values.size());
  for (std::size_t i = 0; i < spec.axis.values.size(); ++i) {
    std::vector<double> centers;
    for (const auto& [name, values] : spec.branches) {
      if (std::isfinite(values[i])) centers.push_back(values[i]);
    }
    LineShapeTrace tr;
    tr.width = width;
    if (centers.empty()) {
      traces.push_back(std::move(tr));
      continue;
    }
    const double fmin = *std::min_element(centers.begin(), centers.end()) -
                        opt.span_margin * width;
    const double fmax = *std::max_element(centers.begin(), centers.end()) +
                        opt.span_margin * width;
    tr.frequencies.resize(static_cast<std::size_t>(opt.n_points));
    tr.amplitudes.resize(static_cast<std::size_t>(opt.n_points));
    const double hw = 0.5 * width;
    for (int j = 0; j < opt.n_points; ++j) {
      const double f = fmin + (fmax - fmin) * j / (opt.n_points - 1.0);
      double a = 0.0;
      for (double c : centers) a += hw * hw / ((f - c) * (f - c) + hw * hw);
      if (opt.noise_sigma > 0.0) a += opt.noise_sigma * noise(rng);
      tr.frequencies[static_cast<std::size_t>(j)] = f;
      tr.amplitudes[static_cast<std::size_t>(j)] = std::min(1.0, std::max(0.0, a));
    }
    traces.push_back(std::move(tr));
  }
  return traces;
}

}  // namespace cqed
