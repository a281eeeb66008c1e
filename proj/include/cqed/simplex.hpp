#pragma once

// Nelder-Mead downhill simplex with box constraints and deterministic,
// seeded restarts. The objectives it serves here involve dense eigenvalue
// solves, so no gradients are available.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "cqed/errors.hpp"

namespace cqed {

struct SimplexOptions {
  int max_iterations = 2000;     // per start
  double f_tol = 1e-12;          // absolute spread of simplex values
  double f_tol_rel = 1e-10;      // relative spread
  double x_tol_rel = 1e-9;       // relative simplex extent
  double initial_step_rel = 0.05;  // of the box width (or of |x| without bounds)
  int restarts = 0;              // extra seeded starts around the running best
  std::uint64_t seed = 1;
  std::vector<double> lower;     // optional box; empty = unconstrained
  std::vector<double> upper;
};

struct SimplexResult {
  std::vector<double> x;
  double fmin = 0.0;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
};

namespace detail {

inline void clamp_into(std::vector<double>& x, const std::vector<double>& lo,
                       const std::vector<double>& hi) {
  if (lo.empty()) return;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

}  // namespace detail

inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0, const SimplexOptions& opt) {
  const std::size_t n = x0.size();
  if (n == 0) throw domain_error("fitting", "free_params", "nothing to optimize");
  if (!opt.lower.empty() && (opt.lower.size() != n || opt.upper.size() != n))
    throw domain_error("fitting", "bounds", "bounds must match the parameter count");

  auto step_of = [&](std::size_t i) {
    if (!opt.lower.empty()) return opt.initial_step_rel * (opt.upper[i] - opt.lower[i]);
    const double s = std::fabs(x0[i]);
    return opt.initial_step_rel * (s > 0.0 ? s : 1.0);
  };

  SimplexResult best;
  best.fmin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  std::vector<double> start = x0;
  detail::clamp_into(start, opt.lower, opt.upper);

  int total_evals = 0;
  for (int attempt = 0; attempt <= opt.restarts; ++attempt) {
    // Simplex: start point plus one step along each axis.
    std::vector<std::vector<double>> pts(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i + 1][i] += step_of(i);
      detail::clamp_into(pts[i + 1], opt.lower, opt.upper);
      // A clamped vertex that collapsed onto the start is pushed the other way.
      if (pts[i + 1][i] == start[i]) pts[i + 1][i] = start[i] - step_of(i);
      detail::clamp_into(pts[i + 1], opt.lower, opt.upper);
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) { fv[i] = f(pts[i]); ++total_evals; }

    bool converged = false;
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
      // Order: best first, worst last.
      std::vector<std::size_t> order(n + 1);
      for (std::size_t i = 0; i <= n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
      const std::size_t ib = order[0], iw = order[n], is = order[n - 1];

      const double spread = std::fabs(fv[iw] - fv[ib]);
      const double scale = std::max(std::fabs(fv[ib]), std::fabs(fv[iw]));
      double extent = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double lo = pts[0][i], hi = pts[0][i];
        for (std::size_t v = 1; v <= n; ++v) {
          lo = std::min(lo, pts[v][i]);
          hi = std::max(hi, pts[v][i]);
        }
        const double w = std::max(std::fabs(lo), std::fabs(hi));
        extent = std::max(extent, (hi - lo) / (w > 0.0 ? w : 1.0));
      }
      if (spread <= opt.f_tol + opt.f_tol_rel * scale && extent <= opt.x_tol_rel) {
        converged = true;
        break;
      }

      std::vector<double> centroid(n, 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == iw) continue;
        for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[v][i] / double(n);
      }
      auto move = [&](double coeff) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i)
          x[i] = centroid[i] + coeff * (pts[iw][i] - centroid[i]);
        detail::clamp_into(x, opt.lower, opt.upper);
        return x;
      };

      const std::vector<double> xr = move(-1.0);  // reflection
      const double fr = f(xr);
      ++total_evals;
      if (fr < fv[ib]) {
        const std::vector<double> xe = move(-2.0);  // expansion
        const double fe = f(xe);
        ++total_evals;
        if (fe < fr) { pts[iw] = xe; fv[iw] = fe; }
        else { pts[iw] = xr; fv[iw] = fr; }
      } else if (fr < fv[is]) {
        pts[iw] = xr; fv[iw] = fr;
      } else {
        const std::vector<double> xc = move(fr < fv[iw] ? -0.5 : 0.5);  // contraction
        const double fc = f(xc);
        ++total_evals;
        if (fc < std::min(fr, fv[iw])) {
          pts[iw] = xc; fv[iw] = fc;
        } else {
          // Shrink toward the best vertex.
          for (std::size_t v = 0; v <= n; ++v) {
            if (v == ib) continue;
            for (std::size_t i = 0; i < n; ++i)
              pts[v][i] = pts[ib][i] + 0.5 * (pts[v][i] - pts[ib][i]);
            fv[v] = f(pts[v]);
            ++total_evals;
          }
        }
      }
    }

    std::size_t ib = 0;
    for (std::size_t i = 1; i <= n; ++i)
      if (fv[i] < fv[ib]) ib = i;
    if (fv[ib] < best.fmin) {
      best.fmin = fv[ib];
      best.x = pts[ib];
      best.converged = converged;
      best.iterations = iter;
    }

    // Next start: perturb the running best inside the box.
    start = best.x;
    for (std::size_t i = 0; i < n; ++i) start[i] += 0.5 * step_of(i) * uni(rng);
    detail::clamp_into(start, opt.lower, opt.upper);
  }
  best.evaluations = total_evals;
  return best;
}

}  // namespace cqed
