#pragma once

// Exact diagonalization of the charge-island Hamiltonian
//   H = 4 E_c n^2 - E_J cos(delta)
// in the charge basis n in [-n_cut, n_cut] at zero offset charge, plus the
// weak-anharmonicity (Duffing) closed form it limits to.
//
// Zero offset charge makes charge parity (n -> -n) an exact symmetry, so the
// solve is done in the two parity sectors separately. That halves the work
// and, more importantly, gives a deterministic ordering of the degenerate
// pairs that appear at E_J = 0: within a degenerate pair the odd-parity state
// comes first, matching the E_J -> 0+ limit of the spectrum.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "cqed/errors.hpp"

namespace cqed {

struct CpbSpectrum {
  double e_c = 0.0;  // Hz
  double e_j = 0.0;  // Hz
  int n_cut = 0;
  std::vector<double> levels;      // Hz, ascending, levels[0] == 0
  Eigen::MatrixXd n_elements;      // <k|n|l>, real symmetric, k_levels x k_levels
  bool converged = true;           // doubling n_cut moves no level by > 1 kHz
  double max_doubling_shift = 0.0; // Hz
};

namespace detail {

struct CpbSolve {
  std::vector<double> levels;      // referenced to ground
  Eigen::MatrixXd n_elements;
};

// One parity-blocked solve at fixed n_cut. Even sector basis:
// {|0>, (|n>+|-n>)/sqrt2}, odd sector: {(|n>-|-n>)/sqrt2}, n = 1..n_cut.
inline CpbSolve solve_cpb(double e_c, double e_j, int n_cut, int k_levels) {
  const int ne = n_cut + 1;  // even sector dimension
  const int no = n_cut;      // odd sector dimension

  Eigen::MatrixXd he = Eigen::MatrixXd::Zero(ne, ne);
  for (int n = 0; n <= n_cut; ++n) he(n, n) = 4.0 * e_c * double(n) * double(n);
  if (ne > 1) {
    he(0, 1) = he(1, 0) = -e_j / std::numbers::sqrt2;
    for (int n = 1; n + 1 <= n_cut; ++n) he(n, n + 1) = he(n + 1, n) = -e_j / 2.0;
  }

  Eigen::MatrixXd ho = Eigen::MatrixXd::Zero(no, no);
  for (int n = 1; n <= n_cut; ++n) ho(n - 1, n - 1) = 4.0 * e_c * double(n) * double(n);
  for (int n = 1; n + 1 <= n_cut; ++n) ho(n - 1, n) = ho(n, n - 1) = -e_j / 2.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> se(he);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> so(ho);

  struct Entry {
    double value;
    int parity;  // 0 even, 1 odd
    int col;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(ne + no));
  for (int i = 0; i < ne; ++i) entries.push_back({se.eigenvalues()(i), 0, i});
  for (int i = 0; i < no; ++i) entries.push_back({so.eigenvalues()(i), 1, i});

  // Strictly ascending; on exact ties (the E_J = 0 pairs come out bit-equal
  // from the two diagonal sector matrices) the odd-parity state goes first.
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.value, b.parity, a.col) < std::tie(b.value, a.parity, b.col);
  });

  CpbSolve out;
  out.levels.resize(static_cast<std::size_t>(k_levels));
  const double ground = entries.front().value;
  for (int k = 0; k < k_levels; ++k) out.levels[static_cast<std::size_t>(k)] = entries[static_cast<std::size_t>(k)].value - ground;

  // Charge operator in the parity bases: n maps |0> to zero and swaps the
  // sectors, <e_n|n|o_m> = n delta_nm. Fix each eigenvector's sign by making
  // its largest-magnitude coefficient positive, for reproducible output.
  auto signed_col = [](const Eigen::MatrixXd& v, int col) {
    Eigen::VectorXd c = v.col(col);
    int imax = 0;
    c.cwiseAbs().maxCoeff(&imax);
    if (c(imax) < 0.0) c = -c;
    return c;
  };

  out.n_elements = Eigen::MatrixXd::Zero(k_levels, k_levels);
  for (int k = 0; k < k_levels; ++k) {
    for (int l = k + 1; l < k_levels; ++l) {
      const Entry& a = entries[static_cast<std::size_t>(k)];
      const Entry& b = entries[static_cast<std::size_t>(l)];
      if (a.parity == b.parity) continue;  // exact selection rule
      const Entry& ev = (a.parity == 0) ? a : b;
      const Entry& od = (a.parity == 0) ? b : a;
      const Eigen::VectorXd vev = signed_col(se.eigenvectors(), ev.col);
      const Eigen::VectorXd vod = signed_col(so.eigenvectors(), od.col);
      double sum = 0.0;
      for (int n = 1; n <= n_cut; ++n) sum += double(n) * vev(n) * vod(n - 1);
      out.n_elements(k, l) = sum;
      out.n_elements(l, k) = sum;
    }
  }
  return out;
}

}  // namespace detail

/// Lowest k_levels eigenfrequencies (referenced to the ground state) and the
/// charge matrix elements of the island Hamiltonian. Convergence in the
/// charge cutoff is checked by re-solving at twice n_cut; failure to converge
/// is flagged, not fatal.
inline CpbSpectrum diagonalize_cpb(double e_c, double e_j, int n_cut = 15,
                                   int k_levels = 6) {
  detail::require_positive(e_c, "cpb", "e_c");
  if (e_j < 0.0) throw domain_error("cpb", "e_j", "must be non-negative");
  if (n_cut < 1) throw domain_error("cpb", "n_cut", "must be >= 1");
  if (k_levels < 1) throw domain_error("cpb", "k_levels", "must be >= 1");
  if (k_levels > 2 * n_cut) {
    throw domain_error("cpb", "k_levels",
                       "needs k_levels <= 2*n_cut, got k_levels=" + std::to_string(k_levels) +
                           " with n_cut=" + std::to_string(n_cut));
  }

  detail::CpbSolve base = detail::solve_cpb(e_c, e_j, n_cut, k_levels);
  detail::CpbSolve check = detail::solve_cpb(e_c, e_j, 2 * n_cut, k_levels);

  CpbSpectrum out;
  out.e_c = e_c;
  out.e_j = e_j;
  out.n_cut = n_cut;
  out.levels = std::move(base.levels);
  out.n_elements = std::move(base.n_elements);
  double worst = 0.0;
  for (std::size_t k = 0; k < out.levels.size(); ++k) {
    worst = std::max(worst, std::fabs(out.levels[k] - check.levels[k]));
  }
  out.max_doubling_shift = worst;
  out.converged = worst <= 1e3;
  return out;
}

/// Duffing-oscillator levels eps_k = k*f_a - (E_c/2) k (k-1) with
/// f_a = sqrt(8 E_J E_c) - E_c. The anharmonicity eps_2 - 2 eps_1 is -E_c
/// exactly in this approximation.
inline std::vector<double> duffing_levels(double e_c, double e_j, int k_levels) {
  detail::require_positive(e_c, "cpb", "e_c");
  if (e_j < 0.0) throw domain_error("cpb", "e_j", "must be non-negative");
  if (k_levels < 1) throw domain_error("cpb", "k_levels", "must be >= 1");
  const double f_a = std::sqrt(8.0 * e_j * e_c) - e_c;
  std::vector<double> levels(static_cast<std::size_t>(k_levels));
  for (int k = 0; k < k_levels; ++k) {
    levels[static_cast<std::size_t>(k)] = k * f_a - 0.5 * e_c * k * (k - 1.0);
  }
  return levels;
}

/// Asymptotic ground-to-first charge matrix element (E_J / 32 E_c)^(1/4).
inline double charge_element_01_asymptotic(double e_c, double e_j) {
  detail::require_positive(e_c, "cpb", "e_c");
  detail::require_positive(e_j, "cpb", "e_j");
  return std::pow(e_j / (32.0 * e_c), 0.25);
}

}  // namespace cqed
