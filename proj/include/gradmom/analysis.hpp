#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gradmom/dvm.hpp"
#include "gradmom/solver.hpp"

namespace gradmom {

/// L2(Omega x R) distance between two moment fields on the same mesh with
/// M_approx <= M_ref: shared degrees compare coefficients, reference-only
/// degrees contribute their full norm (velocity-space Parseval).
double l2_error(const MomentField& ref, const MomentField& approx);

/// Keep index m iff the series value is above the floating-point floor and
/// the two resolutions agree to the given relative tolerance. Indices
/// beyond the coarse series are dropped.
std::vector<char> filter_artefacts(const Eigen::VectorXd& fine, const Eigen::VectorXd& coarse,
                                   double rel_tol = 0.03, double floor = 1e-13);

/// Least-squares slope of (log m, log value) over the masked points.
/// Throws std::invalid_argument on fewer than two usable points or a
/// degenerate abscissa.
double fit_slope(const std::vector<int>& ms, const Eigen::VectorXd& values,
                 const std::vector<char>& mask);

/// Hermite-Sobolev index from a positive decay rate: k = s - 1/2.
double sobolev_index(double decay_rate);

/// Sharp predicted convergence rate min{k, k_t, k_x - 1/2}.
double predicted_rate(double k, double k_t, double k_x);

/// Baseline rate min{k - 1/2, k_t - 1/2, k_x_even - 1, k_x_odd - 1/2}.
double predicted_rate_baseline(double k, double k_t, double k_x_even, double k_x_odd);

/// Observed rate: negative fitted slope of (log M, log E_M). Needs >= 3
/// points.
double observed_rate(const std::vector<std::pair<int, double>>& errors);

/// Moment-norm decay data of a reference trajectory (one quantity kind).
struct DecaySeries {
  std::string kind;         ///< "N", "N_t" or "N_x"
  Eigen::VectorXd values;   ///< indexed by moment order m
  std::vector<char> mask;   ///< artefact filter result
};

/// Per-parity index fit.
struct IndexFit {
  double decay_rate = 0.0;
  double k = 0.0;
  int points = 0;
  int m_min = 0;
  int m_max = 0;
};

struct RateReport {
  IndexFit k_even, k_odd;      ///< from N_m
  IndexFit kt_even, kt_odd;    ///< from N_m^t
  IndexFit kx_even, kx_odd;    ///< from N_m^x
  double omega_pre_even = 0.0;
  double omega_pre_odd = 0.0;
  double omega_pre = 0.0;      ///< min over parities (the binding prediction)
  double omega_pre_baseline = 0.0;
  double omega_obs = 0.0;
  double delta_omega = 0.0;
};

struct StudyRow {
  int M = 0;
  double error = 0.0;        ///< E_M(T)
  double q_integral = 0.0;   ///< int_0^T -<e_M, Q e_M> dt
  double bound_rhs = 0.0;    ///< assembled error-bound right-hand side
  double projection_error = 0.0;
  double theta = 0.0;
  double norm_A = 0.0;
  bool bound_holds = false;
};

struct StudyConfig {
  SolverConfig base;           ///< M is ignored; everything else shared
  int M_ref = 80;
  std::vector<int> M_sweep = {5, 10, 15, 20, 25, 30, 35, 40};
  bool with_dvm = true;
  DVMConfig dvm;
  int threads = 1;
};

struct StudyResult {
  StudyConfig config;

  DecaySeries N, N_t, N_x;             ///< at M_ref (mask vs M_ref - 1)
  Eigen::VectorXd N_lo, N_t_lo, N_x_lo;  ///< at M_ref - 1

  RateReport report;
  std::vector<StudyRow> rows;

  /// DVM-reference variant (same sweep, reference from the velocity grid).
  std::optional<double> omega_obs_dvm;
  std::vector<std::pair<int, double>> errors_dvm;
  double lambda0_dvm_rel_diff = 0.0;   ///< at the largest swept M

  double q_decay_rate = 0.0;           ///< fitted decay of q_integral vs M
};

/// Moment-decay series of a trajectory: N_m (values), N_m^t (via the
/// semi-discrete right-hand side) and N_m^x (via the broken derivative),
/// maxima over the stored snapshots. Masks are left empty.
struct DecayTriple {
  DecaySeries N, N_t, N_x;
};
DecayTriple compute_decay_series(const MomentSolver1D& solver, const Trajectory& traj);

/// Time series of the Q-seminorm of the error between a reference
/// trajectory and an approximation trajectory on shared snapshot times,
/// plus its trapezoidal time integral.
std::pair<std::vector<double>, double> q_seminorm_history(const Trajectory& ref,
                                                          const Trajectory& approx, double Kn);

/// Full convergence study: reference runs at M_ref and M_ref - 1, decay
/// series and index fits, the M sweep with errors, Q-seminorm integrals and
/// error-bound checks, and optionally the DVM-reference repetition.
StudyResult run_convergence_study(const StudyConfig& config);

}  // namespace gradmom
