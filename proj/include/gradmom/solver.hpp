#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gradmom/kinetic.hpp"
#include "gradmom/mesh.hpp"

namespace gradmom {

/// Boundary data for one side of the domain. Inflow is described by the
/// Hermite coefficients of the incoming distribution (constant in time);
/// vacuum is the all-zero special case.
struct BoundarySpec {
  enum class Type { Vacuum, Inflow };
  Type type = Type::Vacuum;
  Eigen::VectorXd inflow_coeffs;  ///< used when type == Inflow
};

/// Initial data: either a density profile rho_I(x) carried by the degree-0
/// moment alone, or constant-in-x Hermite coefficients.
struct InitialSpec {
  enum class Type { GaussianDensity, Coefficients };
  Type type = Type::GaussianDensity;
  double center = 0.5;
  double sharpness = 100.0;
  Eigen::VectorXd coeffs;  ///< used when type == Coefficients
};

struct SolverConfig {
  int M = 10;
  double Kn = 0.1;
  Mesh1D mesh{0.0, 1.0, 200};
  double cfl = 0.5;           ///< in (0, 1]
  double t_final = 0.3;
  double snapshot_every = 0.0075;  ///< snapshot time cadence
  BoundarySpec left, right;
  InitialSpec initial;

  void validate() const;
};

/// Thrown when the time loop detects non-finite data; snapshots emitted
/// before the abort remain valid.
struct NumericalAbort : std::runtime_error {
  NumericalAbort(const std::string& what, double time) : std::runtime_error(what), t(time) {}
  double t = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<MomentField> snapshots;
  std::vector<double> norms;          ///< L2(Omega x R) norm per snapshot
  int steps_per_segment = 0;
  double dt = 0.0;
};

/// Symmetric tridiagonal flux Jacobian of the 1D moment system,
/// J_{k,k+1} = sqrt(k+1); its eigenvalues are the Gauss-Hermite nodes of
/// order M+1.
Eigen::MatrixXd flux_jacobian(int M);

/// Characteristic upwind flux F = 1/2 J (aL + aR) - 1/2 |J| (aR - aL).
Eigen::VectorXd upwind_flux(const Eigen::VectorXd& a_left, const Eigen::VectorXd& a_right,
                            const Eigen::MatrixXd& J, const Eigen::MatrixXd& absJ);

/// Advective time-step unit dt = cfl * h / lambda_max(J_M).
double cfl_dt(const Mesh1D& mesh, int M, double cfl);

/// 1D moment-system solver: DG-P1 in space with characteristic upwind
/// interface fluxes, stable boundary conditions imposed weakly through a
/// ghost state, BGK relaxation source, classical RK4 in time.
class MomentSolver1D {
 public:
  explicit MomentSolver1D(const SolverConfig& config);

  const SolverConfig& config() const { return cfg_; }
  const Eigen::MatrixXd& jacobian() const { return J_; }
  const Eigen::MatrixXd& abs_jacobian() const { return absJ_; }
  double max_wave_speed() const { return lambda_max_; }

  /// Time step used by run(): the advective unit scaled by the DG-P1
  /// factor 1/(2p+1) = 1/3, which keeps RK4 inside its stability region
  /// for every cfl <= 1, then rounded down so snapshot times are hit
  /// exactly.
  double stable_dt() const;

  MomentField initial_field() const;

  /// Ghost state carrying the boundary condition: even components of the
  /// trace are kept, odd components are replaced by R A^(M,M) mu_e + g.
  /// The left boundary applies the parity reflection S = diag((-1)^k)
  /// before and after the right-boundary construction.
  Eigen::VectorXd boundary_state_right(const Eigen::VectorXd& trace) const;
  Eigen::VectorXd boundary_state_left(const Eigen::VectorXd& trace) const;

  /// Semi-discrete DG-P1 right-hand side.
  void rhs(const MomentField& f, MomentField& out) const;
  MomentField rhs(const MomentField& f) const;

  void rk4_step(MomentField& f, double dt) const;

  /// Integrate to t_final, invoking the callback at t = 0 and after each
  /// snapshot segment. Checks for non-finite data every 100 steps and
  /// throws NumericalAbort (snapshots already delivered stay valid).
  Trajectory run(const std::function<void(int, double, const MomentField&)>& on_snapshot = {}) const;

 private:
  SolverConfig cfg_;
  Eigen::MatrixXd J_, absJ_;
  Eigen::MatrixXd bc_map_;            ///< R A^(M,M), even -> odd
  Eigen::VectorXd g_right_, g_left_;  ///< inflow vectors (odd view)
  Eigen::VectorXd reflect_;           ///< diag((-1)^k)
  double lambda_max_ = 0.0;
  std::vector<int> odd_, even_;

  // scratch for rhs (mutable: rhs is logically const)
  mutable Eigen::MatrixXd flux_, jumps_, sums_;
};

}  // namespace gradmom
