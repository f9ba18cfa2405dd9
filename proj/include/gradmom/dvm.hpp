#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "gradmom/mesh.hpp"
#include "gradmom/solver.hpp"

namespace gradmom {

/// Velocity grid for the discrete velocity reference solver: symmetric
/// midpoint nodes on [-v_max, v_max], so an even count never places a node
/// at the stationary characteristic xi = 0.
struct DVMConfig {
  int n_velocities = 64;
  double v_max = 8.0;

  void validate() const;
};

/// DG-P1 coefficients of the velocity-sampled distribution; same layout as
/// MomentField with rows indexed by velocity node instead of degree.
struct DvmField {
  Mesh1D mesh;
  Eigen::MatrixXd mean;   ///< n_velocities x n_elements
  Eigen::MatrixXd slope;
};

struct DvmTrajectory {
  std::vector<double> times;
  std::vector<DvmField> snapshots;
  int steps_per_segment = 0;
  double dt = 0.0;
};

/// Discrete velocity solver for the same linearised BGK problem: per
/// velocity, scalar first-order upwinding on the shared DG-P1 mesh; the
/// collision term projects onto discretely orthonormalized collision
/// invariants so a sampled equilibrium is an exact fixed point of the
/// relaxation. Kn = +inf disables collisions (free transport).
class DvmSolver {
 public:
  DvmSolver(const SolverConfig& config, const DVMConfig& dvm);

  const Eigen::VectorXd& nodes() const { return xi_; }
  const Eigen::VectorXd& weights() const { return w_; }

  /// psi_m(xi_j) sqrt(f0(xi_j)) for m = 0..Mmax: collocation matrix used
  /// both for moment extraction and for evaluating moment solutions on the
  /// velocity grid.
  Eigen::MatrixXd hermite_collocation(int Mmax) const;

  /// Moments of a DVM field by quadrature over the velocity grid.
  MomentField extract_moments(const DvmField& f, int Mmax) const;

  DvmField initial_field() const;
  void rhs(const DvmField& f, DvmField& out) const;
  void rk4_step(DvmField& f, double dt) const;
  DvmTrajectory run(const std::function<void(int, double, const DvmField&)>& on_snapshot = {}) const;

  double stable_dt() const;

 private:
  SolverConfig cfg_;
  DVMConfig dvm_;
  Eigen::VectorXd xi_, w_;
  Eigen::MatrixXd invariants_;  ///< 3 x n_velocities, orthonormal in the weighted product
  Eigen::VectorXd inflow_left_, inflow_right_;  ///< sampled incoming data
  mutable Eigen::MatrixXd flux_;
};

}  // namespace gradmom
