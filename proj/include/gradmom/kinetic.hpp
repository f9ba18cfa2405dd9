#pragma once

#include <Eigen/Core>

#include "gradmom/hermite.hpp"
#include "gradmom/matrices.hpp"

namespace gradmom {

/// Coefficient vector of a velocity-space function in the orthonormal
/// sqrt(f0)-weighted Hermite basis, degree-major table ordering. Parseval:
/// the L2(R^d) norm of the represented function equals coeffs.norm().
struct MomentVector {
  int d = 1;
  int M = 0;
  Eigen::VectorXd coeffs;  ///< length Xi^M
};

/// Linearised BGK collision operator in moment space:
///   Q alpha = (1/Kn) (P_eq alpha - alpha),
/// where P_eq is the orthogonal projection onto the collision invariants
/// (density, momentum, energy). The invariant subspace is spanned by psi_0,
/// the degree-1 basis functions, and the isotropic degree-2 combination
/// sum_i psi_{2 e_i} / sqrt(d); for d = 1 the projector reduces to keeping
/// the first three coefficients. Linear, bounded, negative semi-definite
/// and self-adjoint, with kernel dimension d + 2.
class BgkOperator {
 public:
  /// Requires M >= 2 (the kernel must be representable) and Kn > 0.
  BgkOperator(const MultiIndexTable& table, double Kn);

  double knudsen() const { return kn_; }
  int kernel_dimension() const { return static_cast<int>(mask_ones_.size()) + (iso_.size() ? 1 : 0); }

  /// P_eq alpha: the equilibrium part of a coefficient vector.
  Eigen::VectorXd equilibrium(const Eigen::VectorXd& alpha) const;

  /// (1/Kn)(P_eq alpha - alpha).
  Eigen::VectorXd apply(const Eigen::VectorXd& alpha) const;

  /// Q-seminorm value -<alpha, Q alpha> = (1/Kn) ||alpha - P_eq alpha||^2;
  /// nonnegative, zero exactly on the kernel, quadratic in alpha.
  double q_seminorm(const Eigen::VectorXd& alpha) const;

 private:
  double kn_ = 1.0;
  std::vector<int> mask_ones_;  ///< coefficient positions kept verbatim
  Eigen::VectorXd iso_;         ///< isotropic degree-2 unit vector (empty for d=1)
};

/// Equilibrium moments of alpha (projection onto the collision invariants);
/// idempotent. Requires M >= 2.
MomentVector equilibrium_moments(const MultiIndexTable& table, const MomentVector& alpha);

/// Orthogonal projection Pi_M: truncation of a coefficient vector given on
/// a richer table (degree M_in >= M) to degrees <= M.
MomentVector orthogonal_project(const MultiIndexTable& table_in, const Eigen::VectorXd& coeffs,
                                int M);

/// Boundary-condition projection Pi_hat_M: even coefficients are copied,
/// odd coefficients are rebuilt from the stable boundary operator,
///   mu_o <- R^(M) A^(M,M) mu_e + g.
/// The inflow vector g must be given in the odd-view ordering of mm's table
/// (use inflow_moments for d = 1 data).
MomentVector bc_project(const MultiIndexTable& table_in, const Eigen::VectorXd& coeffs,
                        const MomentMatrices& mm, const Eigen::VectorXd& g);

}  // namespace gradmom
