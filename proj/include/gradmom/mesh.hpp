#pragma once

#include <functional>
#include <utility>

#include <Eigen/Core>

namespace gradmom {

/// Uniform 1D mesh on (x_lo, x_hi).
struct Mesh1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_elements = 1;

  double h() const { return (x_hi - x_lo) / n_elements; }
  double center(int e) const { return x_lo + (e + 0.5) * h(); }
  bool operator==(const Mesh1D&) const = default;
};

/// Piecewise-linear DG coefficients of a vector of moment fields.
/// Per element the basis is the orthonormal Legendre pair
///   phi_0 = 1,  phi_1(x) = sqrt(3) * 2 (x - x_c) / h,
/// so that (1/h) int_K phi_i phi_j = delta_ij and the element mass matrix
/// is diagonal. Row m of `mean`/`slope` holds the coefficients of the
/// m-th moment; column e is element e.
struct MomentField {
  Mesh1D mesh;
  int M = 0;
  Eigen::MatrixXd mean;   ///< (M+1) x n_elements
  Eigen::MatrixXd slope;  ///< (M+1) x n_elements

  static MomentField zero(const Mesh1D& mesh, int M);

  int rows() const { return M + 1; }

  /// Discrete L2(Omega x R) norm: by velocity-space Parseval,
  /// ||f||^2 = h * sum (mean^2 + slope^2).
  double l2_norm() const;
  double l2_norm_squared() const;

  /// ||lambda_m||_{L2(Omega)} for each m.
  Eigen::VectorXd degree_norms() const;

  /// ||d/dx lambda_m||_{L2(Omega)} via the broken P1 derivative
  /// (2 sqrt(3)/h * slope per element).
  Eigen::VectorXd derivative_degree_norms() const;

  /// Traces at the element faces.
  Eigen::MatrixXd right_traces() const { return mean + std::sqrt(3.0) * slope; }
  Eigen::MatrixXd left_traces() const { return mean - std::sqrt(3.0) * slope; }
};

/// L2 projection of a scalar function onto the P1 space of a mesh
/// (6-point Gauss-Legendre per element; exact for the smooth profiles used
/// here to well below round-off of the solver tolerances). Returns the
/// per-element (mean, slope) coefficient rows.
std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> project_scalar(
    const Mesh1D& mesh, const std::function<double(double)>& f);

}  // namespace gradmom
