#pragma once

#include <array>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace gradmom {

/// Evaluate the orthonormal (probabilists') Hermite polynomial He_k at x.
///
/// The family is normalized so that
///   (1/sqrt(2*pi)) * int He_i(x) He_j(x) exp(-x^2/2) dx = delta_ij,
/// and satisfies the three-term recursion
///   sqrt(i+1) He_{i+1}(x) + sqrt(i) He_{i-1}(x) = x He_i(x),
/// with He_0 = 1, He_1(x) = x. Forward recursion keeps the values bounded
/// for degrees well beyond 200.
double hermite_eval(int k, double x);

/// All values He_0(x), ..., He_kmax(x) in one forward recursion pass.
Eigen::VectorXd hermite_values(int kmax, double x);

/// Values He_k(0) for k = 0..kmax (odd degrees are exactly zero).
Eigen::VectorXd hermite_values_at_zero(int kmax);

/// Enumeration of the tensorial Hermite basis
///   psi_beta(xi) = prod_p He_{beta_p}(xi_p),   beta in N^d,
/// for all degrees |beta|_1 <= max_degree, together with the odd/even
/// bookkeeping with respect to the wall-normal velocity xi_1.
///
/// Ordering: degree-major; within a degree, indices are sorted by
/// decreasing beta_1, ties broken lexicographically in (beta_2, ..., beta_d).
/// This ordering makes the flux blocks D^(k,k-1) diagonal and puts the
/// beta_1 = 1 entries last, which the block-structure checks rely on.
/// The odd/even split is realized as index masks over this single layout,
/// so full, odd and even moment views share one storage order.
struct MultiIndexTable {
  int dim = 0;
  int max_degree = 0;

  std::vector<std::array<int, 3>> indices;  ///< unused trailing components are 0
  std::vector<int> degree_offset;           ///< size max_degree + 2
  std::vector<char> is_odd;                 ///< parity of beta_1 per index

  std::vector<int> odd_globals;   ///< odd-view position -> global index
  std::vector<int> even_globals;  ///< even-view position -> global index
  std::vector<int> view_of_global;  ///< global -> position within its parity view

  std::vector<int> n;       ///< n(m), number of indices of degree m
  std::vector<int> n_odd;   ///< n_o(m)
  std::vector<int> n_even;  ///< n_e(m)

  int size() const { return static_cast<int>(indices.size()); }
  int odd_size() const { return static_cast<int>(odd_globals.size()); }
  int even_size() const { return static_cast<int>(even_globals.size()); }

  /// Total number of odd (resp. even) indices of degree <= m.
  int odd_count_upto(int m) const;
  int even_count_upto(int m) const;

  int degree_of(int i) const;

  /// Global position of a multi-index, or -1 if absent.
  int find(const std::array<int, 3>& beta) const;

  /// First components of the odd indices of degree k, in table order.
  std::vector<int> beta1_odd(int k) const;

 private:
  friend MultiIndexTable enumerate_indices(int d, int M);
  std::unordered_map<long long, int> lookup_;
};

/// Build the multi-index table. Throws std::invalid_argument unless
/// 1 <= d <= 3 and M >= 0.
MultiIndexTable enumerate_indices(int d, int M);

/// Evaluate the i-th tensorial basis function psi_{beta^(i)} at xi
/// (length-d vector). Throws std::out_of_range for an invalid index.
double basis_eval(const MultiIndexTable& table, int i, const Eigen::VectorXd& xi);

/// Gauss-Hermite quadrature for the unit Gaussian weight
/// f0(xi) = exp(-xi^2/2)/sqrt(2*pi) on the real line.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;  ///< positive, summing to 1
  int order = 0;            ///< exact for polynomials of degree <= order
};

/// n-point rule computed via Golub-Welsch on the symmetric Jacobi matrix
/// with off-diagonal entries sqrt(k); this is the same matrix that acts as
/// the one-dimensional flux Jacobian of the moment system. Exactness
/// degree is 2n-1.
QuadratureRule gauss_hermite_rule(int n);

}  // namespace gradmom
