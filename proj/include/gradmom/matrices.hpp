#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gradmom/hermite.hpp"

namespace gradmom {

/// Table of half-line Gaussian moments
///   h(i,j) = int_0^inf He_i(x) He_j(x) f0(x) dx
/// filled by the closed-form recurrence
///   h(i+1,j) = ( sqrt(j) h(i,j-1) + He_i(0) He_j(0) f0(0) ) / sqrt(i+1)
/// seeded with h(0,0) = 1/2. The recurrence follows from integrating
/// d/dx [He_i He_j f0] over the half line; it is exact, and same-parity
/// pairs reduce to delta_ij / 2.
class HalfRangeTable {
 public:
  explicit HalfRangeTable(int max_degree);

  double operator()(int i, int j) const { return h_(i, j); }
  int max_degree() const { return static_cast<int>(h_.rows()) - 1; }

  /// Scales the two analytic seeds (test hook for fault injection).
  void scale_seeds(double factor);

 private:
  void fill();
  Eigen::MatrixXd h_;
  double seed_scale_ = 1.0;
};

/// h(i,j) for a single pair (convenience wrapper over HalfRangeTable).
double half_range_integral(int i, int j);

/// Flux coupling block collection
///   A^(p,q)_{ij} = <psi^o_i xi_1 sqrt(f0), psi^e_j sqrt(f0)>_{L2(R^d)}
/// with rows running over all odd indices of degree <= p and columns over
/// all even indices of degree <= q (table ordering). Entries follow
/// analytically from the Hermite recursion:
///   entry = sqrt(beta_1+1) if gamma = beta + e_1, sqrt(beta_1) if
///   gamma = beta - e_1, and 0 otherwise.
/// The table must satisfy max_degree >= max(p, q).
Eigen::SparseMatrix<double> flux_matrix_pq(const MultiIndexTable& table, int p, int q);

/// Half-space coupling block collection
///   B^(p,q)_{ij} = 2 <psi^o_i sqrt(f0), psi^e_j sqrt(f0)>_{L2(R+ x R^{d-1})}
///                = 2 h(beta_1, gamma_1) * prod_{r>=2} delta_{beta_r gamma_r}.
Eigen::SparseMatrix<double> half_matrix_pq(const MultiIndexTable& table,
                                           const HalfRangeTable& h, int p, int q);

enum class BlockVariant { MM, MM1 };

/// Dense A^(M,M) or A^(M,M-1); rejects M = 0 for the MM1 variant.
Eigen::MatrixXd flux_matrix(int d, int M, BlockVariant variant);

/// Dense B^(M,M), B^(M,M-1) or B^(M,q).
Eigen::MatrixXd half_matrix(int d, int M, BlockVariant variant);
Eigen::MatrixXd half_matrix(int d, int M, int q);

/// Spectral norm of a dense matrix via a symmetric eigensolve of G^T G.
double spectral_norm(const Eigen::MatrixXd& g);

/// Spectral norm of a sparse matrix via power iteration on G^T G.
/// Throws std::runtime_error if the iteration does not reach the requested
/// relative tolerance within the iteration cap.
double spectral_norm(const Eigen::SparseMatrix<double>& g, double tol = 1e-10,
                     int max_iters = 10000);

/// Assembled boundary-condition matrices for a given dimension and order.
struct MomentMatrices {
  int d = 0;
  int M = 0;
  Eigen::MatrixXd A_MM;    ///< Xi_o^M x Xi_e^M
  Eigen::MatrixXd A_MM1;   ///< square Xi_o^M x Xi_e^{M-1}, upper triangular
  Eigen::MatrixXd B_MM;
  Eigen::MatrixXd B_MM1;
  Eigen::MatrixXd R;       ///< Onsager matrix B^(M,M-1) (A^(M,M-1))^-1, s.p.d.
  Eigen::MatrixXd bc_map;  ///< R * A^(M,M): even -> odd boundary map
  double theta = 0.0;      ///< || R A_s^(M,M) - B_s^(M,M) ||_2, highest even block
  double lower_block_residual = 0.0;  ///< max |entry| of R A^(M,M) - B^(M,M) off that block
};

/// Assemble everything for (d, M). The Onsager matrix is obtained by
/// back-substitution on the upper-triangular A^(M,M-1), never by a general
/// factorization. Throws std::logic_error if a diagonal entry of
/// A^(M,M-1) vanishes (cannot happen for a valid table).
MomentMatrices assemble_moment_matrices(int d, int M);

/// Onsager matrix alone.
Eigen::MatrixXd onsager_matrix(int d, int M);

/// Theta_M alone.
double theta(int d, int M);

/// Solution of the bidiagonal system A x = e_n with
/// A_ij = sqrt(2i-1) delta_ij + sqrt(2i) delta_{(i+1)j}; the returned
/// l2 norm equals 1 for every n.
std::pair<Eigen::VectorXd, double> bidiagonal_unit_norm_solve(int n);

/// Structural validation of the assembled flux blocks against their
/// closed-form description. Each claim reports a measured residual.
struct StructureReport {
  struct Claim {
    std::string name;
    bool pass = false;
    double residual = 0.0;
  };
  std::vector<Claim> claims;
  bool all_pass() const;
};

StructureReport validate_block_structure(int d, int M);

/// || X^T X - I || for the column block X of (A^(M,M-1))^-1 that multiplies
/// the top coupling block D^(M-1,M); the columns are orthonormal.
double closure_column_orthonormality_residual(int d, int M);

/// Residual of the half-space moment identity
///   mu_o^M(r) = B^(M,q) mu_e^q(r) + g(r)
/// for a function r given by Hermite coefficients (d = 1). g(r) is the
/// inflow functional 2<Phi_o^M sqrt(f0), r>_{L2(R-)}, evaluated exactly via
/// the half-range table.
double half_space_identity_residual(int M, int q, const Eigen::VectorXd& r_coeffs);

/// Inflow functional g for d=1: odd half-space moments (factor 2, incoming
/// half-line xi < 0) of a function with the given Hermite coefficients.
Eigen::VectorXd inflow_moments(int M, const Eigen::VectorXd& coeffs);

/// One row of the matrix-norm study: spectral norms, Onsager diagnostics
/// and the bidiagonal-solve residual for a given order.
struct MatrixStudyRow {
  int d = 0;
  int M = 0;
  double norm_A = 0.0;        ///< ||A^(M,M)||_2
  double norm_Ainv_As = 0.0;  ///< ||(A^(M,M-1))^-1 A_s^(M,M)||_2
  double norm_R = 0.0;
  double theta = 0.0;
  double min_eig_R = 0.0;
  double sym_resid_R = 0.0;
  double lemma_c1_residual = 0.0;  ///< | ||x||_{l2} - 1 | at n = M
};

MatrixStudyRow matrix_study_row(int d, int M);

/// ||A^(M,M)||_2 computed sparsely (usable for large d = 3 orders).
double flux_norm(int d, int M);

}  // namespace gradmom
