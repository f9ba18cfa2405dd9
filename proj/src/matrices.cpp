#include "gradmom/matrices.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace gradmom {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

Eigen::SparseMatrix<double> to_rows_cols(const std::vector<Eigen::Triplet<double>>& trips,
                                         int rows, int cols) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

HalfRangeTable::HalfRangeTable(int max_degree) : h_(max_degree + 1, max_degree + 1) {
  fill();
}

void HalfRangeTable::scale_seeds(double factor) {
  seed_scale_ = factor;
  fill();
}

void HalfRangeTable::fill() {
  const int n = static_cast<int>(h_.rows()) - 1;
  const Eigen::VectorXd he0 = hermite_values_at_zero(n + 1);
  const double f00 = seed_scale_ / kSqrt2Pi;
  h_.setZero();
  h_(0, 0) = 0.5 * seed_scale_;
  // sweep by total degree so that h(i-1, j-1) is always available
  for (int s = 1; s <= 2 * n; ++s) {
    for (int i = std::max(1, s - n); i <= std::min(s, n); ++i) {
      const int j = s - i;
      const double lower = (j >= 1) ? std::sqrt(static_cast<double>(j)) * h_(i - 1, j - 1) : 0.0;
      const double v = (lower + he0[i - 1] * he0[j] * f00) / std::sqrt(static_cast<double>(i));
      h_(i, j) = v;
      h_(j, i) = v;
    }
  }
}

double half_range_integral(int i, int j) {
  if (i < 0 || j < 0) throw std::invalid_argument("half_range_integral: negative degree");
  HalfRangeTable t(std::max(i, j));
  return t(i, j);
}

Eigen::SparseMatrix<double> flux_matrix_pq(const MultiIndexTable& table, int p, int q) {
  if (p > table.max_degree || q > table.max_degree) {
    throw std::invalid_argument("flux_matrix_pq: table degree too small");
  }
  const int rows = table.odd_count_upto(p);
  const int cols = table.even_count_upto(q);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * rows);
  for (int r = 0; r < rows; ++r) {
    const int gi = table.odd_globals[r];
    std::array<int, 3> beta = table.indices[gi];
    const int b1 = beta[0];
    // gamma = beta - e_1
    beta[0] = b1 - 1;
    if (beta[0] >= 0) {
      const int gj = table.find(beta);
      if (gj >= 0) {
        const int c = table.view_of_global[gj];
        if (c < cols) trips.emplace_back(r, c, std::sqrt(static_cast<double>(b1)));
      }
    }
    // gamma = beta + e_1
    beta[0] = b1 + 1;
    if (table.degree_of(gi) + 1 <= q) {
      const int gj = table.find(beta);
      if (gj >= 0) {
        const int c = table.view_of_global[gj];
        if (c < cols) trips.emplace_back(r, c, std::sqrt(static_cast<double>(b1 + 1)));
      }
    }
  }
  return to_rows_cols(trips, rows, cols);
}

Eigen::SparseMatrix<double> half_matrix_pq(const MultiIndexTable& table,
                                           const HalfRangeTable& h, int p, int q) {
  if (p > table.max_degree || q > table.max_degree) {
    throw std::invalid_argument("half_matrix_pq: table degree too small");
  }
  const int rows = table.odd_count_upto(p);
  const int cols = table.even_count_upto(q);
  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < rows; ++r) {
    const int gi = table.odd_globals[r];
    std::array<int, 3> beta = table.indices[gi];
    const int tail = beta[1] + beta[2];
    // transverse directions integrate over the full line: tails must match
    for (int g1 = 0; g1 + tail <= q; g1 += 2) {
      std::array<int, 3> gamma = {g1, beta[1], beta[2]};
      const int gj = table.find(gamma);
      if (gj < 0) continue;
      const int c = table.view_of_global[gj];
      if (c < cols) trips.emplace_back(r, c, 2.0 * h(beta[0], g1));
    }
  }
  return to_rows_cols(trips, rows, cols);
}

Eigen::MatrixXd flux_matrix(int d, int M, BlockVariant variant) {
  if (variant == BlockVariant::MM1 && M < 1) {
    throw std::invalid_argument("flux_matrix: variant MM1 requires M >= 1");
  }
  const MultiIndexTable t = enumerate_indices(d, M);
  const int q = (variant == BlockVariant::MM) ? M : M - 1;
  return Eigen::MatrixXd(flux_matrix_pq(t, M, q));
}

Eigen::MatrixXd half_matrix(int d, int M, BlockVariant variant) {
  if (variant == BlockVariant::MM1 && M < 1) {
    throw std::invalid_argument("half_matrix: variant MM1 requires M >= 1");
  }
  return half_matrix(d, M, (variant == BlockVariant::MM) ? M : M - 1);
}

Eigen::MatrixXd half_matrix(int d, int M, int q) {
  if (q < 0) throw std::invalid_argument("half_matrix: negative q");
  const MultiIndexTable t = enumerate_indices(d, std::max(M, q));
  const HalfRangeTable h(std::max(M, q));
  return Eigen::MatrixXd(half_matrix_pq(t, h, M, q));
}

double spectral_norm(const Eigen::MatrixXd& g) {
  if (g.size() == 0) return 0.0;
  if (!g.allFinite()) throw std::invalid_argument("spectral_norm: non-finite entries");
  // work with the smaller Gram matrix
  if (g.rows() >= g.cols()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.transpose() * g);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g * g.transpose());
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double spectral_norm(const Eigen::SparseMatrix<double>& g, double tol, int max_iters) {
  if (g.rows() == 0 || g.cols() == 0 || g.nonZeros() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(g.cols());
  // deterministic perturbation breaks symmetry-induced stagnation
  for (int i = 0; i < v.size(); ++i) v[i] += 1e-3 * std::sin(0.7 * (i + 1));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = g.transpose() * (g * v);
    const double nl = w.norm();
    if (nl == 0.0) return 0.0;
    w /= nl;
    if (std::abs(nl - lambda) <= tol * std::max(1.0, nl)) {
      return std::sqrt(nl);
    }
    lambda = nl;
    v.swap(w);
  }
  throw std::runtime_error("spectral_norm: power iteration did not converge");
}

MomentMatrices assemble_moment_matrices(int d, int M) {
  if (M < 1) throw std::invalid_argument("assemble_moment_matrices: M >= 1 required");
  const MultiIndexTable t = enumerate_indices(d, M);
  const HalfRangeTable h(M);

  MomentMatrices mm;
  mm.d = d;
  mm.M = M;
  mm.A_MM = Eigen::MatrixXd(flux_matrix_pq(t, M, M));
  mm.A_MM1 = Eigen::MatrixXd(flux_matrix_pq(t, M, M - 1));
  mm.B_MM = Eigen::MatrixXd(half_matrix_pq(t, h, M, M));
  mm.B_MM1 = Eigen::MatrixXd(half_matrix_pq(t, h, M, M - 1));

  if (mm.A_MM1.rows() != mm.A_MM1.cols()) {
    throw std::logic_error("assemble_moment_matrices: A^(M,M-1) is not square");
  }
  for (int i = 0; i < mm.A_MM1.rows(); ++i) {
    if (mm.A_MM1(i, i) == 0.0) {
      throw std::logic_error("assemble_moment_matrices: singular A^(M,M-1)");
    }
  }
  // R A^(M,M-1) = B^(M,M-1)  <=>  A^T R^T = B^T with A upper triangular
  mm.R = mm.A_MM1.transpose()
             .triangularView<Eigen::Lower>()
             .solve(mm.B_MM1.transpose())
             .transpose();
  mm.bc_map = mm.R * mm.A_MM;

  const Eigen::MatrixXd diff = mm.bc_map - mm.B_MM;
  const int low_cols = static_cast<int>(mm.A_MM1.cols());
  mm.lower_block_residual =
      (low_cols > 0) ? diff.leftCols(low_cols).cwiseAbs().maxCoeff() : 0.0;
  const int top_cols = static_cast<int>(diff.cols()) - low_cols;
  mm.theta = (top_cols > 0) ? spectral_norm(Eigen::MatrixXd(diff.rightCols(top_cols))) : 0.0;
  return mm;
}

Eigen::MatrixXd onsager_matrix(int d, int M) {
  return assemble_moment_matrices(d, M).R;
}

double theta(int d, int M) {
  return assemble_moment_matrices(d, M).theta;
}

std::pair<Eigen::VectorXd, double> bidiagonal_unit_norm_solve(int n) {
  if (n < 1) throw std::invalid_argument("bidiagonal_unit_norm_solve: n >= 1 required");
  Eigen::VectorXd x(n);
  x[n - 1] = 1.0 / std::sqrt(2.0 * n - 1.0);
  for (int i = n - 1; i >= 1; --i) {
    // row i (1-based): sqrt(2i-1) x_i + sqrt(2i) x_{i+1} = 0
    x[i - 1] = -std::sqrt(2.0 * i) * x[i] / std::sqrt(2.0 * i - 1.0);
  }
  return {x, x.norm()};
}

bool StructureReport::all_pass() const {
  for (const auto& c : claims) {
    if (!c.pass) return false;
  }
  return true;
}

StructureReport validate_block_structure(int d, int M) {
  const MultiIndexTable t = enumerate_indices(d, M);
  StructureReport rep;
  auto add = [&rep](const std::string& name, double residual, double tol = 1e-12) {
    rep.claims.push_back({name, residual <= tol, residual});
  };

  // n_e(k-1) = n_o(k)
  double r_counts = 0.0;
  for (int k = 1; k <= M; ++k) {
    r_counts = std::max(r_counts, static_cast<double>(std::abs(t.n_even[k - 1] - t.n_odd[k])));
  }
  add("n_e(k-1) = n_o(k)", r_counts);

  // every entry of beta1_odd is odd; ones count equals k in d = 3
  double r_odd_entries = 0.0, r_ones = 0.0;
  for (int k = 1; k <= M; ++k) {
    const auto b1 = t.beta1_odd(k);
    int ones = 0;
    for (int v : b1) {
      if (v % 2 == 0) r_odd_entries += 1.0;
      if (v == 1) ++ones;
    }
    if (d == 3) r_ones = std::max(r_ones, static_cast<double>(std::abs(ones - k)));
    if (d == 1) {
      const int expect = (k == 1) ? 1 : 0;
      r_ones = std::max(r_ones, static_cast<double>(std::abs(ones - expect)));
    }
  }
  add("beta1_odd entries all odd", r_odd_entries);
  add("count of ones in beta1_odd", r_ones);

  const Eigen::MatrixXd A = Eigen::MatrixXd(flux_matrix_pq(t, M, M));
  const Eigen::MatrixXd A1 = Eigen::MatrixXd(flux_matrix_pq(t, M, M - 1));

  // A^(M,M-1) upper triangular with nonzero diagonal
  double r_tri = 0.0, r_diag = 0.0;
  for (int i = 0; i < A1.rows(); ++i) {
    for (int j = 0; j < i; ++j) r_tri = std::max(r_tri, std::abs(A1(i, j)));
    r_diag = std::max(r_diag, A1(i, i) == 0.0 ? 1.0 : 0.0);
  }
  add("A^(M,M-1) upper triangular", r_tri);
  add("A^(M,M-1) nonzero diagonal", r_diag);

  // per-degree blocks of A^(M,M)
  double r_dkm1 = 0.0;   // D^(k,k-1) = diag(sqrt(beta1))
  double r_dkp1 = 0.0;   // D^(k,k+1) = (diag(sqrt(beta1+1)) | 0)
  double r_far = 0.0;    // |k-l| != 1 blocks vanish
  double r_tail_id = 0.0;  // trailing identity block in D^(k,k-1)
  double r_zero_w = 0.0;   // zero-block width in D^(k,k+1) is n_e(k+1)-n_o(k) (= k+2, d=3)
  for (int k = 1; k <= M; ++k) {
    const auto b1 = t.beta1_odd(k);
    const int nok = t.n_odd[k];
    const int row0 = t.odd_count_upto(k - 1);
    for (int l = 0; l <= M; ++l) {
      const int nel = t.n_even[l];
      if (nel == 0 || nok == 0) continue;
      const int col0 = t.even_count_upto(l - 1);
      const Eigen::MatrixXd blk = A.block(row0, col0, nok, nel);
      if (l == k - 1) {
        Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(nok, nel);
        for (int i = 0; i < nok; ++i) expect(i, i) = std::sqrt(static_cast<double>(b1[i]));
        r_dkm1 = std::max(r_dkm1, (blk - expect).cwiseAbs().maxCoeff());
        int tail = 0;
        for (int i = nok - 1; i >= 0 && b1[i] == 1; --i) ++tail;
        int ones = 0;
        for (int v : b1) {
          if (v == 1) ++ones;
        }
        r_tail_id = std::max(r_tail_id, static_cast<double>(std::abs(tail - ones)));
      } else if (l == k + 1) {
        Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(nok, nel);
        for (int i = 0; i < nok; ++i) expect(i, i) = std::sqrt(static_cast<double>(b1[i] + 1));
        r_dkp1 = std::max(r_dkp1, (blk - expect).cwiseAbs().maxCoeff());
        const int zero_w = nel - nok;
        const int expect_w = (d == 3) ? k + 2 : (d == 2 ? 1 : 0);
        r_zero_w = std::max(r_zero_w, static_cast<double>(std::abs(zero_w - expect_w)));
      } else {
        r_far = std::max(r_far, blk.cwiseAbs().maxCoeff());
      }
    }
  }
  add("D^(k,k-1) = diag(sqrt(beta1_odd))", r_dkm1);
  add("trailing identity block spans the beta1 = 1 entries", r_tail_id);
  add("D^(k,k+1) = (diag(sqrt(beta1_odd + 1)) | 0)", r_dkp1);
  add("zero-block width n_e(k+1) - n_o(k)", r_zero_w);
  add("blocks with |k-l| != 1 vanish", r_far);
  return rep;
}

double closure_column_orthonormality_residual(int d, int M) {
  if (M < 2) return 0.0;
  const MultiIndexTable t = enumerate_indices(d, M);
  const Eigen::MatrixXd A1 = Eigen::MatrixXd(flux_matrix_pq(t, M, M - 1));
  // columns of A^-1 that multiply D^(M-1,M): positions of odd degree M-1
  const int c0 = t.odd_count_upto(M - 2);
  const int nc = t.n_odd[M - 1];
  if (nc == 0) return 0.0;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(A1.rows(), nc);
  for (int j = 0; j < nc; ++j) E(c0 + j, j) = 1.0;
  const Eigen::MatrixXd X = A1.triangularView<Eigen::Upper>().solve(E);
  return (X.transpose() * X - Eigen::MatrixXd::Identity(nc, nc)).cwiseAbs().maxCoeff();
}

Eigen::VectorXd inflow_moments(int M, const Eigen::VectorXd& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  const HalfRangeTable h(std::max(M, n));
  const int n_odd = (M + 1) / 2;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n_odd);
  for (int r = 0; r < n_odd; ++r) {
    const int i = 2 * r + 1;
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      // <psi_i, psi_j> over xi < 0 equals (-1)^(i+j) h(i,j)
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      s += coeffs[j] * sign * h(i, j);
    }
    g[r] = 2.0 * s;
  }
  return g;
}

double half_space_identity_residual(int M, int q, const Eigen::VectorXd& r_coeffs) {
  const int n = static_cast<int>(r_coeffs.size()) - 1;
  const int deg = std::max({M, q, n});
  const MultiIndexTable t = enumerate_indices(1, deg);
  const HalfRangeTable h(deg);
  const Eigen::MatrixXd B = Eigen::MatrixXd(half_matrix_pq(t, h, M, q));

  const int n_odd = (M + 1) / 2;
  Eigen::VectorXd mu_o = Eigen::VectorXd::Zero(n_odd);
  for (int r = 0; r < n_odd; ++r) {
    const int k = 2 * r + 1;
    if (k <= n) mu_o[r] = r_coeffs[k];
  }
  Eigen::VectorXd mu_e = Eigen::VectorXd::Zero(q / 2 + 1);
  for (int c = 0; c <= q / 2; ++c) {
    const int k = 2 * c;
    if (k <= n) mu_e[c] = r_coeffs[k];
  }
  const Eigen::VectorXd g = inflow_moments(M, r_coeffs);
  return (mu_o - B * mu_e - g).norm();
}

MatrixStudyRow matrix_study_row(int d, int M) {
  MatrixStudyRow row;
  row.d = d;
  row.M = M;
  const MomentMatrices mm = assemble_moment_matrices(d, M);
  row.norm_A = spectral_norm(mm.A_MM);
  row.theta = mm.theta;
  row.norm_R = spectral_norm(mm.R);
  const Eigen::MatrixXd sym = 0.5 * (mm.R + mm.R.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  row.min_eig_R = es.eigenvalues().minCoeff();
  row.sym_resid_R = spectral_norm(Eigen::MatrixXd(mm.R - mm.R.transpose())) / row.norm_R;
  const int low_cols = static_cast<int>(mm.A_MM1.cols());
  const int top_cols = static_cast<int>(mm.A_MM.cols()) - low_cols;
  if (top_cols > 0) {
    const Eigen::MatrixXd As = mm.A_MM.rightCols(top_cols);
    const Eigen::MatrixXd Y = mm.A_MM1.triangularView<Eigen::Upper>().solve(As);
    row.norm_Ainv_As = spectral_norm(Y);
  }
  row.lemma_c1_residual = std::abs(bidiagonal_unit_norm_solve(M).second - 1.0);
  return row;
}

double flux_norm(int d, int M) {
  const MultiIndexTable t = enumerate_indices(d, M);
  return spectral_norm(flux_matrix_pq(t, M, M));
}

}  // namespace gradmom
