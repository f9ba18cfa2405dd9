#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "gradmom/matrices.hpp"
#include "support/oracles.hpp"

using namespace gradmom;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("half-range integrals: seeds, parity and quadrature oracle") {
  const HalfRangeTable h(20);
  CHECK(h(0, 0) == doctest::Approx(0.5));
  CHECK(h(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)));
  CHECK(half_range_integral(1, 0) == doctest::Approx(0.3989422804014327));

  // same parity: delta_ij / 2
  for (int i = 0; i <= 20; ++i) {
    for (int j = i % 2; j <= 20; j += 2) {
      CHECK(h(i, j) == doctest::Approx(i == j ? 0.5 : 0.0).epsilon(1e-14));
    }
  }

  const Eigen::MatrixXd oracle = oracles::half_range_quadrature(20);
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) worst = std::max(worst, std::abs(h(i, j) - oracle(i, j)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("flux matrix d = 1 hand values") {
  const Eigen::MatrixXd A = flux_matrix(1, 3, BlockVariant::MM);
  REQUIRE(A.rows() == 2);
  REQUIRE(A.cols() == 2);
  CHECK(A(0, 0) == doctest::Approx(1.0));
  CHECK(A(0, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(A(1, 0) == doctest::Approx(0.0));
  CHECK(A(1, 1) == doctest::Approx(std::sqrt(3.0)));
  // same matrix for the square variant: the degree-4 block is truncated
  CHECK((flux_matrix(1, 3, BlockVariant::MM1) - A).norm() == 0.0);
  CHECK_THROWS_AS(flux_matrix(1, 0, BlockVariant::MM1), std::invalid_argument);
}

TEST_CASE("flux matrix agrees with the quadrature oracle entrywise") {
  const oracles::GramOracle gram(10);
  for (int d = 1; d <= 3; ++d) {
    const MultiIndexTable t = enumerate_indices(d, 10);
    const Eigen::MatrixXd A = Eigen::MatrixXd(flux_matrix_pq(t, 10, 10));
    double worst = 0.0;
    for (int r = 0; r < t.odd_size(); ++r) {
      for (int c = 0; c < t.even_size(); ++c) {
        const double q = oracles::tensor_entry(t, gram, t.odd_globals[r], t.even_globals[c], true);
        worst = std::max(worst, std::abs(A(r, c) - q));
      }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("coupling vanishes unless degrees are adjacent") {
  for (int d : {1, 3}) {
    const MultiIndexTable t = enumerate_indices(d, 8);
    const Eigen::MatrixXd A = Eigen::MatrixXd(flux_matrix_pq(t, 8, 8));
    for (int r = 0; r < t.odd_size(); ++r) {
      for (int c = 0; c < t.even_size(); ++c) {
        const int dk = t.degree_of(t.odd_globals[r]) - t.degree_of(t.even_globals[c]);
        if (dk != 1 && dk != -1) CHECK(A(r, c) == 0.0);
      }
    }
  }
}

TEST_CASE("half matrix values and oracle agreement") {
  const Eigen::MatrixXd B11 = half_matrix(1, 1, BlockVariant::MM);
  REQUIRE(B11.rows() == 1);
  REQUIRE(B11.cols() == 1);
  CHECK(B11(0, 0) == doctest::Approx(std::sqrt(2.0 / kPi)));

  // transverse tails must match
  const MultiIndexTable t3 = enumerate_indices(3, 6);
  const HalfRangeTable h(6);
  const Eigen::MatrixXd B3 = Eigen::MatrixXd(half_matrix_pq(t3, h, 6, 6));
  for (int r = 0; r < t3.odd_size(); ++r) {
    for (int c = 0; c < t3.even_size(); ++c) {
      const auto& bi = t3.indices[t3.odd_globals[r]];
      const auto& bj = t3.indices[t3.even_globals[c]];
      if (bi[1] != bj[1] || bi[2] != bj[2]) CHECK(B3(r, c) == 0.0);
    }
  }

  // oracle: 2 * half-line integral in xi_1, full-line Gram in the tail
  const Eigen::MatrixXd half_oracle = oracles::half_range_quadrature(10);
  const oracles::GramOracle gram(10);
  for (int d = 1; d <= 3; ++d) {
    const MultiIndexTable t = enumerate_indices(d, 10);
    const HalfRangeTable ht(10);
    const Eigen::MatrixXd B = Eigen::MatrixXd(half_matrix_pq(t, ht, 10, 10));
    double worst = 0.0;
    for (int r = 0; r < t.odd_size(); ++r) {
      for (int c = 0; c < t.even_size(); ++c) {
        const auto& bi = t.indices[t.odd_globals[r]];
        const auto& bj = t.indices[t.even_globals[c]];
        double v = 2.0 * half_oracle(bi[0], bj[0]);
        for (int p = 1; p < d; ++p) v *= gram.plain(bi[p], bj[p]);
        worst = std::max(worst, std::abs(B(r, c) - v));
      }
    }
    CHECK(worst < 1e-10);
  }

  CHECK(spectral_norm(half_matrix(1, 1, 3)) <= 1.0 + 1e-10);
}

TEST_CASE("half matrices are uniformly bounded by one") {
  for (int d : {1, 3}) {
    const int cap = d == 1 ? 20 : 10;
    const MultiIndexTable t = enumerate_indices(d, cap);
    const HalfRangeTable h(cap);
    for (int M = 1; M <= cap; M += 2) {
      for (int q = 0; q <= cap; q += 2) {
        CHECK(spectral_norm(Eigen::MatrixXd(half_matrix_pq(t, h, M, q))) <= 1.0 + 1e-10);
      }
    }
  }
}

TEST_CASE("Onsager matrix values and s.p.d. property") {
  const Eigen::MatrixXd R1 = onsager_matrix(1, 1);
  REQUIRE(R1.rows() == 1);
  CHECK(R1(0, 0) == doctest::Approx(std::sqrt(2.0 / kPi)));

  const MomentMatrices mm3 = assemble_moment_matrices(1, 3);
  REQUIRE(mm3.R.rows() == 2);
  CHECK((mm3.R - mm3.R.transpose()).norm() / mm3.R.norm() < 1e-12);
  CHECK((mm3.R * mm3.A_MM1 - mm3.B_MM1).cwiseAbs().maxCoeff() < 1e-13);

  for (int d : {1, 3}) {
    for (int M = 1; M <= 10; ++M) {
      const MatrixStudyRow row = matrix_study_row(d, M);
      CHECK(row.sym_resid_R < 1e-10);
      CHECK(row.min_eig_R > 0.0);
    }
  }
}

TEST_CASE("theta: lower blocks vanish, degree-2 value by hand") {
  // d = 1: the lower blocks of R A^(M,M) - B^(M,M) cancel by construction
  for (int M = 1; M <= 12; ++M) {
    CHECK(assemble_moment_matrices(1, M).lower_block_residual < 1e-10);
  }
  // odd M in d = 1 has no even degree-M block at all
  CHECK(theta(1, 1) == 0.0);
  CHECK(theta(1, 3) == 0.0);
  // M = 2: theta = | R A_s - B_s | = | sqrt(2/pi) sqrt(2) - 2 h(1,2) | = 1/sqrt(pi)
  CHECK(theta(1, 2) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-12));

  // growth exponent of the nonzero values
  std::vector<int> ms;
  std::vector<double> th;
  for (int M = 10; M <= 40; ++M) {
    const double v = theta(1, M);
    if (v > 1e-13) {
      ms.push_back(M);
      th.push_back(v);
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < ms.size(); ++i) {
    const double x = std::log(static_cast<double>(ms[i])), y = std::log(th[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(ms.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope > 0.4);
  CHECK(slope < 0.7);
}

TEST_CASE("spectral norm: dense eigensolve and sparse power iteration agree") {
  CHECK(spectral_norm(Eigen::MatrixXd::Identity(7, 7)) == doctest::Approx(1.0));
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  CHECK(spectral_norm(diag) == doctest::Approx(3.0));

  const MultiIndexTable t = enumerate_indices(1, 50);
  const Eigen::SparseMatrix<double> A = flux_matrix_pq(t, 50, 50);
  const double dense = spectral_norm(Eigen::MatrixXd(A));
  const double sparse = spectral_norm(A);
  CHECK(sparse == doctest::Approx(dense).epsilon(1e-8));
}

TEST_CASE("bidiagonal unit-norm solve") {
  auto [x1, n1] = bidiagonal_unit_norm_solve(1);
  CHECK(x1[0] == doctest::Approx(1.0));
  CHECK(n1 == doctest::Approx(1.0));

  auto [x2, n2] = bidiagonal_unit_norm_solve(2);
  CHECK(x2[0] == doctest::Approx(-std::sqrt(2.0 / 3.0)));
  CHECK(x2[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(n2 == doctest::Approx(1.0).epsilon(1e-14));

  for (int n : {10, 50, 200}) {
    CHECK(std::abs(bidiagonal_unit_norm_solve(n).second - 1.0) < 1e-12);
  }
}

TEST_CASE("block structure report") {
  for (int d : {1, 2, 3}) {
    const StructureReport rep = validate_block_structure(d, 9);
    for (const auto& claim : rep.claims) {
      INFO(claim.name << " (d = " << d << "), residual " << claim.residual);
      CHECK(claim.pass);
    }
  }
  // d = 3, k = 2: diagonal of D^(2,1) carries sqrt(beta_1) with odd beta_1
  const MultiIndexTable t = enumerate_indices(3, 3);
  const Eigen::MatrixXd A = Eigen::MatrixXd(flux_matrix_pq(t, 3, 3));
  const auto b1 = t.beta1_odd(2);
  const int r0 = t.odd_count_upto(1);
  const int c0 = t.even_count_upto(0);
  for (size_t i = 0; i < b1.size(); ++i) {
    CHECK(A(r0 + i, c0 + i) == doctest::Approx(std::sqrt(static_cast<double>(b1[i]))));
  }
}

TEST_CASE("closure columns of the inverse are orthonormal") {
  for (int d : {1, 3}) {
    for (int M = 2; M <= 12; ++M) {
      CHECK(closure_column_orthonormality_residual(d, M) < 1e-10);
    }
  }
}

TEST_CASE("half-space moment identity") {
  // r = 0
  CHECK(half_space_identity_residual(5, 8, Eigen::VectorXd::Zero(3)) == 0.0);

  // single odd mode: exact at any q
  Eigen::VectorXd odd_mode = Eigen::VectorXd::Zero(2);
  odd_mode[1] = 1.0;
  CHECK(half_space_identity_residual(5, 0, odd_mode) < 1e-14);
  CHECK(half_space_identity_residual(5, 8, odd_mode) < 1e-14);

  // smooth even-rich data: residual decreases in q, exact once q covers it
  Eigen::VectorXd smooth(11);
  for (int m = 0; m <= 10; ++m) smooth[m] = std::pow(0.6, m);
  double prev = 1e300;
  for (int q : {0, 2, 4, 6, 8, 10}) {
    const double r = half_space_identity_residual(5, q, smooth);
    CHECK(r <= prev + 1e-15);
    prev = r;
  }
  CHECK(half_space_identity_residual(5, 10, smooth) < 1e-14);
}

TEST_CASE("matrix study row sanity") {
  const MatrixStudyRow row = matrix_study_row(1, 12);
  CHECK(row.norm_Ainv_As == doctest::Approx(std::sqrt(12.0)));
  CHECK(row.norm_A > std::sqrt(12.0));
  CHECK(row.norm_A < 2.1 * std::sqrt(12.0));
  CHECK(row.lemma_c1_residual < 1e-12);
}
