#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gradmom/hermite.hpp"
#include "support/oracles.hpp"

using namespace gradmom;

TEST_CASE("hermite_eval matches the recursion by hand") {
  CHECK(hermite_eval(0, 3.7) == 1.0);
  CHECK(hermite_eval(1, 2.0) == 2.0);
  // He_2(x) = (x^2 - 1)/sqrt(2)
  CHECK(hermite_eval(2, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(hermite_eval(3, 0.0) == 0.0);
  CHECK(hermite_eval(2, 0.0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(hermite_eval(-1, 0.0), std::invalid_argument);
}

TEST_CASE("recursion residual stays at round-off relative to the terms") {
  const QuadratureRule rule = gauss_hermite_rule(48);
  double worst = 0.0;
  for (int q = 0; q < rule.nodes.size(); ++q) {
    const double x = rule.nodes[q];
    const Eigen::VectorXd he = hermite_values(201, x);
    for (int i = 1; i <= 200; ++i) {
      const double lo = std::sqrt(static_cast<double>(i)) * he[i - 1];
      const double hi = std::sqrt(i + 1.0) * he[i + 1];
      const double scale = 1.0 + std::abs(x * he[i]) + std::abs(lo) + std::abs(hi);
      worst = std::max(worst, std::abs(hi + lo - x * he[i]) / scale);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("enumerate_indices counts and parities in d = 1") {
  const MultiIndexTable t = enumerate_indices(1, 4);
  for (int m = 0; m <= 4; ++m) {
    CHECK(t.n[m] == 1);
    CHECK(t.n_odd[m] + t.n_even[m] == t.n[m]);
    CHECK(t.n_odd[m] == (m % 2 ? 1 : 0));
  }
  CHECK(t.size() == 5);
  CHECK(t.odd_size() == 2);
}

TEST_CASE("enumerate_indices counts in d = 3") {
  const MultiIndexTable t = enumerate_indices(3, 6);
  CHECK(t.n[0] == 1);
  CHECK(t.n[1] == 3);
  CHECK(t.n[2] == 6);
  for (int m = 0; m <= 6; ++m) {
    CHECK(t.n[m] == (m + 1) * (m + 2) / 2);
    CHECK(t.n_odd[m] + t.n_even[m] == t.n[m]);
  }
  // block-compatibility of the parity split
  for (int k = 1; k <= 6; ++k) CHECK(t.n_even[k - 1] == t.n_odd[k]);
}

TEST_CASE("beta1 bookkeeping of the odd indices") {
  const MultiIndexTable t = enumerate_indices(3, 8);
  for (int k = 1; k <= 8; ++k) {
    const auto b1 = t.beta1_odd(k);
    int ones = 0;
    for (int v : b1) {
      CHECK(v % 2 == 1);
      if (v == 1) ++ones;
    }
    // the beta_1 = 1 indices of degree k are the (d-1)-dimensional indices
    // of degree k-1: exactly k of them in d = 3
    CHECK(ones == k);
    // they sit last in the within-degree ordering
    for (size_t i = b1.size() - ones; i < b1.size(); ++i) CHECK(b1[i] == 1);
    // the zero block of D^(k,k+1) spans n_e(k+1) - n_o(k) = k + 2 columns
    if (k + 1 <= 8) CHECK(t.n_even[k + 1] - t.n_odd[k] == k + 2);
  }
  const MultiIndexTable t1 = enumerate_indices(1, 8);
  for (int k = 1; k <= 8; ++k) {
    const auto b1 = t1.beta1_odd(k);
    int ones = 0;
    for (int v : b1) ones += (v == 1);
    CHECK(ones == (k == 1 ? 1 : 0));
  }
}

TEST_CASE("enumerate_indices rejects bad dimensions") {
  CHECK_THROWS_AS(enumerate_indices(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_indices(4, 3), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_indices(2, -1), std::invalid_argument);
}

TEST_CASE("basis_eval tensor products") {
  const MultiIndexTable t3 = enumerate_indices(3, 3);
  Eigen::VectorXd xi(3);
  xi << 0.3, -1.7, 5.0;
  CHECK(basis_eval(t3, t3.find({0, 0, 0}), xi) == 1.0);
  xi << 2.0, 3.0, 5.0;
  CHECK(basis_eval(t3, t3.find({1, 1, 0}), xi) == doctest::Approx(6.0));

  const MultiIndexTable t1 = enumerate_indices(1, 2);
  Eigen::VectorXd x0(1);
  x0 << 0.0;
  CHECK(basis_eval(t1, t1.find({2, 0, 0}), x0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(basis_eval(t1, 17, x0), std::out_of_range);
}

TEST_CASE("basis parity under xi_1 reflection") {
  const MultiIndexTable t = enumerate_indices(3, 5);
  auto gen = oracles::rng(7);
  std::normal_distribution<double> dist;
  for (int it = 0; it < 20; ++it) {
    Eigen::VectorXd xi(3), xr(3);
    for (int p = 0; p < 3; ++p) xi[p] = dist(gen);
    xr = xi;
    xr[0] = -xi[0];
    for (int i = 0; i < t.size(); ++i) {
      const double a = basis_eval(t, i, xi);
      const double b = basis_eval(t, i, xr);
      if (t.is_odd[i]) {
        CHECK(a == doctest::Approx(-b).epsilon(1e-13));
      } else {
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("gauss_hermite_rule small rules are exact") {
  const QuadratureRule r1 = gauss_hermite_rule(1);
  CHECK(r1.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r1.weights[0] == doctest::Approx(1.0));

  const QuadratureRule r2 = gauss_hermite_rule(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0));
  CHECK(r2.nodes[1] == doctest::Approx(1.0));
  CHECK(r2.weights[0] == doctest::Approx(0.5));
  CHECK(r2.weights[1] == doctest::Approx(0.5));
  // unit variance of the weight
  double var = 0.0;
  for (int q = 0; q < 2; ++q) var += r2.weights[q] * r2.nodes[q] * r2.nodes[q];
  CHECK(var == doctest::Approx(1.0));

  CHECK_THROWS_AS(gauss_hermite_rule(0), std::invalid_argument);
}

TEST_CASE("gauss_hermite_rule integrates Gaussian moments exactly") {
  // odd moments vanish; even moments are (2k-1)!!
  for (int n : {3, 8, 15}) {
    const QuadratureRule rule = gauss_hermite_rule(n);
    CHECK(rule.weights.minCoeff() > 0.0);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    double dfact = 1.0;
    for (int p = 0; p <= rule.order; ++p) {
      double acc = 0.0;
      for (int q = 0; q < n; ++q) acc += rule.weights[q] * std::pow(rule.nodes[q], p);
      if (p % 2 == 1) {
        CHECK(std::abs(acc) < 1e-12 * dfact);
      } else {
        if (p > 0) dfact *= (p - 1);
        CHECK(acc == doctest::Approx(dfact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("tensor basis orthonormality via quadrature") {
  const int deg = 20;
  const oracles::GramOracle gram(deg);
  double worst = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const MultiIndexTable t = enumerate_indices(d, deg);
    for (int i = 0; i < t.size(); ++i) {
      for (int j = i; j < t.size(); ++j) {
        const double v = oracles::tensor_entry(t, gram, i, j, false);
        worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
      }
    }
  }
  CHECK(worst < 1e-10);
}
