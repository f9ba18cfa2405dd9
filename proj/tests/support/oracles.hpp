#pragma once

// Test-side integration oracles, kept independent of the analytic assembly
// paths they are used to check.

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gradmom/hermite.hpp"

namespace oracles {

/// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch on the Legendre
/// Jacobi matrix, Newton-polished).
inline void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    J(k - 1, k) = J(k, k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x = es.eigenvalues();
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double q = es.eigenvectors()(0, i);
    w[i] = 2.0 * q * q;
  }
}

/// Adaptive-grade composite evaluation of int_0^inf He_i He_j f0 by
/// 24-point panels on [0, 40]; the integrand is negligible beyond.
inline Eigen::MatrixXd half_range_quadrature(int nmax) {
  Eigen::VectorXd gx, gw;
  gauss_legendre(24, gx, gw);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
  const int panels = 80;
  const double width = 40.0 / panels;
  for (int p = 0; p < panels; ++p) {
    for (int q = 0; q < gx.size(); ++q) {
      const double x = p * width + 0.5 * width * (gx[q] + 1.0);
      const double w = 0.5 * width * gw[q];
      const Eigen::VectorXd he = gradmom::hermite_values(nmax, x);
      const double f0 = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
      acc.noalias() += (w * f0) * (he * he.transpose());
    }
  }
  return acc;
}

/// 1D Gram matrices by full-line Gauss-Hermite quadrature:
/// plain(i,j) = <He_i He_j f0>, flux(i,j) = <He_i x He_j f0>.
struct GramOracle {
  Eigen::MatrixXd plain, flux;
  explicit GramOracle(int deg) {
    const gradmom::QuadratureRule rule = gradmom::gauss_hermite_rule(deg + 2);
    plain = Eigen::MatrixXd::Zero(deg + 1, deg + 1);
    flux = plain;
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::VectorXd he = gradmom::hermite_values(deg, rule.nodes[q]);
      plain.noalias() += rule.weights[q] * (he * he.transpose());
      flux.noalias() += rule.weights[q] * rule.nodes[q] * (he * he.transpose());
    }
  }
};

/// Tensor-product quadrature value of <psi_i xi_1 psi_j f0> (flux kernel)
/// or <psi_i psi_j f0>.
inline double tensor_entry(const gradmom::MultiIndexTable& t, const GramOracle& gram, int i,
                           int j, bool with_xi1) {
  double v = with_xi1 ? gram.flux(t.indices[i][0], t.indices[j][0])
                      : gram.plain(t.indices[i][0], t.indices[j][0]);
  for (int p = 1; p < t.dim; ++p) v *= gram.plain(t.indices[i][p], t.indices[j][p]);
  return v;
}

inline std::mt19937_64 rng(uint64_t seed = 42) { return std::mt19937_64(seed); }

}  // namespace oracles
