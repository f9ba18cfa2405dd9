#include "gradmom/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gradmom {

namespace {

long long pack_index(const std::array<int, 3>& beta) {
  // degrees stay far below 2^20 per component
  return (static_cast<long long>(beta[0]) << 40) |
         (static_cast<long long>(beta[1]) << 20) |
         static_cast<long long>(beta[2]);
}

}  // namespace

double hermite_eval(int k, double x) {
  if (k < 0) throw std::invalid_argument("hermite_eval: negative degree");
  double prev = 1.0;  // He_0
  if (k == 0) return prev;
  double cur = x;  // He_1
  for (int i = 1; i < k; ++i) {
    const double next = (x * cur - std::sqrt(static_cast<double>(i)) * prev) /
                        std::sqrt(static_cast<double>(i + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

Eigen::VectorXd hermite_values(int kmax, double x) {
  if (kmax < 0) throw std::invalid_argument("hermite_values: negative degree");
  Eigen::VectorXd v(kmax + 1);
  v[0] = 1.0;
  if (kmax >= 1) v[1] = x;
  for (int i = 1; i < kmax; ++i) {
    v[i + 1] = (x * v[i] - std::sqrt(static_cast<double>(i)) * v[i - 1]) /
               std::sqrt(static_cast<double>(i + 1));
  }
  return v;
}

Eigen::VectorXd hermite_values_at_zero(int kmax) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kmax + 1);
  v[0] = 1.0;
  for (int i = 1; i < kmax; ++i) {
    v[i + 1] = -std::sqrt(static_cast<double>(i)) * v[i - 1] /
               std::sqrt(static_cast<double>(i + 1));
  }
  return v;
}

int MultiIndexTable::odd_count_upto(int m) const {
  int c = 0;
  for (int k = 0; k <= m && k <= max_degree; ++k) c += n_odd[k];
  return c;
}

int MultiIndexTable::even_count_upto(int m) const {
  int c = 0;
  for (int k = 0; k <= m && k <= max_degree; ++k) c += n_even[k];
  return c;
}

int MultiIndexTable::degree_of(int i) const {
  const auto& b = indices[i];
  return b[0] + b[1] + b[2];
}

int MultiIndexTable::find(const std::array<int, 3>& beta) const {
  auto it = lookup_.find(pack_index(beta));
  return it == lookup_.end() ? -1 : it->second;
}

std::vector<int> MultiIndexTable::beta1_odd(int k) const {
  std::vector<int> out;
  for (int i = degree_offset[k]; i < degree_offset[k + 1]; ++i) {
    if (is_odd[i]) out.push_back(indices[i][0]);
  }
  return out;
}

MultiIndexTable enumerate_indices(int d, int M) {
  if (d < 1 || d > 3) throw std::invalid_argument("enumerate_indices: dimension must be 1, 2 or 3");
  if (M < 0) throw std::invalid_argument("enumerate_indices: negative max degree");

  MultiIndexTable t;
  t.dim = d;
  t.max_degree = M;
  t.degree_offset.assign(M + 2, 0);
  t.n.assign(M + 1, 0);
  t.n_odd.assign(M + 1, 0);
  t.n_even.assign(M + 1, 0);

  for (int m = 0; m <= M; ++m) {
    t.degree_offset[m] = static_cast<int>(t.indices.size());
    for (int b1 = m; b1 >= 0; --b1) {
      if (d == 1) {
        if (b1 != m) continue;
        t.indices.push_back({b1, 0, 0});
      } else if (d == 2) {
        t.indices.push_back({b1, m - b1, 0});
      } else {
        for (int b2 = 0; b2 <= m - b1; ++b2) {
          t.indices.push_back({b1, b2, m - b1 - b2});
        }
      }
    }
    t.n[m] = static_cast<int>(t.indices.size()) - t.degree_offset[m];
  }
  t.degree_offset[M + 1] = static_cast<int>(t.indices.size());

  t.is_odd.resize(t.indices.size());
  t.view_of_global.resize(t.indices.size());
  for (int i = 0; i < t.size(); ++i) {
    const auto& b = t.indices[i];
    const bool odd = (b[0] % 2) != 0;
    t.is_odd[i] = odd ? 1 : 0;
    const int m = b[0] + b[1] + b[2];
    if (odd) {
      t.n_odd[m] += 1;
      t.view_of_global[i] = static_cast<int>(t.odd_globals.size());
      t.odd_globals.push_back(i);
    } else {
      t.n_even[m] += 1;
      t.view_of_global[i] = static_cast<int>(t.even_globals.size());
      t.even_globals.push_back(i);
    }
    t.lookup_.emplace(pack_index(b), i);
  }
  return t;
}

double basis_eval(const MultiIndexTable& table, int i, const Eigen::VectorXd& xi) {
  if (i < 0 || i >= table.size()) throw std::out_of_range("basis_eval: index out of range");
  if (xi.size() != table.dim) throw std::invalid_argument("basis_eval: xi has wrong dimension");
  double v = 1.0;
  for (int p = 0; p < table.dim; ++p) {
    v *= hermite_eval(table.indices[i][p], xi[p]);
  }
  return v;
}

QuadratureRule gauss_hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: need at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    J(k, k + 1) = J(k + 1, k) = std::sqrt(static_cast<double>(k + 1));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton polish: eigenvalue accuracy ~ eps * ||J|| is not enough once
    // high-degree polynomials are evaluated at the nodes
    double x = rule.nodes[i];
    for (int it = 0; it < 2; ++it) {
      const Eigen::VectorXd he = hermite_values(n, x);
      const double dp = std::sqrt(static_cast<double>(n)) * he[n - 1];
      if (dp != 0.0) x -= he[n] / dp;
    }
    rule.nodes[i] = x;
    // Christoffel weight: 1 / sum_{k<n} He_k(x)^2 (total mass of f0 is 1)
    const Eigen::VectorXd he = hermite_values(n - 1, x);
    rule.weights[i] = 1.0 / he.squaredNorm();
  }
  rule.order = 2 * n - 1;
  return rule;
}

}  // namespace gradmom
