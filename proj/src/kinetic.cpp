#include "gradmom/kinetic.hpp"

#include <cmath>
#include <stdexcept>

namespace gradmom {

BgkOperator::BgkOperator(const MultiIndexTable& table, double Kn) : kn_(Kn) {
  if (table.max_degree < 2) {
    throw std::invalid_argument("BgkOperator: M >= 2 required for the collision invariants");
  }
  if (!(Kn > 0.0)) throw std::invalid_argument("BgkOperator: Kn must be positive");

  std::array<int, 3> beta = {0, 0, 0};
  mask_ones_.push_back(table.find(beta));
  for (int p = 0; p < table.dim; ++p) {
    beta = {0, 0, 0};
    beta[p] = 1;
    mask_ones_.push_back(table.find(beta));
  }
  if (table.dim == 1) {
    mask_ones_.push_back(table.find({2, 0, 0}));
  } else {
    iso_ = Eigen::VectorXd::Zero(table.size());
    for (int p = 0; p < table.dim; ++p) {
      beta = {0, 0, 0};
      beta[p] = 2;
      iso_[table.find(beta)] = 1.0 / std::sqrt(static_cast<double>(table.dim));
    }
  }
}

Eigen::VectorXd BgkOperator::equilibrium(const Eigen::VectorXd& alpha) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(alpha.size());
  for (int i : mask_ones_) out[i] = alpha[i];
  if (iso_.size()) out += iso_ * iso_.dot(alpha);
  return out;
}

Eigen::VectorXd BgkOperator::apply(const Eigen::VectorXd& alpha) const {
  return (equilibrium(alpha) - alpha) / kn_;
}

double BgkOperator::q_seminorm(const Eigen::VectorXd& alpha) const {
  return (alpha - equilibrium(alpha)).squaredNorm() / kn_;
}

MomentVector equilibrium_moments(const MultiIndexTable& table, const MomentVector& alpha) {
  BgkOperator op(table, 1.0);
  return {alpha.d, alpha.M, op.equilibrium(alpha.coeffs)};
}

MomentVector orthogonal_project(const MultiIndexTable& table_in, const Eigen::VectorXd& coeffs,
                                int M) {
  if (M > table_in.max_degree) {
    throw std::invalid_argument("orthogonal_project: target degree exceeds input table");
  }
  if (coeffs.size() != table_in.size()) {
    throw std::invalid_argument("orthogonal_project: coefficient length mismatch");
  }
  const int keep = table_in.degree_offset[M + 1];
  return {table_in.dim, M, coeffs.head(keep)};
}

MomentVector bc_project(const MultiIndexTable& table_in, const Eigen::VectorXd& coeffs,
                        const MomentMatrices& mm, const Eigen::VectorXd& g) {
  if (mm.d != table_in.dim || mm.M > table_in.max_degree) {
    throw std::invalid_argument("bc_project: table/matrices mismatch");
  }
  MomentVector out = orthogonal_project(table_in, coeffs, mm.M);

  const MultiIndexTable t = enumerate_indices(mm.d, mm.M);
  Eigen::VectorXd mu_e(t.even_size());
  for (int c = 0; c < t.even_size(); ++c) mu_e[c] = out.coeffs[t.even_globals[c]];
  const Eigen::VectorXd mu_o = mm.bc_map * mu_e + g;
  for (int r = 0; r < t.odd_size(); ++r) out.coeffs[t.odd_globals[r]] = mu_o[r];
  return out;
}

}  // namespace gradmom
