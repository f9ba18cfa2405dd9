#include "gradmom/mesh.hpp"

#include <cmath>
#include <functional>

namespace gradmom {

MomentField MomentField::zero(const Mesh1D& mesh, int M) {
  MomentField f;
  f.mesh = mesh;
  f.M = M;
  f.mean = Eigen::MatrixXd::Zero(M + 1, mesh.n_elements);
  f.slope = Eigen::MatrixXd::Zero(M + 1, mesh.n_elements);
  return f;
}

double MomentField::l2_norm_squared() const {
  return mesh.h() * (mean.squaredNorm() + slope.squaredNorm());
}

double MomentField::l2_norm() const { return std::sqrt(l2_norm_squared()); }

Eigen::VectorXd MomentField::degree_norms() const {
  const double h = mesh.h();
  Eigen::VectorXd out(rows());
  for (int m = 0; m < rows(); ++m) {
    out[m] = std::sqrt(h * (mean.row(m).squaredNorm() + slope.row(m).squaredNorm()));
  }
  return out;
}

Eigen::VectorXd MomentField::derivative_degree_norms() const {
  const double h = mesh.h();
  Eigen::VectorXd out(rows());
  for (int m = 0; m < rows(); ++m) {
    out[m] = std::sqrt(12.0 / h * slope.row(m).squaredNorm());
  }
  return out;
}

std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> project_scalar(
    const Mesh1D& mesh, const std::function<double(double)>& f) {
  Eigen::RowVectorXd mean(mesh.n_elements), slope(mesh.n_elements);
  // 6-point Gauss-Legendre on [-1, 1]
  static const double gx[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                               0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
  static const double gw[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                               0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
  const double h = mesh.h();
  for (int e = 0; e < mesh.n_elements; ++e) {
    const double xc = mesh.center(e);
    double a = 0.0, b = 0.0;
    for (int q = 0; q < 6; ++q) {
      const double x = xc + 0.5 * h * gx[q];
      const double w = 0.5 * gw[q];  // already divided by h
      const double v = f(x);
      a += w * v;
      b += w * v * std::sqrt(3.0) * gx[q];  // phi_1 = sqrt(3) * 2(x-xc)/h
    }
    mean[e] = a;
    slope[e] = b;
  }
  return {mean, slope};
}

}  // namespace gradmom
