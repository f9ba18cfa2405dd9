#include "gradmom/dvm.hpp"

#include <cmath>
#include <stdexcept>

namespace gradmom {

namespace {
constexpr double kDgP1Factor = 1.0 / 3.0;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

void DVMConfig::validate() const {
  if (n_velocities < 2 || n_velocities % 2 != 0) {
    throw std::invalid_argument("DVMConfig: n_velocities must be even and >= 2");
  }
  if (!(v_max >= 5.0)) {
    throw std::invalid_argument("DVMConfig: v_max >= 5 required for tail coverage");
  }
}

DvmSolver::DvmSolver(const SolverConfig& config, const DVMConfig& dvm) : cfg_(config), dvm_(dvm) {
  cfg_.validate();
  dvm_.validate();
  const int nv = dvm_.n_velocities;
  const double dv = 2.0 * dvm_.v_max / nv;
  xi_.resize(nv);
  for (int j = 0; j < nv; ++j) xi_[j] = -dvm_.v_max + (j + 0.5) * dv;
  w_ = Eigen::VectorXd::Constant(nv, dv);

  // collision invariants He_k(xi) sqrt(f0), k = 0..2, orthonormalized in
  // the discrete weighted inner product so the projection is exactly
  // idempotent on the grid
  Eigen::VectorXd sf(nv);
  for (int j = 0; j < nv; ++j) {
    sf[j] = std::exp(-xi_[j] * xi_[j] / 4.0) / std::pow(2.0 * kPi, 0.25);
  }
  invariants_.resize(3, nv);
  invariants_.row(0) = sf;
  invariants_.row(1) = xi_.cwiseProduct(sf);
  invariants_.row(2) = (xi_.cwiseProduct(xi_).array() - 1.0).matrix().cwiseProduct(sf) / std::sqrt(2.0);
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < k; ++l) {
      const double proj = (invariants_.row(k).cwiseProduct(invariants_.row(l)) * w_.asDiagonal())
                              .sum();
      invariants_.row(k) -= proj * invariants_.row(l);
    }
    const double nrm =
        std::sqrt((invariants_.row(k).cwiseAbs2() * w_.asDiagonal()).sum());
    invariants_.row(k) /= nrm;
  }

  auto sample_inflow = [&](const BoundarySpec& bc) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(nv);
    if (bc.type == BoundarySpec::Type::Inflow) {
      for (int j = 0; j < nv; ++j) {
        const Eigen::VectorXd he =
            hermite_values(static_cast<int>(bc.inflow_coeffs.size()) - 1, xi_[j]);
        double s = 0.0;
        for (int m = 0; m < bc.inflow_coeffs.size(); ++m) s += bc.inflow_coeffs[m] * he[m];
        v[j] = s * sf[j];
      }
    }
    return v;
  };
  inflow_left_ = sample_inflow(cfg_.left);
  inflow_right_ = sample_inflow(cfg_.right);
}

Eigen::MatrixXd DvmSolver::hermite_collocation(int Mmax) const {
  const int nv = dvm_.n_velocities;
  Eigen::MatrixXd psi(Mmax + 1, nv);
  for (int j = 0; j < nv; ++j) {
    const double sf = std::exp(-xi_[j] * xi_[j] / 4.0) / std::pow(2.0 * kPi, 0.25);
    psi.col(j) = hermite_values(Mmax, xi_[j]) * sf;
  }
  return psi;
}

MomentField DvmSolver::extract_moments(const DvmField& f, int Mmax) const {
  const Eigen::MatrixXd psi = hermite_collocation(Mmax);
  MomentField out = MomentField::zero(f.mesh, Mmax);
  out.mean.noalias() = psi * w_.asDiagonal() * f.mean;
  out.slope.noalias() = psi * w_.asDiagonal() * f.slope;
  return out;
}

DvmField DvmSolver::initial_field() const {
  const int nv = dvm_.n_velocities;
  const int ne = cfg_.mesh.n_elements;
  DvmField f;
  f.mesh = cfg_.mesh;
  f.mean = Eigen::MatrixXd::Zero(nv, ne);
  f.slope = Eigen::MatrixXd::Zero(nv, ne);

  Eigen::VectorXd sf(nv);
  for (int j = 0; j < nv; ++j) {
    sf[j] = std::exp(-xi_[j] * xi_[j] / 4.0) / std::pow(2.0 * kPi, 0.25);
  }
  if (cfg_.initial.type == InitialSpec::Type::GaussianDensity) {
    const double c = cfg_.initial.center, s = cfg_.initial.sharpness;
    auto [mean, slope] = project_scalar(
        cfg_.mesh, [c, s](double x) { return std::exp(-s * (x - c) * (x - c)); });
    f.mean = sf * mean;
    f.slope = sf * slope;
  } else {
    const int n = static_cast<int>(cfg_.initial.coeffs.size()) - 1;
    for (int j = 0; j < nv; ++j) {
      const Eigen::VectorXd he = hermite_values(n, xi_[j]);
      double v = 0.0;
      for (int m = 0; m <= n; ++m) v += cfg_.initial.coeffs[m] * he[m];
      f.mean.row(j).setConstant(v * sf[j]);
    }
  }
  return f;
}

void DvmSolver::rhs(const DvmField& f, DvmField& out) const {
  const int nv = dvm_.n_velocities;
  const int ne = cfg_.mesh.n_elements;
  const double h = cfg_.mesh.h();
  const double sqrt3 = std::sqrt(3.0);

  if (out.mean.rows() != nv || out.mean.cols() != ne) {
    out.mesh = cfg_.mesh;
    out.mean.resize(nv, ne);
    out.slope.resize(nv, ne);
  }
  flux_.resize(nv, ne + 1);

  const Eigen::MatrixXd uR = f.mean + sqrt3 * f.slope;
  const Eigen::MatrixXd uL = f.mean - sqrt3 * f.slope;

  for (int j = 0; j < nv; ++j) {
    const double v = xi_[j];
    if (v > 0.0) {
      flux_.row(j).segment(1, ne - 1) = v * uR.row(j).head(ne - 1);
      flux_(j, 0) = v * inflow_left_[j];      // incoming at x_lo
      flux_(j, ne) = v * uR(j, ne - 1);       // outgoing
    } else {
      flux_.row(j).segment(1, ne - 1) = v * uL.row(j).tail(ne - 1);
      flux_(j, 0) = v * uL(j, 0);             // outgoing at x_lo
      flux_(j, ne) = v * inflow_right_[j];    // incoming
    }
  }

  out.mean = (flux_.leftCols(ne) - flux_.rightCols(ne)) / h;
  out.slope = (2.0 * sqrt3 / h) * xi_.asDiagonal() * f.mean -
              (sqrt3 / h) * (flux_.leftCols(ne) + flux_.rightCols(ne));

  if (std::isfinite(cfg_.Kn)) {
    const double inv_kn = 1.0 / cfg_.Kn;
    // (P - I)/Kn with P the discrete equilibrium projection
    const Eigen::MatrixXd lam_m = invariants_ * w_.asDiagonal() * f.mean;
    const Eigen::MatrixXd lam_s = invariants_ * w_.asDiagonal() * f.slope;
    out.mean += inv_kn * (invariants_.transpose() * lam_m - f.mean);
    out.slope += inv_kn * (invariants_.transpose() * lam_s - f.slope);
  }
}

void DvmSolver::rk4_step(DvmField& f, double dt) const {
  DvmField k1, k2, k3, k4, stage = f;
  rhs(f, k1);
  stage.mean = f.mean + 0.5 * dt * k1.mean;
  stage.slope = f.slope + 0.5 * dt * k1.slope;
  rhs(stage, k2);
  stage.mean = f.mean + 0.5 * dt * k2.mean;
  stage.slope = f.slope + 0.5 * dt * k2.slope;
  rhs(stage, k3);
  stage.mean = f.mean + dt * k3.mean;
  stage.slope = f.slope + dt * k3.slope;
  rhs(stage, k4);
  f.mean += dt / 6.0 * (k1.mean + 2.0 * k2.mean + 2.0 * k3.mean + k4.mean);
  f.slope += dt / 6.0 * (k1.slope + 2.0 * k2.slope + 2.0 * k3.slope + k4.slope);
}

double DvmSolver::stable_dt() const {
  return kDgP1Factor * cfg_.cfl * cfg_.mesh.h() / dvm_.v_max;
}

DvmTrajectory DvmSolver::run(
    const std::function<void(int, double, const DvmField&)>& on_snapshot) const {
  DvmTrajectory traj;
  DvmField f = initial_field();

  const int n_segments =
      (cfg_.t_final == 0.0)
          ? 0
          : static_cast<int>(std::ceil(cfg_.t_final / cfg_.snapshot_every - 1e-12));
  const double seg = (n_segments > 0) ? cfg_.t_final / n_segments : 0.0;
  const int nsub = (n_segments > 0)
                       ? std::max(1, static_cast<int>(std::ceil(seg / stable_dt() - 1e-12)))
                       : 0;
  const double dt = (nsub > 0) ? seg / nsub : 0.0;
  traj.steps_per_segment = nsub;
  traj.dt = dt;

  auto record = [&](int k, double t) {
    traj.times.push_back(t);
    traj.snapshots.push_back(f);
    if (on_snapshot) on_snapshot(k, t, f);
  };
  record(0, 0.0);
  long long steps = 0;
  for (int k = 1; k <= n_segments; ++k) {
    for (int s = 0; s < nsub; ++s) {
      rk4_step(f, dt);
      if (++steps % 100 == 0 && (!f.mean.allFinite() || !f.slope.allFinite())) {
        throw NumericalAbort("non-finite DVM field detected", (k - 1) * seg + (s + 1) * dt);
      }
    }
    if (!f.mean.allFinite() || !f.slope.allFinite()) {
      throw NumericalAbort("non-finite DVM field detected", k * seg);
    }
    record(k, k * seg);
  }
  return traj;
}

}  // namespace gradmom
