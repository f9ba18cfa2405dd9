#include "gradmom/solver.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace gradmom {

namespace {
constexpr double kDgP1Factor = 1.0 / 3.0;  // 1/(2p+1) for P1
}

void SolverConfig::validate() const {
  if (M < 0) throw std::invalid_argument("SolverConfig: M must be nonnegative");
  if (!(Kn > 0.0)) throw std::invalid_argument("SolverConfig: Kn must be positive");
  if (mesh.n_elements < 1) throw std::invalid_argument("SolverConfig: need at least one element");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("SolverConfig: cfl must be in (0,1]");
  if (t_final < 0.0) throw std::invalid_argument("SolverConfig: t_final must be nonnegative");
  if (!(snapshot_every > 0.0)) {
    throw std::invalid_argument("SolverConfig: snapshot_every must be positive");
  }
}

Eigen::MatrixXd flux_jacobian(int M) {
  if (M < 0) throw std::invalid_argument("flux_jacobian: negative order");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(M + 1, M + 1);
  for (int k = 0; k < M; ++k) {
    J(k, k + 1) = J(k + 1, k) = std::sqrt(static_cast<double>(k + 1));
  }
  return J;
}

Eigen::VectorXd upwind_flux(const Eigen::VectorXd& a_left, const Eigen::VectorXd& a_right,
                            const Eigen::MatrixXd& J, const Eigen::MatrixXd& absJ) {
  return 0.5 * (J * (a_left + a_right)) - 0.5 * (absJ * (a_right - a_left));
}

double cfl_dt(const Mesh1D& mesh, int M, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl_dt: cfl must be in (0,1]");
  const QuadratureRule rule = gauss_hermite_rule(M + 1);
  const double lmax = rule.nodes.cwiseAbs().maxCoeff();
  if (lmax == 0.0) return cfl * mesh.h();  // M = 0 transport is trivial
  return cfl * mesh.h() / lmax;
}

MomentSolver1D::MomentSolver1D(const SolverConfig& config) : cfg_(config) {
  cfg_.validate();
  const int n = cfg_.M + 1;
  J_ = flux_jacobian(cfg_.M);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J_);
  absJ_ = es.eigenvectors() * es.eigenvalues().cwiseAbs().asDiagonal() *
          es.eigenvectors().transpose();
  lambda_max_ = es.eigenvalues().cwiseAbs().maxCoeff();

  if (cfg_.M >= 1) {
    const MomentMatrices mm = assemble_moment_matrices(1, cfg_.M);
    bc_map_ = mm.bc_map;
  }
  for (int k = 0; k <= cfg_.M; ++k) {
    (k % 2 ? odd_ : even_).push_back(k);
  }
  reflect_ = Eigen::VectorXd::Ones(n);
  for (int k = 1; k <= cfg_.M; k += 2) reflect_[k] = -1.0;

  auto make_g = [this](const BoundarySpec& bc, bool reflected) {
    if (bc.type == BoundarySpec::Type::Vacuum || cfg_.M < 1) {
      return Eigen::VectorXd::Zero(static_cast<int>(odd_.size())).eval();
    }
    Eigen::VectorXd c = bc.inflow_coeffs;
    if (reflected) {
      for (int k = 1; k < c.size(); k += 2) c[k] = -c[k];
    }
    return inflow_moments(cfg_.M, c);
  };
  g_right_ = make_g(cfg_.right, false);
  g_left_ = make_g(cfg_.left, true);
}

double MomentSolver1D::stable_dt() const {
  if (lambda_max_ == 0.0) return cfg_.snapshot_every;
  return kDgP1Factor * cfl_dt(cfg_.mesh, cfg_.M, cfg_.cfl);
}

MomentField MomentSolver1D::initial_field() const {
  MomentField f = MomentField::zero(cfg_.mesh, cfg_.M);
  if (cfg_.initial.type == InitialSpec::Type::GaussianDensity) {
    const double c = cfg_.initial.center;
    const double s = cfg_.initial.sharpness;
    auto [mean, slope] = project_scalar(
        cfg_.mesh, [c, s](double x) { return std::exp(-s * (x - c) * (x - c)); });
    f.mean.row(0) = mean;
    f.slope.row(0) = slope;
  } else {
    const int n = std::min<int>(cfg_.initial.coeffs.size(), cfg_.M + 1);
    for (int m = 0; m < n; ++m) f.mean.row(m).setConstant(cfg_.initial.coeffs[m]);
  }
  return f;
}

Eigen::VectorXd MomentSolver1D::boundary_state_right(const Eigen::VectorXd& trace) const {
  Eigen::VectorXd out = trace;
  if (cfg_.M < 1) return out;
  Eigen::VectorXd mu_e(even_.size());
  for (size_t c = 0; c < even_.size(); ++c) mu_e[c] = trace[even_[c]];
  const Eigen::VectorXd mu_o = bc_map_ * mu_e + g_right_;
  for (size_t r = 0; r < odd_.size(); ++r) out[odd_[r]] = mu_o[r];
  return out;
}

Eigen::VectorXd MomentSolver1D::boundary_state_left(const Eigen::VectorXd& trace) const {
  Eigen::VectorXd out = reflect_.cwiseProduct(trace);
  if (cfg_.M >= 1) {
    Eigen::VectorXd mu_e(even_.size());
    for (size_t c = 0; c < even_.size(); ++c) mu_e[c] = out[even_[c]];
    const Eigen::VectorXd mu_o = bc_map_ * mu_e + g_left_;
    for (size_t r = 0; r < odd_.size(); ++r) out[odd_[r]] = mu_o[r];
  }
  return reflect_.cwiseProduct(out).eval();
}

void MomentSolver1D::rhs(const MomentField& f, MomentField& out) const {
  const int n = cfg_.M + 1;
  const int ne = cfg_.mesh.n_elements;
  const double h = cfg_.mesh.h();
  const double sqrt3 = std::sqrt(3.0);

  if (out.mean.rows() != n || out.mean.cols() != ne) out = MomentField::zero(cfg_.mesh, cfg_.M);
  flux_.resize(n, ne + 1);
  jumps_.resize(n, ne - 1);
  sums_.resize(n, ne - 1);

  const Eigen::MatrixXd uR = f.right_traces();
  const Eigen::MatrixXd uL = f.left_traces();

  // interior interfaces: left state uR(:, i-1), right state uL(:, i)
  jumps_ = uL.rightCols(ne - 1) - uR.leftCols(ne - 1);
  sums_ = uL.rightCols(ne - 1) + uR.leftCols(ne - 1);
  flux_.middleCols(1, ne - 1).noalias() = 0.5 * (J_ * sums_);
  flux_.middleCols(1, ne - 1).noalias() -= 0.5 * (absJ_ * jumps_);

  flux_.col(0).noalias() = J_ * boundary_state_left(uL.col(0));
  flux_.col(ne).noalias() = J_ * boundary_state_right(uR.col(ne - 1));

  const double relax = -1.0 / cfg_.Kn;
  out.mean = (flux_.leftCols(ne) - flux_.rightCols(ne)) / h;
  out.slope.noalias() = (2.0 * sqrt3 / h) * (J_ * f.mean);
  out.slope -= (sqrt3 / h) * (flux_.leftCols(ne) + flux_.rightCols(ne));

  // BGK: (P_eq - I)/Kn is a diagonal mask in d = 1
  for (int m = std::min(3, n); m < n; ++m) {
    out.mean.row(m) += relax * f.mean.row(m);
    out.slope.row(m) += relax * f.slope.row(m);
  }
}

MomentField MomentSolver1D::rhs(const MomentField& f) const {
  MomentField out = MomentField::zero(cfg_.mesh, cfg_.M);
  rhs(f, out);
  return out;
}

void MomentSolver1D::rk4_step(MomentField& f, double dt) const {
  MomentField k1 = rhs(f);
  MomentField stage = f;
  stage.mean = f.mean + 0.5 * dt * k1.mean;
  stage.slope = f.slope + 0.5 * dt * k1.slope;
  MomentField k2 = rhs(stage);
  stage.mean = f.mean + 0.5 * dt * k2.mean;
  stage.slope = f.slope + 0.5 * dt * k2.slope;
  MomentField k3 = rhs(stage);
  stage.mean = f.mean + dt * k3.mean;
  stage.slope = f.slope + dt * k3.slope;
  MomentField k4 = rhs(stage);
  f.mean += dt / 6.0 * (k1.mean + 2.0 * k2.mean + 2.0 * k3.mean + k4.mean);
  f.slope += dt / 6.0 * (k1.slope + 2.0 * k2.slope + 2.0 * k3.slope + k4.slope);
}

Trajectory MomentSolver1D::run(
    const std::function<void(int, double, const MomentField&)>& on_snapshot) const {
  Trajectory traj;
  MomentField f = initial_field();

  const int n_segments =
      (cfg_.t_final == 0.0)
          ? 0
          : static_cast<int>(std::ceil(cfg_.t_final / cfg_.snapshot_every - 1e-12));
  const double seg = (n_segments > 0) ? cfg_.t_final / n_segments : 0.0;
  const double dt_stable = stable_dt();
  const int nsub = (n_segments > 0) ? std::max(1, static_cast<int>(std::ceil(seg / dt_stable - 1e-12))) : 0;
  const double dt = (nsub > 0) ? seg / nsub : 0.0;

  traj.steps_per_segment = nsub;
  traj.dt = dt;

  auto record = [&](int k, double t) {
    traj.times.push_back(t);
    traj.norms.push_back(f.l2_norm());
    traj.snapshots.push_back(f);
    if (on_snapshot) on_snapshot(k, t, f);
  };
  record(0, 0.0);

  long long steps = 0;
  for (int k = 1; k <= n_segments; ++k) {
    for (int s = 0; s < nsub; ++s) {
      rk4_step(f, dt);
      if (++steps % 100 == 0 && (!f.mean.allFinite() || !f.slope.allFinite())) {
        throw NumericalAbort("non-finite field detected", (k - 1) * seg + (s + 1) * dt);
      }
    }
    if (!f.mean.allFinite() || !f.slope.allFinite()) {
      throw NumericalAbort("non-finite field detected", k * seg);
    }
    record(k, k * seg);
  }
  return traj;
}

}  // namespace gradmom
