#include "gradmom/analysis.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

namespace gradmom {

double l2_error(const MomentField& ref, const MomentField& approx) {
  if (!(ref.mesh == approx.mesh)) throw std::invalid_argument("l2_error: mesh mismatch");
  if (approx.M > ref.M) throw std::invalid_argument("l2_error: approximation order exceeds reference");
  const int n = approx.M + 1;
  const double h = ref.mesh.h();
  double acc = (ref.mean.topRows(n) - approx.mean).squaredNorm() +
               (ref.slope.topRows(n) - approx.slope).squaredNorm();
  acc += ref.mean.bottomRows(ref.M + 1 - n).squaredNorm() +
         ref.slope.bottomRows(ref.M + 1 - n).squaredNorm();
  return std::sqrt(h * acc);
}

std::vector<char> filter_artefacts(const Eigen::VectorXd& fine, const Eigen::VectorXd& coarse,
                                   double rel_tol, double floor) {
  std::vector<char> mask(fine.size(), 0);
  for (int m = 0; m < fine.size(); ++m) {
    if (m >= coarse.size()) continue;
    if (!(fine[m] > floor)) continue;
    if (std::abs(fine[m] - coarse[m]) / fine[m] < rel_tol) mask[m] = 1;
  }
  return mask;
}

double fit_slope(const std::vector<int>& ms, const Eigen::VectorXd& values,
                 const std::vector<char>& mask) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < ms.size(); ++i) {
    if (!mask[i]) continue;
    if (ms[i] <= 0) throw std::invalid_argument("fit_slope: nonpositive abscissa");
    if (!(values[i] > 0.0)) throw std::invalid_argument("fit_slope: nonpositive value");
    const double x = std::log(static_cast<double>(ms[i]));
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit_slope: need at least two points");
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw std::invalid_argument("fit_slope: degenerate abscissa");
  return (n * sxy - sx * sy) / denom;
}

double sobolev_index(double decay_rate) { return decay_rate - 0.5; }

double predicted_rate(double k, double k_t, double k_x) {
  return std::min({k, k_t, k_x - 0.5});
}

double predicted_rate_baseline(double k, double k_t, double k_x_even, double k_x_odd) {
  return std::min({k - 0.5, k_t - 0.5, k_x_even - 1.0, k_x_odd - 0.5});
}

double observed_rate(const std::vector<std::pair<int, double>>& errors) {
  if (errors.size() < 3) throw std::invalid_argument("observed_rate: need at least 3 points");
  std::vector<int> ms;
  Eigen::VectorXd vals(errors.size());
  std::vector<char> mask(errors.size(), 1);
  for (size_t i = 0; i < errors.size(); ++i) {
    ms.push_back(errors[i].first);
    vals[static_cast<int>(i)] = errors[i].second;
  }
  return -fit_slope(ms, vals, mask);
}

DecayTriple compute_decay_series(const MomentSolver1D& solver, const Trajectory& traj) {
  const int n = solver.config().M + 1;
  Eigen::VectorXd N = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd Nt = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd Nx = Eigen::VectorXd::Zero(n);
  MomentField dfdt = MomentField::zero(solver.config().mesh, solver.config().M);
  for (const MomentField& snap : traj.snapshots) {
    N = N.cwiseMax(snap.degree_norms());
    solver.rhs(snap, dfdt);
    Nt = Nt.cwiseMax(dfdt.degree_norms());
    Nx = Nx.cwiseMax(snap.derivative_degree_norms());
  }
  return {{"N", N, {}}, {"N_t", Nt, {}}, {"N_x", Nx, {}}};
}

std::pair<std::vector<double>, double> q_seminorm_history(const Trajectory& ref,
                                                          const Trajectory& approx, double Kn) {
  if (ref.times.size() != approx.times.size()) {
    throw std::invalid_argument("q_seminorm_history: snapshot count mismatch");
  }
  std::vector<double> series(ref.times.size());
  const double h = ref.snapshots.front().mesh.h();
  const int M = approx.snapshots.front().M;
  const int n_ref = ref.snapshots.front().M + 1;
  for (size_t k = 0; k < ref.times.size(); ++k) {
    if (std::abs(ref.times[k] - approx.times[k]) > 1e-12) {
      throw std::invalid_argument("q_seminorm_history: snapshot times differ");
    }
    const MomentField& r = ref.snapshots[k];
    const MomentField& a = approx.snapshots[k];
    // kernel modes m <= 2 drop out of the Q-seminorm
    double acc = 0.0;
    for (int m = 3; m < n_ref; ++m) {
      if (m <= M) {
        acc += (r.mean.row(m) - a.mean.row(m)).squaredNorm() +
               (r.slope.row(m) - a.slope.row(m)).squaredNorm();
      } else {
        acc += r.mean.row(m).squaredNorm() + r.slope.row(m).squaredNorm();
      }
    }
    series[k] = h * acc / Kn;
  }
  double integral = 0.0;
  for (size_t k = 0; k + 1 < series.size(); ++k) {
    integral += 0.5 * (series[k] + series[k + 1]) * (ref.times[k + 1] - ref.times[k]);
  }
  return {series, integral};
}

namespace {

struct SnapshotNorms {
  // per-snapshot per-degree L2(Omega) norms of f, of the semi-discrete
  // time derivative, and of the broken x-derivative
  Eigen::MatrixXd f, ft, fx;  // n_snap x (M+1)
};

SnapshotNorms collect_norms(const MomentSolver1D& solver, const Trajectory& traj) {
  const int n = solver.config().M + 1;
  const int ns = static_cast<int>(traj.snapshots.size());
  SnapshotNorms out;
  out.f.resize(ns, n);
  out.ft.resize(ns, n);
  out.fx.resize(ns, n);
  MomentField dfdt = MomentField::zero(solver.config().mesh, solver.config().M);
  for (int k = 0; k < ns; ++k) {
    out.f.row(k) = traj.snapshots[k].degree_norms();
    solver.rhs(traj.snapshots[k], dfdt);
    out.ft.row(k) = dfdt.degree_norms();
    out.fx.row(k) = traj.snapshots[k].derivative_degree_norms();
  }
  return out;
}

Eigen::VectorXd column_max(const Eigen::MatrixXd& m) { return m.colwise().maxCoeff(); }

IndexFit fit_indices(const Eigen::VectorXd& series, const std::vector<char>& mask, int parity) {
  std::vector<int> ms;
  std::vector<double> vals;
  for (int m = 1; m < series.size(); ++m) {
    if (m % 2 != parity || !mask[m]) continue;
    ms.push_back(m);
    vals.push_back(series[m]);
  }
  IndexFit fit;
  fit.points = static_cast<int>(ms.size());
  if (fit.points < 2) throw std::invalid_argument("fit_indices: not enough masked points");
  fit.m_min = ms.front();
  fit.m_max = ms.back();
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
  fit.decay_rate = -fit_slope(ms, v, std::vector<char>(ms.size(), 1));
  fit.k = sobolev_index(fit.decay_rate);
  return fit;
}

/// max_t sqrt( sum_{m parity} (2m+d)^{2k} ||lambda_m(t)||^2 ), truncated at
/// the reference order.
double hermite_sobolev_norm(const Eigen::MatrixXd& snap_norms, double k, int parity, int d) {
  double best = 0.0;
  for (int t = 0; t < snap_norms.rows(); ++t) {
    double acc = 0.0;
    for (int m = parity; m < snap_norms.cols(); m += 2) {
      acc += std::pow(2.0 * m + d, 2.0 * k) * snap_norms(t, m) * snap_norms(t, m);
    }
    best = std::max(best, std::sqrt(acc));
  }
  return best;
}

void parallel_runs(std::vector<std::function<void()>> tasks, int threads) {
  if (threads <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t k = next.fetch_add(1);
        if (k >= tasks.size()) return;
        tasks[k]();
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

StudyResult run_convergence_study(const StudyConfig& config) {
  if (config.M_sweep.size() < 3) {
    throw std::invalid_argument("run_convergence_study: need at least 3 sweep orders");
  }
  for (int M : config.M_sweep) {
    if (M >= config.M_ref) {
      throw std::invalid_argument("run_convergence_study: sweep orders must stay below M_ref");
    }
  }
  StudyResult res;
  res.config = config;
  const int d = 1;

  SolverConfig ref_cfg = config.base;
  ref_cfg.M = config.M_ref;
  SolverConfig lo_cfg = config.base;
  lo_cfg.M = config.M_ref - 1;

  MomentSolver1D ref_solver(ref_cfg);
  MomentSolver1D lo_solver(lo_cfg);
  Trajectory ref_traj, lo_traj;
  SnapshotNorms ref_norms, lo_norms;
  std::optional<DvmTrajectory> dvm_traj;
  std::optional<DvmSolver> dvm_solver;
  if (config.with_dvm) dvm_solver.emplace(ref_cfg, config.dvm);

  {
    std::vector<std::function<void()>> tasks;
    tasks.push_back([&] {
      ref_traj = ref_solver.run();
      ref_norms = collect_norms(ref_solver, ref_traj);
    });
    tasks.push_back([&] {
      lo_traj = lo_solver.run();
      lo_norms = collect_norms(lo_solver, lo_traj);
      lo_traj = Trajectory{};  // series only
    });
    if (config.with_dvm) tasks.push_back([&] { dvm_traj = dvm_solver->run(); });
    parallel_runs(std::move(tasks), config.threads);
  }

  res.N = {"N", column_max(ref_norms.f), {}};
  res.N_t = {"N_t", column_max(ref_norms.ft), {}};
  res.N_x = {"N_x", column_max(ref_norms.fx), {}};
  res.N_lo = column_max(lo_norms.f);
  res.N_t_lo = column_max(lo_norms.ft);
  res.N_x_lo = column_max(lo_norms.fx);
  res.N.mask = filter_artefacts(res.N.values, res.N_lo);
  res.N_t.mask = filter_artefacts(res.N_t.values, res.N_t_lo);
  res.N_x.mask = filter_artefacts(res.N_x.values, res.N_x_lo);

  RateReport& rep = res.report;
  rep.k_even = fit_indices(res.N.values, res.N.mask, 0);
  rep.k_odd = fit_indices(res.N.values, res.N.mask, 1);
  rep.kt_even = fit_indices(res.N_t.values, res.N_t.mask, 0);
  rep.kt_odd = fit_indices(res.N_t.values, res.N_t.mask, 1);
  rep.kx_even = fit_indices(res.N_x.values, res.N_x.mask, 0);
  rep.kx_odd = fit_indices(res.N_x.values, res.N_x.mask, 1);
  rep.omega_pre_even = predicted_rate(rep.k_even.k, rep.kt_even.k, rep.kx_even.k);
  rep.omega_pre_odd = predicted_rate(rep.k_odd.k, rep.kt_odd.k, rep.kx_odd.k);
  rep.omega_pre = std::min(rep.omega_pre_even, rep.omega_pre_odd);
  rep.omega_pre_baseline = std::min(
      predicted_rate_baseline(rep.k_even.k, rep.kt_even.k, rep.kx_even.k, rep.kx_odd.k),
      predicted_rate_baseline(rep.k_odd.k, rep.kt_odd.k, rep.kx_even.k, rep.kx_odd.k));

  // shared pieces of the error bound
  const double T = config.base.t_final;
  const double Kn = config.base.Kn;
  const MultiIndexTable ref_table = enumerate_indices(d, config.M_ref);
  const HalfRangeTable h_table(config.M_ref);

  res.rows.resize(config.M_sweep.size());
  std::vector<Trajectory> sweep_trajs(config.M_sweep.size());
  {
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < config.M_sweep.size(); ++i) {
      tasks.push_back([&, i] {
        SolverConfig cfg = config.base;
        cfg.M = config.M_sweep[i];
        MomentSolver1D solver(cfg);
        sweep_trajs[i] = solver.run();
      });
    }
    parallel_runs(std::move(tasks), config.threads);
  }

  for (size_t i = 0; i < config.M_sweep.size(); ++i) {
    const int M = config.M_sweep[i];
    StudyRow& row = res.rows[i];
    row.M = M;
    row.error = l2_error(ref_traj.snapshots.back(), sweep_trajs[i].snapshots.back());
    auto [qs, qint] = q_seminorm_history(ref_traj, sweep_trajs[i], Kn);
    row.q_integral = qint;

    const MomentMatrices mm = assemble_moment_matrices(d, M);
    row.theta = mm.theta;
    row.norm_A = spectral_norm(mm.A_MM);

    // A_i terms of the bound; in d = 1 the even degree-M moment exists only
    // for even M
    auto mu_eM = [&](const Eigen::MatrixXd& snap_norms) {
      return (M % 2 == 0) ? snap_norms.col(M).maxCoeff() : 0.0;
    };
    const double wfac = std::sqrt(2.0);
    const double denom = 2.0 * (M + 1) + d;
    const double A1 =
        row.theta * mu_eM(ref_norms.ft) +
        wfac * (std::pow(denom, -rep.kt_even.k) * hermite_sobolev_norm(ref_norms.ft, rep.kt_even.k, 0, d) +
                std::pow(denom, -rep.kt_odd.k) * hermite_sobolev_norm(ref_norms.ft, rep.kt_odd.k, 1, d));
    const double A2 =
        row.theta * mu_eM(ref_norms.f) +
        wfac * (std::pow(denom, -rep.k_even.k) * hermite_sobolev_norm(ref_norms.f, rep.k_even.k, 0, d) +
                std::pow(denom, -rep.k_odd.k) * hermite_sobolev_norm(ref_norms.f, rep.k_odd.k, 1, d));
    const double A3 =
        row.theta * row.norm_A * mu_eM(ref_norms.fx) +
        std::sqrt(static_cast<double>(M + 1)) * ref_norms.fx.col(M + 1).maxCoeff() +
        row.norm_A * std::pow(denom, -rep.kx_even.k) *
            hermite_sobolev_norm(ref_norms.fx, rep.kx_even.k, 0, d);

    // projection error ||f_ref(T) - Pi_hat_M f_ref(T)||: odd replacement
    // mismatch plus the tail above M. The inflow functional of the
    // reference is recovered from the half-space identity truncated at the
    // reference order.
    const Eigen::MatrixXd B_ref =
        Eigen::MatrixXd(half_matrix_pq(ref_table, h_table, M, config.M_ref));
    const MomentField& rf = ref_traj.snapshots.back();
    const int n_odd = (M + 1) / 2;
    const int n_even = M / 2 + 1;
    double proj2 = 0.0;
    for (int part = 0; part < 2; ++part) {
      const Eigen::MatrixXd& W = part == 0 ? rf.mean : rf.slope;
      Eigen::MatrixXd mu_o(n_odd, W.cols()), mu_e(n_even, W.cols());
      Eigen::MatrixXd mu_e_ref(ref_table.even_size(), W.cols());
      for (int r = 0; r < n_odd; ++r) mu_o.row(r) = W.row(2 * r + 1);
      for (int c = 0; c < n_even; ++c) mu_e.row(c) = W.row(2 * c);
      for (int c = 0; c < ref_table.even_size(); ++c) {
        mu_e_ref.row(c) = W.row(ref_table.indices[ref_table.even_globals[c]][0]);
      }
      const Eigen::MatrixXd g = mu_o - B_ref * mu_e_ref;
      const Eigen::MatrixXd hat_odd = mm.bc_map * mu_e + g;
      proj2 += (mu_o - hat_odd).squaredNorm() + W.bottomRows(config.M_ref - M).squaredNorm();
    }
    row.projection_error = std::sqrt(config.base.mesh.h() * proj2);
    row.bound_rhs = row.projection_error + T * (A1 + A2 / Kn + A3);
    row.bound_holds = row.error <= row.bound_rhs;
  }

  std::vector<std::pair<int, double>> errors, qints;
  for (const auto& row : res.rows) {
    errors.push_back({row.M, row.error});
    qints.push_back({row.M, row.q_integral});
  }
  rep.omega_obs = observed_rate(errors);
  rep.delta_omega = rep.omega_obs - rep.omega_pre;
  res.q_decay_rate = observed_rate(qints);

  if (config.with_dvm) {
    const DvmField& dvm_final = dvm_traj->snapshots.back();
    const double h = config.base.mesh.h();
    for (size_t i = 0; i < config.M_sweep.size(); ++i) {
      const int M = config.M_sweep[i];
      const Eigen::MatrixXd psi = dvm_solver->hermite_collocation(M);
      const MomentField& mf = sweep_trajs[i].snapshots.back();
      // collocate the moment solution on the velocity grid
      const Eigen::MatrixXd dm = psi.transpose() * mf.mean - dvm_final.mean;
      const Eigen::MatrixXd ds = psi.transpose() * mf.slope - dvm_final.slope;
      const double e2 = h * ((dvm_solver->weights().asDiagonal() * dm.cwiseAbs2()).sum() +
                             (dvm_solver->weights().asDiagonal() * ds.cwiseAbs2()).sum());
      res.errors_dvm.push_back({M, std::sqrt(e2)});
    }
    res.omega_obs_dvm = observed_rate(res.errors_dvm);

    const MomentField dvm_moments = dvm_solver->extract_moments(dvm_final, 0);
    const MomentField& top = sweep_trajs[config.M_sweep.size() - 1].snapshots.back();
    const double num = (dvm_moments.mean.row(0) - top.mean.row(0)).squaredNorm() +
                       (dvm_moments.slope.row(0) - top.slope.row(0)).squaredNorm();
    const double den = top.mean.row(0).squaredNorm() + top.slope.row(0).squaredNorm();
    res.lambda0_dvm_rel_diff = std::sqrt(num / den);
  }
  return res;
}

}  // namespace gradmom
