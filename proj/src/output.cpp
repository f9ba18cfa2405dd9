#include "gradmom/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gradmom {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_snapshot_csv(const std::string& path, const MomentField& field) {
  std::ofstream out = open_out(path);
  out << "x_center";
  for (int m = 0; m <= field.M; ++m) {
    out << ",lambda" << m << "_mean,lambda" << m << "_slope";
  }
  out << "\n";
  for (int e = 0; e < field.mesh.n_elements; ++e) {
    out << format_double(field.mesh.center(e));
    for (int m = 0; m <= field.M; ++m) {
      out << "," << format_double(field.mean(m, e)) << "," << format_double(field.slope(m, e));
    }
    out << "\n";
  }
}

void write_run_manifest(const std::string& path, const RunArtifacts& a) {
  nlohmann::json j;
  j["config"] = a.config_text;
  j["dt"] = a.dt;
  j["steps_per_segment"] = a.steps_per_segment;
  j["wall_seconds"] = a.wall_seconds;
  j["snapshot_times"] = a.times;
  j["snapshot_norms"] = a.norms;
  j["snapshot_files"] = a.snapshot_files;
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_matrix_study_csv(const std::string& path, const std::vector<MatrixStudyRow>& rows) {
  std::ofstream out = open_out(path);
  out << "d,M,norm_A,norm_Ainv_As,norm_R,theta,min_eig_R,sym_resid_R,lemma_C1_residual\n";
  for (const auto& r : rows) {
    out << r.d << "," << r.M << "," << format_double(r.norm_A) << ","
        << format_double(r.norm_Ainv_As) << "," << format_double(r.norm_R) << ","
        << format_double(r.theta) << "," << format_double(r.min_eig_R) << ","
        << format_double(r.sym_resid_R) << "," << format_double(r.lemma_c1_residual) << "\n";
  }
}

void write_study_outputs(const std::string& out_dir, const StudyResult& res) {
  {
    // decay series (moment norms and their artefact masks)
    std::ofstream out = open_out(out_dir + "/decay_series.csv");
    out << "m,N,N_kept,N_t,N_t_kept,N_x,N_x_kept\n";
    for (int m = 0; m < res.N.values.size(); ++m) {
      out << m << "," << format_double(res.N.values[m]) << "," << int(res.N.mask[m]) << ","
          << format_double(res.N_t.values[m]) << "," << int(res.N_t.mask[m]) << ","
          << format_double(res.N_x.values[m]) << "," << int(res.N_x.mask[m]) << "\n";
    }
  }
  {
    // Hermite-Sobolev indices per quantity and parity
    std::ofstream out = open_out(out_dir + "/indices.csv");
    out << "quantity,parity,decay_rate,k,points,m_min,m_max\n";
    auto row = [&](const char* q, const char* p, const IndexFit& f) {
      out << q << "," << p << "," << format_double(f.decay_rate) << "," << format_double(f.k)
          << "," << f.points << "," << f.m_min << "," << f.m_max << "\n";
    };
    row("N", "even", res.report.k_even);
    row("N", "odd", res.report.k_odd);
    row("N_t", "even", res.report.kt_even);
    row("N_t", "odd", res.report.kt_odd);
    row("N_x", "even", res.report.kx_even);
    row("N_x", "odd", res.report.kx_odd);
  }
  {
    // convergence rates
    std::ofstream out = open_out(out_dir + "/rates.csv");
    out << "quantity,value\n";
    out << "omega_pre_even," << format_double(res.report.omega_pre_even) << "\n";
    out << "omega_pre_odd," << format_double(res.report.omega_pre_odd) << "\n";
    out << "omega_pre," << format_double(res.report.omega_pre) << "\n";
    out << "omega_pre_baseline," << format_double(res.report.omega_pre_baseline) << "\n";
    out << "omega_obs," << format_double(res.report.omega_obs) << "\n";
    out << "delta_omega," << format_double(res.report.delta_omega) << "\n";
    if (res.omega_obs_dvm) {
      out << "omega_obs_dvm," << format_double(*res.omega_obs_dvm) << "\n";
      out << "lambda0_dvm_rel_diff," << format_double(res.lambda0_dvm_rel_diff) << "\n";
    }
    out << "q_integral_decay_rate," << format_double(res.q_decay_rate) << "\n";
  }
  {
    // per-order error table with the assembled bound
    std::ofstream out = open_out(out_dir + "/errors.csv");
    out << "M,E_M,q_integral,projection_error,theta,norm_A,bound_rhs,bound_holds\n";
    for (const auto& r : res.rows) {
      out << r.M << "," << format_double(r.error) << "," << format_double(r.q_integral) << ","
          << format_double(r.projection_error) << "," << format_double(r.theta) << ","
          << format_double(r.norm_A) << "," << format_double(r.bound_rhs) << ","
          << (r.bound_holds ? 1 : 0) << "\n";
    }
  }
  if (!res.errors_dvm.empty()) {
    std::ofstream out = open_out(out_dir + "/errors_dvm.csv");
    out << "M,E_M\n";
    for (const auto& [M, e] : res.errors_dvm) out << M << "," << format_double(e) << "\n";
  }
}

}  // namespace gradmom
