#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gradmom/analysis.hpp"
#include "gradmom/config.hpp"
#include "gradmom/output.hpp"
#include "gradmom/validate.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalAbort = 3;

using gradmom::ConfigError;

gradmom::ConfigFile load_config(const std::string& config_path, const std::string& preset,
                                bool full_scale) {
  if (!preset.empty()) {
    if (preset != "paper-desk") throw ConfigError("unknown preset: " + preset);
    return gradmom::ConfigFile::parse_string(gradmom::preset_paper_desk(full_scale));
  }
  if (config_path.empty()) throw ConfigError("no config given (use --config or --preset)");
  return gradmom::ConfigFile::parse_file(config_path);
}

int cmd_run(const std::string& config_path, const std::string& preset, bool full_scale,
            const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const gradmom::ConfigFile file = load_config(config_path, preset, full_scale);
  const gradmom::SolverConfig cfg = gradmom::parse_run_config(file);
  std::filesystem::create_directories(out_dir);

  const std::string config_text = gradmom::render_run_config(cfg);
  {
    std::ofstream out(out_dir + "/config_resolved.ini");
    out << config_text;
  }

  gradmom::MomentSolver1D solver(cfg);
  gradmom::RunArtifacts artifacts;
  artifacts.config_text = config_text;

  try {
    const gradmom::Trajectory traj =
        solver.run([&](int k, double t, const gradmom::MomentField& f) {
          char name[64];
          std::snprintf(name, sizeof(name), "snapshot_%04d.csv", k);
          const std::string path = out_dir + "/" + name;
          gradmom::write_snapshot_csv(path, f);
          artifacts.snapshot_files.push_back(name);
          artifacts.times.push_back(t);
          artifacts.norms.push_back(f.l2_norm());
        });
    artifacts.dt = traj.dt;
    artifacts.steps_per_segment = traj.steps_per_segment;
  } catch (const gradmom::NumericalAbort& e) {
    std::cerr << "numerical abort at t = " << e.t << ": " << e.what()
              << " (snapshots up to the last good segment were written)\n";
    artifacts.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    gradmom::write_run_manifest(out_dir + "/manifest.json", artifacts);
    return kExitNumericalAbort;
  }

  artifacts.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  gradmom::write_run_manifest(out_dir + "/manifest.json", artifacts);
  std::cout << "wrote " << artifacts.snapshot_files.size() << " snapshots to " << out_dir << "\n";
  return 0;
}

int cmd_convergence_study(const std::string& config_path, const std::string& preset,
                          bool full_scale, const std::string& out_dir, int threads) {
  const gradmom::ConfigFile file = load_config(config_path, preset, full_scale);
  gradmom::StudyConfig cfg = gradmom::parse_study_config(file);
  cfg.threads = threads;
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir + "/config_resolved.ini");
    out << gradmom::render_study_config(cfg);
  }
  const gradmom::StudyResult res = gradmom::run_convergence_study(cfg);
  gradmom::write_study_outputs(out_dir, res);
  std::printf("omega_obs = %.4f, omega_pre = %.4f, delta = %.4f\n", res.report.omega_obs,
              res.report.omega_pre, res.report.delta_omega);
  if (res.omega_obs_dvm) std::printf("omega_obs (DVM reference) = %.4f\n", *res.omega_obs_dvm);
  std::cout << "study tables written to " << out_dir << "\n";
  return 0;
}

int cmd_matrix_study(int d, int m_max, const std::string& out_dir) {
  if (m_max < 2) throw ConfigError("matrix-study: M_max must be at least 2");
  std::filesystem::create_directories(out_dir);
  std::vector<gradmom::MatrixStudyRow> rows;
  for (int M = 1; M <= m_max; ++M) rows.push_back(gradmom::matrix_study_row(d, M));
  gradmom::write_matrix_study_csv(out_dir + "/matrix_study.csv", rows);

  // fitted growth exponent of ||A^(M,M)|| over the upper half of the range
  std::vector<int> ms;
  std::vector<double> vals;
  for (const auto& r : rows) {
    if (r.M >= std::max(2, m_max / 5)) {
      ms.push_back(r.M);
      vals.push_back(r.norm_A);
    }
  }
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
  const double slope = gradmom::fit_slope(ms, v, std::vector<char>(ms.size(), 1));
  std::printf("||A|| growth exponent over M in [%d, %d]: %.4f\n", ms.front(), ms.back(), slope);
  std::cout << "matrix study written to " << out_dir << "/matrix_study.csv\n";
  return 0;
}

int cmd_validate(const std::vector<std::string>& only) {
  gradmom::ValidateOptions opts;
  opts.only = only;
  const auto results = gradmom::run_validation(opts);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %-45s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.pass;
  }
  if (results.empty()) {
    std::cerr << "no properties matched the selection\n";
    return 1;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite moment-method solver with L2-stable boundary conditions"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", preset;
  bool full_scale = false;
  int threads = 1;
  app.add_option("--config", config_path, "config file path")->expected(1);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for independent runs");
  app.add_option("--preset", preset, "built-in preset name (paper-desk)");
  app.add_flag("--full", full_scale, "use the full-scale variant of the preset");

  auto* run = app.add_subcommand("run", "integrate one configuration and write snapshots");
  auto* study = app.add_subcommand("convergence-study",
                                   "reference runs, order sweep and rate tables");
  auto* matrix = app.add_subcommand("matrix-study", "matrix norms and boundary diagnostics");
  int d = 1, m_max = 50;
  matrix->add_option("--dimension", d, "velocity dimension (1-3)");
  matrix->add_option("--m-max", m_max, "largest order");
  auto* validate = app.add_subcommand("validate", "run the built-in property suite");
  std::vector<std::string> only;
  validate->add_option("--only", only, "run only properties whose name contains a given string");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, preset, full_scale, out_dir);
    if (study->parsed())
      return cmd_convergence_study(config_path, preset, full_scale, out_dir, threads);
    if (matrix->parsed()) return cmd_matrix_study(d, m_max, out_dir);
    if (validate->parsed()) return cmd_validate(only);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const gradmom::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumericalAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
