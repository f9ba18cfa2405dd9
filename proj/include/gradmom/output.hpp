#pragma once

#include <string>

#include "gradmom/analysis.hpp"
#include "gradmom/config.hpp"

namespace gradmom {

/// Decimal formatting used for every CSV float: 17 significant digits,
/// round-trip exact for doubles.
std::string format_double(double v);

/// Snapshot CSV: columns x_center, then mean/slope per moment order.
void write_snapshot_csv(const std::string& path, const MomentField& field);

/// Run manifest: full config echo (canonical config text), discretization
/// constants, per-snapshot norms, timing and output files. JSON.
struct RunArtifacts {
  std::string config_text;
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<std::string> snapshot_files;
  double dt = 0.0;
  int steps_per_segment = 0;
  double wall_seconds = 0.0;
};
void write_run_manifest(const std::string& path, const RunArtifacts& artifacts);

/// Matrix-study CSV (one row per order).
void write_matrix_study_csv(const std::string& path, const std::vector<MatrixStudyRow>& rows);

/// Convergence-study outputs: decay series (with masks), index/rate table,
/// error table and Q-seminorm integrals.
void write_study_outputs(const std::string& out_dir, const StudyResult& result);

}  // namespace gradmom
