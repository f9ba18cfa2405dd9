#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradmom/analysis.hpp"
#include "gradmom/solver.hpp"

namespace gradmom {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat sectioned key = value text. '#' and ';' start comments; keys
/// before any section header live in the "" section. Unknown keys are
/// rejected at the typed-parse stage so typos fail loudly.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<int> get_ints(const std::string& section, const std::string& key) const;

  /// Keys present in the file but not consumed by any getter.
  std::vector<std::string> unconsumed() const;

  /// Canonical text (sorted sections/keys); used for the manifest echo.
  std::string canonical_text() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  mutable std::map<std::string, bool> consumed_;
};

/// Typed run configuration parsed from the [run], [boundary], [initial]
/// sections. Throws ConfigError on malformed or unknown content.
SolverConfig parse_run_config(const ConfigFile& file);

/// Typed study configuration: run sections plus [study] and [dvm].
StudyConfig parse_study_config(const ConfigFile& file);

/// Serialize a solver/study configuration back to canonical config text
/// (the manifest embeds this; re-running it reproduces the run).
std::string render_run_config(const SolverConfig& config);
std::string render_study_config(const StudyConfig& config);

/// Built-in desk-scaled experiment preset; `full_scale` switches to the
/// 500-element, M_ref = 200 variant.
std::string preset_paper_desk(bool full_scale);

}  // namespace gradmom
