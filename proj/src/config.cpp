#include "gradmom/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gradmom {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cf;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      cf.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    cf.sections_[section][key] = value;
  }
  return cf;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  consumed_[section + "." + key] = true;
  auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  const std::string v = get(section, key, "");
  if (v.empty()) return fallback;
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + section + "." + key + ": '" + v + "'");
  }
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
  const double x = get_double(section, key, static_cast<double>(fallback));
  if (x != std::floor(x)) throw ConfigError("expected integer for " + section + "." + key);
  return static_cast<int>(x);
}

std::vector<double> ConfigFile::get_doubles(const std::string& section,
                                            const std::string& key) const {
  const std::string v = get(section, key, "");
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad list entry for " + section + "." + key + ": '" + tok + "'");
    }
  }
  return out;
}

std::vector<int> ConfigFile::get_ints(const std::string& section, const std::string& key) const {
  std::vector<int> out;
  for (double v : get_doubles(section, key)) {
    if (v != std::floor(v)) throw ConfigError("expected integer list for " + section + "." + key);
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::string> ConfigFile::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [sec, kv] : sections_) {
    for (const auto& [key, val] : kv) {
      if (!consumed_.count(sec + "." + key)) out.push_back(sec + "." + key);
    }
  }
  return out;
}

std::string ConfigFile::canonical_text() const {
  std::ostringstream out;
  for (const auto& [sec, kv] : sections_) {
    if (!sec.empty()) out << "[" << sec << "]\n";
    for (const auto& [key, val] : kv) out << key << " = " << val << "\n";
  }
  return out.str();
}

namespace {

BoundarySpec parse_boundary(const ConfigFile& f, const std::string& section) {
  BoundarySpec bc;
  const std::string type = f.get(section, "type", "vacuum");
  if (type == "vacuum") {
    bc.type = BoundarySpec::Type::Vacuum;
  } else if (type == "inflow") {
    bc.type = BoundarySpec::Type::Inflow;
    const auto coeffs = f.get_doubles(section, "coefficients");
    if (coeffs.empty()) throw ConfigError(section + ": inflow requires coefficients");
    bc.inflow_coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  } else {
    throw ConfigError(section + ": unknown boundary type '" + type + "'");
  }
  return bc;
}

}  // namespace

SolverConfig parse_run_config(const ConfigFile& f) {
  SolverConfig cfg;
  cfg.M = f.get_int("run", "M", cfg.M);
  cfg.Kn = f.get_double("run", "Kn", cfg.Kn);
  cfg.mesh.n_elements = f.get_int("run", "elements", cfg.mesh.n_elements);
  cfg.mesh.x_lo = f.get_double("run", "x_lo", cfg.mesh.x_lo);
  cfg.mesh.x_hi = f.get_double("run", "x_hi", cfg.mesh.x_hi);
  cfg.cfl = f.get_double("run", "cfl", cfg.cfl);
  cfg.t_final = f.get_double("run", "T_final", cfg.t_final);
  cfg.snapshot_every = f.get_double("run", "snapshot_every", cfg.snapshot_every);

  if (f.has("boundary", "type")) {
    cfg.left = parse_boundary(f, "boundary");
    cfg.right = cfg.left;
  }
  if (f.has("boundary_left", "type")) cfg.left = parse_boundary(f, "boundary_left");
  if (f.has("boundary_right", "type")) cfg.right = parse_boundary(f, "boundary_right");

  const std::string itype = f.get("initial", "type", "gaussian_density");
  if (itype == "gaussian_density") {
    cfg.initial.type = InitialSpec::Type::GaussianDensity;
    cfg.initial.center = f.get_double("initial", "center", 0.5);
    cfg.initial.sharpness = f.get_double("initial", "sharpness", 100.0);
  } else if (itype == "coefficients") {
    cfg.initial.type = InitialSpec::Type::Coefficients;
    const auto coeffs = f.get_doubles("initial", "values");
    if (coeffs.empty()) throw ConfigError("initial: coefficients require values");
    cfg.initial.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  } else {
    throw ConfigError("initial: unknown type '" + itype + "'");
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

StudyConfig parse_study_config(const ConfigFile& f) {
  StudyConfig s;
  s.base = parse_run_config(f);
  s.M_ref = f.get_int("study", "M_ref", s.M_ref);
  if (f.has("study", "M_sweep")) s.M_sweep = f.get_ints("study", "M_sweep");
  const std::string ref = f.get("study", "reference", "both");
  if (ref == "moment") {
    s.with_dvm = false;
  } else if (ref == "both" || ref == "dvm") {
    s.with_dvm = true;
  } else {
    throw ConfigError("study: unknown reference '" + ref + "'");
  }
  s.dvm.n_velocities = f.get_int("dvm", "n_velocities", s.dvm.n_velocities);
  s.dvm.v_max = f.get_double("dvm", "v_max", s.dvm.v_max);
  if (s.M_sweep.size() < 3) throw ConfigError("study: need at least 3 entries in M_sweep");
  for (int M : s.M_sweep) {
    if (M >= s.M_ref) throw ConfigError("study: M_sweep entries must stay below M_ref");
  }
  try {
    s.dvm.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return s;
}

namespace {

void render_boundary(std::ostringstream& out, const std::string& name, const BoundarySpec& bc) {
  out << "[" << name << "]\n";
  if (bc.type == BoundarySpec::Type::Vacuum) {
    out << "type = vacuum\n";
  } else {
    out << "type = inflow\ncoefficients =";
    for (int i = 0; i < bc.inflow_coeffs.size(); ++i) out << " " << fmt17(bc.inflow_coeffs[i]);
    out << "\n";
  }
}

void render_run_body(std::ostringstream& out, const SolverConfig& c) {
  out << "[run]\n";
  out << "M = " << c.M << "\n";
  out << "Kn = " << fmt17(c.Kn) << "\n";
  out << "elements = " << c.mesh.n_elements << "\n";
  out << "x_lo = " << fmt17(c.mesh.x_lo) << "\n";
  out << "x_hi = " << fmt17(c.mesh.x_hi) << "\n";
  out << "cfl = " << fmt17(c.cfl) << "\n";
  out << "T_final = " << fmt17(c.t_final) << "\n";
  out << "snapshot_every = " << fmt17(c.snapshot_every) << "\n";
  render_boundary(out, "boundary_left", c.left);
  render_boundary(out, "boundary_right", c.right);
  out << "[initial]\n";
  if (c.initial.type == InitialSpec::Type::GaussianDensity) {
    out << "type = gaussian_density\n";
    out << "center = " << fmt17(c.initial.center) << "\n";
    out << "sharpness = " << fmt17(c.initial.sharpness) << "\n";
  } else {
    out << "type = coefficients\nvalues =";
    for (int i = 0; i < c.initial.coeffs.size(); ++i) out << " " << fmt17(c.initial.coeffs[i]);
    out << "\n";
  }
}

}  // namespace

std::string render_run_config(const SolverConfig& config) {
  std::ostringstream out;
  render_run_body(out, config);
  return out.str();
}

std::string render_study_config(const StudyConfig& config) {
  std::ostringstream out;
  render_run_body(out, config.base);
  out << "[study]\n";
  out << "M_ref = " << config.M_ref << "\n";
  out << "M_sweep =";
  for (int m : config.M_sweep) out << " " << m;
  out << "\n";
  out << "reference = " << (config.with_dvm ? "both" : "moment") << "\n";
  out << "[dvm]\n";
  out << "n_velocities = " << config.dvm.n_velocities << "\n";
  out << "v_max = " << fmt17(config.dvm.v_max) << "\n";
  return out.str();
}

std::string preset_paper_desk(bool full_scale) {
  std::ostringstream out;
  out << "[run]\n";
  out << "M = " << (full_scale ? 200 : 80) << "\n";
  out << "Kn = 0.1\n";
  out << "elements = " << (full_scale ? 500 : 200) << "\n";
  out << "cfl = 0.5\n";
  out << "T_final = 0.3\n";
  out << "snapshot_every = 0.0075\n";
  out << "[boundary]\ntype = vacuum\n";
  out << "[initial]\ntype = gaussian_density\ncenter = 0.5\nsharpness = 100\n";
  out << "[study]\n";
  out << "M_ref = " << (full_scale ? 200 : 80) << "\n";
  out << "M_sweep = 5 10 15 20 25 30 35 40\n";
  out << "reference = both\n";
  out << "[dvm]\nn_velocities = 64\nv_max = 8\n";
  return out.str();
}

}  // namespace gradmom
