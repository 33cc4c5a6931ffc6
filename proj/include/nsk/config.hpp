#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nsk/integrate.hpp"
#include "nsk/model.hpp"
#include "nsk/regime.hpp"
#include "nsk/state.hpp"

namespace nsk {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialKind { Constant, GaussianBump, TanhFront, File };

/// Initial-data descriptor. Unused fields are ignored for the chosen kind.
struct InitialSpec {
  InitialKind kind = InitialKind::Constant;
  double v = 1.0;  ///< constant
  double u = 0.0;  ///< constant
  double center = 0.0;
  double width = 1.0;
  double v_amplitude = 0.0;
  double u_amplitude = 0.0;
  double left = 1.0;   ///< tanh-front
  double right = 1.0;  ///< tanh-front
  std::string path;    ///< file
};

struct OutputSpec {
  std::string dir = ".";
  std::string timeseries = "timeseries.csv";
  std::string summary = "summary.json";
  bool snapshots = false;
};

struct SweepSpec {
  enum class Mode { Regions, Batch } mode = Mode::Regions;
  regime::Theorem theorem = regime::Theorem::T1_1;
  regime::Range alpha{0.0, 0.0};
  regime::Range beta{0.0, 0.0};
  double gamma = 1.4;
  std::size_t alpha_res = 1;
  std::size_t beta_res = 1;
  std::string output = "sweep.csv";
};

struct Config {
  ModelParams model;
  std::size_t n = 257;
  double x_max = 16.0;
  RunConfig run;
  InitialSpec initial;
  OutputSpec output;
  std::optional<SweepSpec> sweep;
  std::set<std::string> sections;  ///< sections present in the file
};

namespace detail {

inline double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a real number, got '" + text + "'");
  }
}

inline long parse_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long value = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
  const long v = parse_integer(key, text);
  if (v < 0) throw ConfigError("key '" + key + "': must be non-negative");
  return static_cast<std::size_t>(v);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + text + "'");
}

inline InitialKind parse_initial_kind(const std::string& text) {
  if (text == "constant") return InitialKind::Constant;
  if (text == "gaussian-bump") return InitialKind::GaussianBump;
  if (text == "tanh-front") return InitialKind::TanhFront;
  if (text == "file") return InitialKind::File;
  throw ConfigError("[initial] type: unknown descriptor '" + text + "'");
}

inline regime::Theorem parse_theorem(const std::string& text) {
  if (text == "T1.1" || text == "1.1") return regime::Theorem::T1_1;
  if (text == "T1.2" || text == "1.2") return regime::Theorem::T1_2;
  throw ConfigError("unknown theorem '" + text + "' (expected T1.1 or T1.2)");
}

}  // namespace detail

/// Parses the INI text. Unknown sections or keys are errors.
inline Config parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  Config cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside any section");
    cfg.sections.insert(section);
    for (const auto& [key, node] : body) {
      const std::string& val = node.data();
      const std::string qual = section + "." + key;
      using namespace detail;
      if (section == "model") {
        if (key == "kind") {
          try {
            cfg.model.kind = model_kind_from_string(val);
          } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
          }
        } else if (key == "alpha") cfg.model.alpha = parse_real(qual, val);
        else if (key == "beta") cfg.model.beta = parse_real(qual, val);
        else if (key == "gamma") cfg.model.gamma = parse_real(qual, val);
        else if (key == "mu_tilde") cfg.model.mu_tilde = parse_real(qual, val);
        else if (key == "lambda_tilde") cfg.model.lambda_tilde = parse_real(qual, val);
        else if (key == "dim") cfg.model.dim = static_cast<int>(parse_integer(qual, val));
        else if (key == "a") cfg.model.a = parse_real(qual, val);
        else throw ConfigError("unknown key '" + qual + "'");
      } else if (section == "grid") {
        if (key == "n") cfg.n = parse_count(qual, val);
        else if (key == "x_max") cfg.x_max = parse_real(qual, val);
        else throw ConfigError("unknown key '" + qual + "'");
      } else if (section == "run") {
        if (key == "t_end") cfg.run.t_end = parse_real(qual, val);
        else if (key == "cfl_visc") cfg.run.cfl_visc = parse_real(qual, val);
        else if (key == "cfl_cap") cfg.run.cfl_cap = parse_real(qual, val);
        else if (key == "dt_min") cfg.run.dt_min = parse_real(qual, val);
        else if (key == "dt_init") cfg.run.dt_init = parse_real(qual, val);
        else if (key == "dt_max") cfg.run.dt_max = parse_real(qual, val);
        else if (key == "v_floor") cfg.run.v_floor = parse_real(qual, val);
        else if (key == "snapshot_every") cfg.run.snapshot_every = parse_count(qual, val);
        else if (key == "fixed_dt") cfg.run.fixed_dt = parse_real(qual, val);
        else throw ConfigError("unknown key '" + qual + "'");
      } else if (section == "initial") {
        auto& ini = cfg.initial;
        if (key == "type") ini.kind = parse_initial_kind(val);
        else if (key == "v") ini.v = parse_real(qual, val);
        else if (key == "u") ini.u = parse_real(qual, val);
        else if (key == "center") ini.center = parse_real(qual, val);
        else if (key == "width") ini.width = parse_real(qual, val);
        else if (key == "v_amplitude") ini.v_amplitude = parse_real(qual, val);
        else if (key == "u_amplitude") ini.u_amplitude = parse_real(qual, val);
        else if (key == "left") ini.left = parse_real(qual, val);
        else if (key == "right") ini.right = parse_real(qual, val);
        else if (key == "path") ini.path = val;
        else throw ConfigError("unknown key '" + qual + "'");
      } else if (section == "output") {
        if (key == "dir") cfg.output.dir = val;
        else if (key == "timeseries") cfg.output.timeseries = val;
        else if (key == "summary") cfg.output.summary = val;
        else if (key == "snapshots") cfg.output.snapshots = parse_bool(qual, val);
        else throw ConfigError("unknown key '" + qual + "'");
      } else if (section == "sweep") {
        if (!cfg.sweep) cfg.sweep.emplace();
        auto& sw = *cfg.sweep;
        if (key == "mode") {
          if (val == "regions") sw.mode = SweepSpec::Mode::Regions;
          else if (val == "batch") sw.mode = SweepSpec::Mode::Batch;
          else throw ConfigError("[sweep] mode: expected regions or batch, got '" + val + "'");
        } else if (key == "theorem") sw.theorem = parse_theorem(val);
        else if (key == "alpha_min") sw.alpha.lo = parse_real(qual, val);
        else if (key == "alpha_max") sw.alpha.hi = parse_real(qual, val);
        else if (key == "beta_min") sw.beta.lo = parse_real(qual, val);
        else if (key == "beta_max") sw.beta.hi = parse_real(qual, val);
        else if (key == "gamma") sw.gamma = parse_real(qual, val);
        else if (key == "alpha_res") sw.alpha_res = parse_count(qual, val);
        else if (key == "beta_res") sw.beta_res = parse_count(qual, val);
        else if (key == "output") sw.output = val;
        else throw ConfigError("unknown key '" + qual + "'");
      } else {
        throw ConfigError("unknown section [" + section + "]");
      }
    }
  }
  if (cfg.initial.kind == InitialKind::File && cfg.initial.path.empty())
    throw ConfigError("[initial] type = file requires path");
  if (!(cfg.initial.width > 0.0)) throw ConfigError("[initial] width must be positive");
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  Config cfg = parse_config(in);
  // Relative data paths resolve against the config's directory.
  if (cfg.initial.kind == InitialKind::File && !cfg.initial.path.empty() && cfg.initial.path.front() != '/') {
    const auto slash = path.find_last_of('/');
    if (slash != std::string::npos) cfg.initial.path = path.substr(0, slash + 1) + cfg.initial.path;
  }
  return cfg;
}

/// Node table (x, v, u) read from CSV with a header naming at least those
/// three columns.
struct NodeTable {
  std::vector<double> x, v, u;
};

inline NodeTable read_node_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read initial data file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("initial data file is empty");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      out.push_back(cell);
    }
    return out;
  };
  const auto header = split(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("initial data file lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = col("x"), cv = col("v"), cu = col("u");
  NodeTable t;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() < header.size()) throw ConfigError("initial data file: short row");
    t.x.push_back(detail::parse_real("x", cells[cx]));
    t.v.push_back(detail::parse_real("v", cells[cv]));
    t.u.push_back(detail::parse_real("u", cells[cu]));
  }
  if (t.x.size() < 4) throw ConfigError("initial data file needs at least 4 rows");
  return t;
}

/// Initial state on the grid. Bumps are mirrored about the wall so that v is
/// even and u odd; the far-field node is set to (1, 0).
inline State build_initial(const InitialSpec& spec, const RadialGrid& grid, const ModelParams& params) {
  const std::size_t n = grid.n();
  State s;
  s.v.assign(n, 1.0);
  s.u.assign(n, 0.0);
  switch (spec.kind) {
    case InitialKind::Constant:
      std::fill(s.v.begin(), s.v.end(), spec.v);
      std::fill(s.u.begin(), s.u.end(), spec.u);
      break;
    case InitialKind::GaussianBump:
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double gm = std::exp(-std::pow((x - spec.center) / spec.width, 2));
        const double gp = std::exp(-std::pow((x + spec.center) / spec.width, 2));
        const double even = spec.center == 0.0 ? gm : gm + gp;
        s.v[i] = 1.0 + spec.v_amplitude * even;
        s.u[i] = spec.u_amplitude * (x / spec.width) * even;
      }
      break;
    case InitialKind::TanhFront:
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        s.v[i] = spec.left + (spec.right - spec.left) * 0.5 * (1.0 + std::tanh((x - spec.center) / spec.width));
      }
      break;
    case InitialKind::File: {
      const NodeTable t = read_node_csv(spec.path);
      bool same_nodes = t.x.size() == n;
      for (std::size_t i = 0; same_nodes && i < n; ++i)
        same_nodes = std::fabs(t.x[i] - grid.x(i)) <= 1e-12 * std::max(1.0, grid.x_max());
      if (same_nodes) {
        s.v = t.v;
        s.u = t.u;
      } else {
        for (std::size_t i = 1; i < t.x.size(); ++i)
          if (!(t.x[i] > t.x[i - 1])) throw ConfigError("initial data file: x must increase");
        using boost::math::interpolators::pchip;
        pchip<std::vector<double>> fv{std::vector<double>(t.x), std::vector<double>(t.v)};
        pchip<std::vector<double>> fu{std::vector<double>(t.x), std::vector<double>(t.u)};
        for (std::size_t i = 0; i < n; ++i) {
          const double x = grid.x(i);
          if (x <= t.x.back()) {
            s.v[i] = fv(std::max(x, t.x.front()));
            s.u[i] = fu(std::max(x, t.x.front()));
          }
        }
      }
      break;
    }
  }
  s.u[0] = 0.0;
  s.v[n - 1] = 1.0;
  s.u[n - 1] = 0.0;
  for (double v : s.v)
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("initial data: v must be positive and finite");
  for (double u : s.u)
    if (!std::isfinite(u)) throw ConfigError("initial data: u must be finite");
  s.r = radius_from_state(s.v, grid, params);
  return s;
}

inline void write_snapshot_csv(std::ostream& os, const State& s, const RadialGrid& grid) {
  const auto old = os.precision(17);
  os << "x,v,u,r\n";
  for (std::size_t i = 0; i < grid.n(); ++i)
    os << grid.x(i) << ',' << s.v[i] << ',' << s.u[i] << ',' << s.r[i] << '\n';
  os.precision(old);
}

}  // namespace nsk
