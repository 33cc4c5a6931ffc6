#pragma once

// Command implementations behind the nsk executable. Each command writes
// human-readable progress to `out`, problems to `err`, and returns the
// process exit code.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nsk/config.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/integrate.hpp"
#include "nsk/model.hpp"
#include "nsk/regime.hpp"
#include "nsk/verify.hpp"

namespace nsk::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kNoMatch = 1,        ///< classify: no case matched; mms: order outside band
  kUsage = 2,          ///< unreadable or invalid config / arguments
  kPositivity = 3,
  kDtUnderflow = 4,
  kNonFinite = 5,
};

inline int exit_code(Termination t) {
  switch (t) {
    case Termination::Completed: return kOk;
    case Termination::PositivityFault: return kPositivity;
    case Termination::DtUnderflow: return kDtUnderflow;
    case Termination::NonFinite: return kNonFinite;
  }
  return kNonFinite;
}

using json = nlohmann::json;

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const ModelParams& p) {
  return {{"kind", to_string(p.kind)}, {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma},
          {"mu_tilde", p.mu_tilde}, {"lambda_tilde", p.lambda_tilde}, {"dim", p.dim}, {"a", p.a}};
}

inline json to_json(const EnergyLedger& l) {
  return {{"E", l.E}, {"E0", l.E0}, {"D_cum", l.D_cum}, {"boundary_leak", l.boundary_leak}, {"defect", l.defect}};
}

inline json to_json(const KanelBracket& k) {
  return {{"bound", k.bound}, {"lower", optional_json(k.lower)}, {"upper", optional_json(k.upper)}};
}

inline json to_json(const RunSummary& s) {
  return {{"termination", to_string(s.termination)}, {"exit_code", exit_code(s.termination)},
          {"steps", s.steps}, {"final_time", s.final_time}, {"v_min_global", s.v_min_global},
          {"v_max_global", s.v_max_global}};
}

/// "T1.1 case i; T1.2 case i" or empty when nothing matched.
inline std::string regime_line(const std::vector<regime::RegimeVerdict>& verdicts) {
  std::string line;
  for (const auto& v : verdicts)
    for (const auto& c : v.matched_cases) {
      if (!line.empty()) line += "; ";
      line += std::string(regime::to_string(v.theorem)) + " case " + c;
    }
  return line;
}

inline std::vector<regime::RegimeVerdict> classify_both(const ModelParams& p) {
  return {regime::classify(p.alpha, p.beta, p.gamma, regime::Theorem::T1_1),
          regime::classify(p.alpha, p.beta, p.gamma, regime::Theorem::T1_2)};
}

namespace detail {

/// Streams time-series rows and snapshot files as the run produces them.
class FileObserver : public RunObserver {
 public:
  FileObserver(DiagnosticsRecorder& rec, const RadialGrid& grid, std::ostream* series,
               std::optional<std::filesystem::path> snapshot_dir)
      : rec_(rec), grid_(grid), series_(series), snapshot_dir_(std::move(snapshot_dir)) {}

  void on_step(std::size_t step, const State& s, double dt) override { rec_.on_step(step, s, dt); }

  void on_snapshot(std::size_t step, double t, const State& s) override {
    rec_.on_snapshot(step, t, s);
    if (series_) {
      write_timeseries_row(*series_, rec_.rows().back());
      series_->flush();
    }
    if (snapshot_dir_) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(9) << std::setfill('0') << step << ".csv";
      std::ofstream f(*snapshot_dir_ / name.str());
      write_snapshot_csv(f, s, grid_);
    }
  }

 private:
  DiagnosticsRecorder& rec_;
  RadialGrid grid_;
  std::ostream* series_;
  std::optional<std::filesystem::path> snapshot_dir_;
};

inline std::vector<std::string> config_problems(const Config& cfg) {
  std::vector<std::string> problems = validate(cfg.model);
  for (auto& p : validate(cfg.run)) problems.push_back(std::move(p));
  if (cfg.n < 5) problems.emplace_back("grid n must be >= 5");
  if (!(cfg.x_max > 0.0)) problems.emplace_back("grid x_max must be > 0");
  return problems;
}

}  // namespace detail

struct SimulationOutcome {
  RunSummary summary;
  EnergyLedger ledger;
  KanelBracket kanel;
  std::vector<regime::RegimeVerdict> verdicts;
  std::vector<std::string> warnings;
};

/// Runs one configured simulation, optionally streaming files into `dir`.
inline SimulationOutcome simulate(const Config& cfg, const std::filesystem::path* dir) {
  SimulationOutcome out;
  out.verdicts = classify_both(cfg.model);
  if (regime_line(out.verdicts).empty()) out.warnings.emplace_back("no theorem case matched");

  const RadialGrid grid(cfg.n, cfg.x_max);
  State state = build_initial(cfg.initial, grid, cfg.model);
  DiagnosticsRecorder rec(grid, cfg.model);
  std::ofstream series;
  std::optional<std::filesystem::path> snap_dir;
  if (dir) {
    series.open(*dir / cfg.output.timeseries);
    if (!series) throw ConfigError("cannot write " + (*dir / cfg.output.timeseries).string());
    write_timeseries_header(series);
    if (cfg.output.snapshots) {
      snap_dir = *dir / "snapshots";
      std::filesystem::create_directories(*snap_dir);
    }
  }
  detail::FileObserver obs(rec, grid, dir ? &series : nullptr, snap_dir);
  out.summary = run(state, grid, cfg.model, cfg.run, &obs);
  out.ledger = rec.ledger();
  out.kanel = rec.kanel_envelope();
  return out;
}

inline std::filesystem::path output_dir(const Config& cfg) {
  if (const char* env = std::getenv("NSK_OUTPUT_DIR"); env && *env) return env;
  return cfg.output.dir;
}

inline int cmd_simulate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (const auto problems = detail::config_problems(cfg); !problems.empty()) {
    for (const auto& p : problems) err << "error: " << p << '\n';
    return kUsage;
  }
  if (regime_line(classify_both(cfg.model)).empty()) err << "warning: no theorem case matched\n";
  const std::filesystem::path dir = output_dir(cfg);
  SimulationOutcome res;
  try {
    std::filesystem::create_directories(dir);
    res = simulate(cfg, &dir);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string line = regime_line(res.verdicts);
  json summary = to_json(res.summary);
  summary["schema_version"] = 1;
  summary["regime"] = line.empty() ? json(nullptr) : json(line);
  json cases = json::object();
  for (const auto& v : res.verdicts) cases[regime::to_string(v.theorem)] = v.matched_cases;
  summary["regime_cases"] = cases;
  summary["model"] = to_json(cfg.model);
  summary["grid"] = {{"n", cfg.n}, {"x_max", cfg.x_max}};
  summary["ledger"] = to_json(res.ledger);
  summary["kanel"] = to_json(res.kanel);
  summary["warnings"] = res.warnings;
  std::ofstream(dir / cfg.output.summary) << std::setw(2) << summary << '\n';

  out << "regime: " << (line.empty() ? "none" : line) << '\n';
  out << "termination: " << to_string(res.summary.termination) << " after " << res.summary.steps
      << " steps, t = " << res.summary.final_time << '\n';
  out << "ledger defect: " << res.ledger.defect << '\n';
  return exit_code(res.summary.termination);
}

struct ClassifyArgs {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::vector<regime::Theorem> theorems{regime::Theorem::T1_1, regime::Theorem::T1_2};
  double eq_tol = regime::kDefaultEqTol;
};

inline int cmd_classify(const ClassifyArgs& args, std::ostream& out, std::ostream& err) {
  bool any = false;
  try {
    for (const auto th : args.theorems) {
      const auto v = regime::classify(args.alpha, args.beta, args.gamma, th, args.eq_tol);
      out << regime::to_string(th) << ": ";
      if (v.matched()) {
        any = true;
        out << "matched {";
        for (std::size_t k = 0; k < v.matched_cases.size(); ++k) out << (k ? "," : "") << v.matched_cases[k];
        out << "}\n";
      } else {
        out << "no case matched\n";
      }
      for (const auto& [key, slack] : v.slacks) out << "  " << key << " slack " << slack << '\n';
    }
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return any ? kOk : kNoMatch;
}

inline int cmd_sweep(const std::string& config_path, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!cfg.sweep) {
    err << "error: sweep needs a [sweep] section\n";
    return kUsage;
  }
  const SweepSpec& sw = *cfg.sweep;
  const std::filesystem::path dir = output_dir(cfg);
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / sw.output);
  if (!csv) {
    err << "error: cannot write " << (dir / sw.output).string() << '\n';
    return kUsage;
  }
  const bool empty = sw.alpha_res == 0 || sw.beta_res == 0 || sw.alpha.lo > sw.alpha.hi || sw.beta.lo > sw.beta.hi;

  if (sw.mode == SweepSpec::Mode::Regions) {
    std::vector<regime::SweepCell> cells;
    if (!empty) {
      try {
        cells = regime::sweep_regions(sw.alpha, sw.beta, sw.gamma, sw.theorem, static_cast<int>(sw.alpha_res),
                                      static_cast<int>(sw.beta_res));
      } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
      }
    }
    regime::write_sweep_csv(csv, cells, sw.theorem);
    std::size_t matched = 0;
    for (const auto& c : cells) matched += c.verdict.matched() ? 1 : 0;
    out << "raster: " << cells.size() << " cells, " << matched << " matched\n";
    return kOk;
  }

  // Batch: one simulation per (alpha, beta) raster point, in raster order.
  csv << "alpha,beta,gamma,regime,termination,exit_code,steps,final_time,v_min_global,v_max_global,E,D_cum,"
         "boundary_leak,defect\n";
  csv.precision(17);
  if (empty) return kOk;
  std::vector<regime::SweepCell> cells;
  try {
    cells = regime::sweep_regions(sw.alpha, sw.beta, sw.gamma, sw.theorem, static_cast<int>(sw.alpha_res),
                                  static_cast<int>(sw.beta_res));
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  for (const auto& cell : cells) {
    Config member = cfg;
    member.model.alpha = cell.alpha;
    member.model.beta = cell.beta;
    member.model.gamma = cell.gamma;
    if (const auto problems = detail::config_problems(member); !problems.empty()) {
      for (const auto& p : problems) err << "error: " << p << '\n';
      return kUsage;
    }
    SimulationOutcome res;
    try {
      res = simulate(member, nullptr);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
    csv << cell.alpha << ',' << cell.beta << ',' << cell.gamma << ',' << '"' << regime_line(res.verdicts) << '"'
        << ',' << to_string(res.summary.termination) << ',' << exit_code(res.summary.termination) << ','
        << res.summary.steps << ',' << res.summary.final_time << ',' << res.summary.v_min_global << ','
        << res.summary.v_max_global << ',' << res.ledger.E << ',' << res.ledger.D_cum << ','
        << res.ledger.boundary_leak << ',' << res.ledger.defect << '\n';
  }
  out << "batch: " << cells.size() << " runs\n";
  return kOk;
}

struct MmsArgs {
  std::vector<std::size_t> spatial_n{65, 129, 257, 513};
  std::vector<std::size_t> full_n{81, 161, 321};
  double x_max = 4.0;
  double t_end = 0.05;
  bool equilibrium = false;
  bool skip_full = false;
  std::string report = "mms_report.json";
};

constexpr double kSpatialBandLo = 1.8;
constexpr double kSpatialBandHi = 2.2;
constexpr double kFullOrderMin = 1.7;

inline json to_json(const verify::OrderResult& r) {
  json levels = json::array();
  for (const auto& l : r.levels) levels.push_back({{"n", l.n}, {"dx", l.dx}, {"dt", l.dt}, {"error", l.error}});
  return {{"levels", levels},
          {"order", std::isnan(r.order) ? json(nullptr) : json(r.order)},
          {"verdict", verify::to_string(r.verdict)},
          {"note", r.note}};
}

inline int cmd_mms(const MmsArgs& args, std::ostream& out, std::ostream& err) {
  json report = {{"spatial", json::array()}, {"full", json::array()}};
  bool pass = true;
  bool fault = false;
  const verify::ManufacturedCase mc = args.equilibrium ? verify::equilibrium_case() : verify::bump_case();
  try {
    for (const ModelKind kind : {ModelKind::Kazhikhov, ModelKind::DensityDependent}) {
      for (const int dim : {2, 3}) {
        ModelParams p;
        p.kind = kind;
        p.alpha = kind == ModelKind::Kazhikhov ? 0.0 : 0.5;
        p.beta = -2.5;
        p.gamma = 1.4;
        p.lambda_tilde = 0.2;
        p.dim = dim;
        const std::string label = std::string(to_string(kind)) + " dim=" + std::to_string(dim);

        auto spatial = verify::mms_spatial_order(mc, p, args.x_max, args.spatial_n);
        bool ok = spatial.verdict == verify::OrderVerdict::Exact ||
                  (spatial.verdict == verify::OrderVerdict::Measured && spatial.order >= kSpatialBandLo &&
                   spatial.order <= kSpatialBandHi);
        pass = pass && ok;
        json js = to_json(spatial);
        js["case"] = label;
        js["band"] = {kSpatialBandLo, kSpatialBandHi};
        js["pass"] = ok;
        report["spatial"].push_back(js);
        out << "spatial " << label << ": " << verify::to_string(spatial.verdict);
        if (spatial.verdict == verify::OrderVerdict::Measured) out << " order " << spatial.order;
        out << (ok ? " [pass]" : " [FAIL]") << '\n';

        if (args.skip_full) continue;
        std::vector<verify::LadderLevel> ladder;
        if (args.full_n.empty()) throw std::invalid_argument("empty ladder");
        const RadialGrid coarse(std::max<std::size_t>(args.full_n.front(), verify::kMinUsefulNodes), args.x_max);
        const double dt0 = 0.5 * stable_dt(mc.sample(0.0, coarse, p), coarse, p);
        for (std::size_t n : args.full_n) {
          const double ratio = coarse.dx() / RadialGrid(n, args.x_max).dx();
          ladder.push_back({n, dt0 / (ratio * ratio)});
        }
        auto full = verify::mms_full_order(mc, p, args.x_max, ladder, args.t_end);
        const bool full_ok = full.verdict == verify::OrderVerdict::Exact ||
                             (full.verdict == verify::OrderVerdict::Measured && full.order >= kFullOrderMin);
        fault = fault || full.verdict == verify::OrderVerdict::Fault;
        pass = pass && full_ok;
        json jf = to_json(full);
        jf["case"] = label;
        jf["min_order"] = kFullOrderMin;
        jf["pass"] = full_ok;
        report["full"].push_back(jf);
        out << "full    " << label << ": " << verify::to_string(full.verdict);
        if (full.verdict == verify::OrderVerdict::Measured) out << " order " << full.order;
        out << (full_ok ? " [pass]" : " [FAIL]") << '\n';
      }
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  report["pass"] = pass;
  if (!args.report.empty()) {
    std::ofstream f(args.report);
    if (!f) {
      err << "error: cannot write " << args.report << '\n';
      return kUsage;
    }
    f << std::setw(2) << report << '\n';
  }
  if (fault) return kNonFinite;
  return pass ? kOk : kNoMatch;
}

}  // namespace nsk::cli
