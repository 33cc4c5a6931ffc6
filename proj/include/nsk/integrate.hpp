#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nsk/geometry.hpp"
#include "nsk/model.hpp"
#include "nsk/spatial.hpp"
#include "nsk/state.hpp"

namespace nsk {

struct RunConfig {
  double t_end = 1.0;
  double cfl_visc = 0.4;
  double cfl_cap = 0.25;
  double dt_min = 1e-14;
  double dt_init = 1e-2;  ///< upper bound on the first step
  double dt_max = std::numeric_limits<double>::infinity();
  double v_floor = 1e-8;
  std::size_t snapshot_every = 1;
  /// Bypasses the controller (stability probes, convergence ladders).
  std::optional<double> fixed_dt;
};

inline std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> out;
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) out.emplace_back("t_end must be finite and >= 0");
  if (!(c.cfl_visc > 0.0 && c.cfl_visc <= 1.0)) out.emplace_back("cfl_visc must lie in (0, 1]");
  if (!(c.cfl_cap > 0.0 && c.cfl_cap <= 1.0)) out.emplace_back("cfl_cap must lie in (0, 1]");
  if (!(c.dt_min > 0.0)) out.emplace_back("dt_min must be > 0");
  if (!(c.dt_init > 0.0)) out.emplace_back("dt_init must be > 0");
  if (!(c.dt_min <= c.dt_init)) out.emplace_back("dt_min must not exceed dt_init");
  if (!(c.dt_max > 0.0)) out.emplace_back("dt_max must be > 0");
  if (!(c.v_floor > 0.0)) out.emplace_back("v_floor must be > 0");
  if (c.snapshot_every < 1) out.emplace_back("snapshot_every must be >= 1");
  if (c.fixed_dt && !(*c.fixed_dt > 0.0)) out.emplace_back("fixed_dt must be > 0");
  return out;
}

enum class Termination { Completed, PositivityFault, DtUnderflow, NonFinite };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::PositivityFault: return "PositivityFault";
    case Termination::DtUnderflow: return "DtUnderflow";
    case Termination::NonFinite: return "NonFinite";
  }
  return "?";
}

struct RunSummary {
  Termination termination = Termination::Completed;
  std::size_t steps = 0;
  double v_min_global = std::numeric_limits<double>::infinity();
  double v_max_global = -std::numeric_limits<double>::infinity();
  double final_time = 0.0;

  bool operator==(const RunSummary&) const = default;
};

/// Extra source added to (dv/dt, du/dt) at time t; used by manufactured solutions.
using Forcing = std::function<void(double t, std::span<double> dvdt, std::span<double> dudt)>;

/// Largest step admitted by the viscous and capillary bounds:
///   cfl_visc dx^2 / max (2mu+lambda) r^{2m} / v,
///   cfl_cap  dx^2 / max r^{2m} v^{-(beta+5)/2},
/// further capped by dt_max.
inline double stable_dt(const State& state, const RadialGrid& grid, const ModelParams& params,
                        const RunConfig& config = {}) {
  require_matching(grid, state.v.size(), "stable_dt");
  const std::vector<double> r =
      state.r.size() == grid.n() ? state.r : radius_from_state(state.v, grid, params);
  const int m = params.m();
  double nu_max = 0.0;
  double cap_max = 0.0;
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double v = state.v[i];
    const double r2m = power(r[i], 2 * m);
    nu_max = std::max(nu_max, std::fabs(viscous_coefficient(v, params)) * r2m / v);
    cap_max = std::max(cap_max, r2m * power(v, -0.5 * (params.beta + 5.0)));
  }
  const double dx2 = grid.dx() * grid.dx();
  double dt = config.dt_max;
  if (nu_max > 0.0) dt = std::min(dt, config.cfl_visc * dx2 / nu_max);
  if (cap_max > 0.0) dt = std::min(dt, config.cfl_cap * dx2 / cap_max);
  return dt;
}

/// Classical four-stage Runge-Kutta step for y' = f(t, y) with caller-owned
/// stage buffers. `after_stage` may modify each stage state before f sees it.
template <class F, class G>
void rk4_advance(std::vector<double>& y, double t, double dt, F&& f, G&& after_stage,
                 std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
                 std::vector<double>& k4, std::vector<double>& tmp) {
  const std::size_t n = y.size();
  for (auto* b : {&k1, &k2, &k3, &k4, &tmp}) b->resize(n);
  f(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  after_stage(tmp);
  f(t + 0.5 * dt, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  after_stage(tmp);
  f(t + 0.5 * dt, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  after_stage(tmp);
  f(t + dt, tmp, k4);
  for (std::size_t i = 0; i < n; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  after_stage(y);
}

template <class F>
void rk4_advance(std::vector<double>& y, double t, double dt, F&& f) {
  std::vector<double> k1, k2, k3, k4, tmp;
  rk4_advance(y, t, dt, std::forward<F>(f), [](std::vector<double>&) {}, k1, k2, k3, k4, tmp);
}

enum class StepStatus { Ok, PositivityFault, NonFinite };

/// RK4 stepper owning its operator and stage storage. Every stage rebuilds
/// r from the stage v (inside the operator), so r and v stay compatible.
class Stepper {
 public:
  Stepper(const RadialGrid& grid, const ModelParams& params, Forcing forcing = {})
      : op_(grid, params), forcing_(std::move(forcing)) {}

  [[nodiscard]] const RadialGrid& grid() const { return op_.grid(); }
  [[nodiscard]] const ModelParams& params() const { return op_.params(); }

  StepStatus advance(State& state, double dt, double v_floor) {
    const std::size_t n = grid().n();
    require_matching(grid(), state.v.size(), "step");
    require_matching(grid(), state.u.size(), "step");
    y_.resize(2 * n);
    std::copy(state.v.begin(), state.v.end(), y_.begin());
    std::copy(state.u.begin(), state.u.end(), y_.begin() + static_cast<std::ptrdiff_t>(n));
    impose(y_);

    auto f = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
      std::span<const double> ys(y);
      std::span<double> ds(dy);
      op_.evaluate(ys.first(n), ys.subspan(n), ds.first(n), ds.subspan(n));
      if (forcing_) {
        forcing_(t, ds.first(n), ds.subspan(n));
        ds[n] = 0.0;
        ds[n - 1] = 0.0;
        ds[2 * n - 1] = 0.0;
      }
    };
    try {
      rk4_advance(y_, state.t, dt, f, [&](std::vector<double>& y) { impose(y); }, k1_, k2_, k3_, k4_,
                  tmp_);
    } catch (const PositivityFault&) {
      return StepStatus::PositivityFault;
    } catch (const std::domain_error&) {
      return StepStatus::NonFinite;
    }
    for (double val : y_)
      if (!std::isfinite(val)) return StepStatus::NonFinite;
    for (std::size_t i = 0; i < n; ++i)
      if (y_[i] < v_floor) return StepStatus::PositivityFault;

    std::copy(y_.begin(), y_.begin() + static_cast<std::ptrdiff_t>(n), state.v.begin());
    std::copy(y_.begin() + static_cast<std::ptrdiff_t>(n), y_.end(), state.u.begin());
    state.t += dt;
    state.r = radius_from_state(state.v, grid(), params());
    return StepStatus::Ok;
  }

 private:
  void impose(std::vector<double>& y) const {
    const std::size_t n = grid().n();
    y[n] = 0.0;          // u_0
    y[n - 1] = 1.0;      // v_{n-1}
    y[2 * n - 1] = 0.0;  // u_{n-1}
  }

  SpatialOperator op_;
  Forcing forcing_;
  std::vector<double> y_, k1_, k2_, k3_, k4_, tmp_;
};

class StepFault : public std::runtime_error {
 public:
  StepFault(StepStatus status, const std::string& what) : std::runtime_error(what), status_(status) {}
  [[nodiscard]] StepStatus status() const { return status_; }

 private:
  StepStatus status_;
};

/// Single RK4 step; throws StepFault on positivity or non-finite failure.
inline State step(const State& state, const RadialGrid& grid, const ModelParams& params, double dt,
                  double v_floor = RunConfig{}.v_floor) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  Stepper stepper(grid, params);
  State next = state;
  const StepStatus s = stepper.advance(next, dt, v_floor);
  if (s == StepStatus::PositivityFault) throw StepFault(s, "step: positivity fault");
  if (s == StepStatus::NonFinite) throw StepFault(s, "step: non-finite value");
  return next;
}

/// Receives the run's states. on_step fires after every accepted step (and
/// once for the initial state with dt = 0); on_snapshot fires on the initial
/// state, every snapshot_every steps, and on the final state.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_step(std::size_t /*step*/, const State& /*state*/, double /*dt*/) {}
  virtual void on_snapshot(std::size_t /*step*/, double /*t*/, const State& /*state*/) {}
};

/// Advances `state` in place to config.t_end or the first fault.
inline RunSummary run(State& state, const RadialGrid& grid, const ModelParams& params,
                      const RunConfig& config, RunObserver* observer = nullptr,
                      Forcing forcing = {}) {
  if (const auto errors = validate(config); !errors.empty())
    throw std::invalid_argument("run: invalid config: " + errors.front());
  require_matching(grid, state.v.size(), "run");
  require_matching(grid, state.u.size(), "run");

  RunSummary summary;
  summary.final_time = state.t;
  auto track = [&](const State& s) {
    const auto [lo, hi] = std::minmax_element(s.v.begin(), s.v.end());
    summary.v_min_global = std::min(summary.v_min_global, *lo);
    summary.v_max_global = std::max(summary.v_max_global, *hi);
  };
  for (double val : state.v)
    if (!std::isfinite(val)) {
      summary.termination = Termination::NonFinite;
      return summary;
    }
  state.r = radius_from_state(state.v, grid, params);
  track(state);
  if (observer) {
    observer->on_step(0, state, 0.0);
    observer->on_snapshot(0, state.t, state);
  }

  Stepper stepper(grid, params, std::move(forcing));
  const double t_end = config.t_end;
  std::size_t last_snapshot = 0;
  while (t_end - state.t > config.dt_min) {
    double dt = config.fixed_dt ? *config.fixed_dt : stable_dt(state, grid, params, config);
    if (summary.steps == 0 && !config.fixed_dt) dt = std::min(dt, config.dt_init);
    if (!(dt >= config.dt_min)) {
      summary.termination = Termination::DtUnderflow;
      break;
    }
    dt = std::min(dt, t_end - state.t);
    const StepStatus status = stepper.advance(state, dt, config.v_floor);
    if (status != StepStatus::Ok) {
      summary.termination =
          status == StepStatus::PositivityFault ? Termination::PositivityFault : Termination::NonFinite;
      break;
    }
    ++summary.steps;
    track(state);
    if (observer) {
      observer->on_step(summary.steps, state, dt);
      if (summary.steps % config.snapshot_every == 0) {
        observer->on_snapshot(summary.steps, state.t, state);
        last_snapshot = summary.steps;
      }
    }
  }
  if (observer && summary.termination == Termination::Completed && last_snapshot != summary.steps)
    observer->on_snapshot(summary.steps, state.t, state);
  summary.final_time = state.t;
  return summary;
}

}  // namespace nsk
