#pragma once

// Manufactured-solution and cross-oracle checks for the discrete operator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsk/geometry.hpp"
#include "nsk/integrate.hpp"
#include "nsk/model.hpp"
#include "nsk/spatial.hpp"
#include "nsk/state.hpp"

namespace nsk::verify {

/// Compactly supported polynomial bump (1 - s^2)^k on |s| < 1.
struct PolyBump {
  int k = 10;

  [[nodiscard]] double value(double s) const {
    if (std::fabs(s) >= 1.0) return 0.0;
    return power(1.0 - s * s, k);
  }
  [[nodiscard]] double derivative(double s) const {
    if (std::fabs(s) >= 1.0) return 0.0;
    return -2.0 * k * s * power(1.0 - s * s, k - 1);
  }
  /// int_0^s (1 - t^2)^k dt, clamped to |s| <= 1.
  [[nodiscard]] double integral(double s) const {
    const double c = std::clamp(s, -1.0, 1.0);
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      sum += (j % 2 == 0 ? 1.0 : -1.0) * binom * power(c, 2 * j + 1) / (2.0 * j + 1.0);
      binom = binom * (k - j) / (j + 1.0);
    }
    return sum;
  }
};

/// One even (v) or odd (u) mirrored bump pair centred at +-center.
struct BumpTerm {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
};

/// Smooth pair compatible with the wall conditions and equal to (1, 0)
/// beyond the support of every bump:
///   v(x)   = 1 + sum A/2 [phi((x-c)/w) + phi((x+c)/w)]
///   u(t,x) = b(t) sum B/2 [psi((x-c)/w) + psi((x+c)/w)],  psi(s) = s phi(s)
/// with b(t) = cos(omega t).
struct ManufacturedCase {
  std::vector<BumpTerm> v_terms;
  std::vector<BumpTerm> u_terms;
  double omega = 0.0;
  PolyBump shape{};
  std::string name = "case";

  [[nodiscard]] double b(double t) const { return std::cos(omega * t); }
  [[nodiscard]] double b_dot(double t) const { return -omega * std::sin(omega * t); }

  [[nodiscard]] double v(double x) const {
    double s = 1.0;
    for (const auto& term : v_terms)
      s += 0.5 * term.amplitude *
           (shape.value((x - term.center) / term.width) + shape.value((x + term.center) / term.width));
    return s;
  }
  [[nodiscard]] double v_x(double x) const {
    double s = 0.0;
    for (const auto& term : v_terms)
      s += 0.5 * term.amplitude / term.width *
           (shape.derivative((x - term.center) / term.width) +
            shape.derivative((x + term.center) / term.width));
    return s;
  }
  /// int_0^x v(y) dy in closed form.
  [[nodiscard]] double v_integral(double x) const {
    double s = x;
    for (const auto& term : v_terms) {
      const double w = term.width;
      const double c = term.center;
      s += 0.5 * term.amplitude * w *
           (shape.integral((x - c) / w) - shape.integral(-c / w) + shape.integral((x + c) / w) -
            shape.integral(c / w));
    }
    return s;
  }
  [[nodiscard]] double u_profile(double x) const {
    double s = 0.0;
    for (const auto& term : u_terms) {
      const double a = (x - term.center) / term.width;
      const double c = (x + term.center) / term.width;
      s += 0.5 * term.amplitude * (a * shape.value(a) + c * shape.value(c));
    }
    return s;
  }
  [[nodiscard]] double u_profile_x(double x) const {
    double s = 0.0;
    for (const auto& term : u_terms) {
      const double a = (x - term.center) / term.width;
      const double c = (x + term.center) / term.width;
      s += 0.5 * term.amplitude / term.width *
           (shape.value(a) + a * shape.derivative(a) + shape.value(c) + c * shape.derivative(c));
    }
    return s;
  }
  [[nodiscard]] double u(double t, double x) const { return b(t) * u_profile(x); }

  /// Exact radius: r^{m+1} = a^{m+1} + (m+1) int_0^x v.
  [[nodiscard]] double r(double x, const ModelParams& params) const {
    const int m = params.m();
    const double s = power(params.a, m + 1.0) + (m + 1.0) * v_integral(x);
    return detail::radius_root(s, m);
  }

  /// Samples of (v, u) at time t on the grid, with the radius by the
  /// solver's own trapezoid reconstruction.
  [[nodiscard]] State sample(double t, const RadialGrid& grid, const ModelParams& params) const {
    State s;
    s.t = t;
    s.v.resize(grid.n());
    s.u.resize(grid.n());
    for (std::size_t i = 0; i < grid.n(); ++i) {
      s.v[i] = v(grid.x(i));
      s.u[i] = u(t, grid.x(i));
    }
    s.u[0] = 0.0;
    s.r = radius_from_state(s.v, grid, params);
    return s;
  }
};

/// The equilibrium pair (1, 0).
inline ManufacturedCase equilibrium_case() {
  ManufacturedCase c;
  c.name = "equilibrium";
  return c;
}

/// Default bump pair: a wall-centred v bump and a u bump reaching the wall.
inline ManufacturedCase bump_case() {
  ManufacturedCase c;
  c.name = "bump";
  c.v_terms = {{0.3, 0.0, 2.5}, {-0.1, 1.5, 1.2}};
  c.u_terms = {{0.4, 0.5, 2.0}};
  c.omega = 3.0;
  return c;
}

/// Random smooth static pair for cross-oracle checks.
inline ManufacturedCase random_case(std::mt19937_64& rng, double x_extent) {
  std::uniform_real_distribution<double> amp(-0.25, 0.25);
  std::uniform_real_distribution<double> cen(0.0, 0.5 * x_extent);
  std::uniform_real_distribution<double> wid(0.35 * x_extent, 0.5 * x_extent);
  ManufacturedCase c;
  c.name = "random";
  for (int k = 0; k < 2; ++k) c.v_terms.push_back({amp(rng), cen(rng), wid(rng)});
  for (int k = 0; k < 2; ++k) c.u_terms.push_back({2.0 * amp(rng), cen(rng), wid(rng)});
  return c;
}

/// Sixth-order central difference of f at x with step h.
template <class F>
double d1_sixth(F&& f, double x, double h) {
  return (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) + 45.0 * f(x + h) -
          9.0 * f(x + 2.0 * h) + f(x + 3.0 * h)) /
         (60.0 * h);
}

constexpr double kDiffStep = 2e-3;

/// Continuous right-hand side of the system at (t, x) for the case, with
/// the x-derivatives of composite fluxes taken by sixth-order differences.
struct ExactRhs {
  double dvdt = 0.0;
  double dudt = 0.0;
};

inline ExactRhs exact_rhs(const ManufacturedCase& mc, const ModelParams& params, double t, double x,
                          double h = kDiffStep) {
  const int m = params.m();
  const double b5 = params.beta + 5.0;
  const double bt = mc.b(t);
  auto R = [&](double y) { return mc.r(y, params); };
  auto W = [&](double y) {
    const double r = R(y);
    const double rm = power(r, m);
    const double u = bt * mc.u_profile(y);
    const double ux = bt * mc.u_profile_x(y);
    return rm * ux + (m == 0 ? 0.0 : m * u * mc.v(y) / r);
  };
  auto G = [&](double y) { return power(R(y), 2 * m) * power(mc.v(y), -b5) * mc.v_x(y); };
  auto F = [&](double y) {
    const double v = mc.v(y);
    const double vx = mc.v_x(y);
    const double cap = d1_sixth(G, y, h) + 0.5 * b5 * power(R(y), 2 * m) * power(v, -b5 - 1.0) * vx * vx;
    return viscous_coefficient(v, params) * W(y) / v - cap;
  };
  const double v = mc.v(x);
  const double vx = mc.v_x(x);
  const double r = R(x);
  const double rm = power(r, m);
  ExactRhs out;
  out.dvdt = W(x);
  double du = rm * params.gamma * power(v, -params.gamma - 1.0) * vx + rm * d1_sixth(F, x, h);
  if (m != 0) {
    du -= m * power(r, 2 * m - 1) * power(v, -b5) * vx * vx;
    if (params.kind == ModelKind::DensityDependent)
      du += 2.0 * m * params.mu_tilde * params.alpha * power(v, -(params.alpha + 1.0)) * power(r, m - 1) *
            bt * mc.u_profile(x) * vx;
  }
  out.dudt = du;
  return out;
}

/// Node forcing for the case. The continuous RHS is affine in b(t), so it
/// is split once into RHS = M0 + b(t) M1 and the source
///   S = d/dt(exact) - RHS
/// is then cheap to evaluate at every stage.
class ManufacturedForcing {
 public:
  ManufacturedForcing(const ManufacturedCase& mc, const RadialGrid& grid, const ModelParams& params,
                      double h = kDiffStep)
      : mc_(mc) {
    const std::size_t n = grid.n();
    c1_.resize(n);
    m0_.resize(n);
    m1_.resize(n);
    profile_.resize(n);
    ManufacturedCase still = mc;
    still.omega = 0.0;  // b = 1
    ManufacturedCase frozen = mc;
    frozen.u_terms.clear();  // b-independent part
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.x(i);
      const ExactRhs with_u = exact_rhs(still, params, 0.0, x, h);
      const ExactRhs without_u = exact_rhs(frozen, params, 0.0, x, h);
      c1_[i] = with_u.dvdt;
      m0_[i] = without_u.dudt;
      m1_[i] = with_u.dudt - without_u.dudt;
      profile_[i] = mc.u_profile(x);
    }
  }

  void operator()(double t, std::span<double> dvdt, std::span<double> dudt) const {
    const double b = mc_.b(t);
    const double bd = mc_.b_dot(t);
    for (std::size_t i = 0; i < dvdt.size(); ++i) {
      dvdt[i] -= b * c1_[i];
      dudt[i] += bd * profile_[i] - m0_[i] - b * m1_[i];
    }
  }

  /// Exact continuous RHS at node i and time t.
  [[nodiscard]] ExactRhs rhs_at(std::size_t i, double t) const {
    const double b = mc_.b(t);
    return {b * c1_[i], m0_[i] + b * m1_[i]};
  }

 private:
  ManufacturedCase mc_;
  std::vector<double> c1_, m0_, m1_, profile_;
};

struct LevelError {
  std::size_t n = 0;
  double dx = 0.0;
  double dt = 0.0;
  double error = 0.0;
};

enum class OrderVerdict { Measured, Exact, InsufficientLevels, Fault };

inline const char* to_string(OrderVerdict v) {
  switch (v) {
    case OrderVerdict::Measured: return "measured";
    case OrderVerdict::Exact: return "exact";
    case OrderVerdict::InsufficientLevels: return "insufficient levels";
    case OrderVerdict::Fault: return "fault";
  }
  return "?";
}

struct OrderResult {
  std::vector<LevelError> levels;
  OrderVerdict verdict = OrderVerdict::Measured;
  double order = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

constexpr double kExactFloor = 1e-13;
/// Levels coarser than this carry no usable asymptotic information.
constexpr std::size_t kMinUsefulNodes = 17;

/// Least-squares slope of log(error) against log(dx).
inline double fitted_order(const std::vector<LevelError>& levels) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double k = static_cast<double>(levels.size());
  for (const auto& l : levels) {
    const double lx = std::log(l.dx);
    const double ly = std::log(l.error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

namespace detail {
inline void finish(OrderResult& res) {
  std::size_t useful = 0;
  bool all_exact = true;
  for (const auto& l : res.levels) {
    if (l.n >= kMinUsefulNodes) ++useful;
    if (l.error > kExactFloor) all_exact = false;
  }
  if (all_exact) {
    res.verdict = OrderVerdict::Exact;
  } else if (useful < 3) {
    res.verdict = OrderVerdict::InsufficientLevels;
  } else {
    res.verdict = OrderVerdict::Measured;
    res.order = fitted_order(res.levels);
  }
}
inline void check_ladder(std::span<const std::size_t> n_list) {
  if (n_list.empty()) throw std::invalid_argument("ladder is empty");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("ladder must be strictly increasing");
}
inline bool too_few_levels(std::span<const std::size_t> n_list) {
  return std::count_if(n_list.begin(), n_list.end(), [](std::size_t n) { return n >= kMinUsefulNodes; }) < 3;
}
}  // namespace detail

/// Max-norm distance between discrete and continuous RHS over the evolved
/// unknowns (u_0, v_{n-1}, u_{n-1} are held by the boundary conditions).
inline double max_rhs_error(const Rhs& discrete, const ManufacturedForcing& exact, double t = 0.0) {
  const std::size_t n = discrete.dvdt.size();
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const ExactRhs ex = exact.rhs_at(i, t);
    err = std::max(err, std::fabs(discrete.dvdt[i] - ex.dvdt));
    if (i > 0) err = std::max(err, std::fabs(discrete.dudt[i] - ex.dudt));
  }
  return err;
}

/// Max-norm residual of the discrete operator against the continuous RHS at
/// t = 0 for each n, and the fitted order.
inline OrderResult mms_spatial_order(const ManufacturedCase& mc, const ModelParams& params,
                                     double x_max, std::span<const std::size_t> n_list,
                                     double h = kDiffStep) {
  detail::check_ladder(n_list);
  OrderResult res;
  if (detail::too_few_levels(n_list)) {
    res.verdict = OrderVerdict::InsufficientLevels;
    return res;
  }
  for (std::size_t n : n_list) {
    const RadialGrid grid(n, x_max);
    const State s = mc.sample(0.0, grid, params);
    const Rhs discrete = rhs(s, grid, params);
    const ManufacturedForcing forcing(mc, grid, params, h);
    res.levels.push_back({n, grid.dx(), 0.0, max_rhs_error(discrete, forcing)});
  }
  detail::finish(res);
  return res;
}

struct LadderLevel {
  std::size_t n = 0;
  double dt = 0.0;
};

/// Forced runs to t_end on each (n, dt) level; error is the max-norm
/// distance to the exact pair at t_end.
inline OrderResult mms_full_order(const ManufacturedCase& mc, const ModelParams& params, double x_max,
                                  std::span<const LadderLevel> ladder, double t_end,
                                  double h = kDiffStep) {
  std::vector<std::size_t> ns;
  for (const auto& l : ladder) ns.push_back(l.n);
  detail::check_ladder(ns);
  OrderResult res;
  if (detail::too_few_levels(ns)) {
    res.verdict = OrderVerdict::InsufficientLevels;
    return res;
  }
  for (const auto& level : ladder) {
    const RadialGrid grid(level.n, x_max);
    State s = mc.sample(0.0, grid, params);
    RunConfig cfg;
    cfg.t_end = t_end;
    cfg.fixed_dt = level.dt;
    cfg.dt_min = std::min(cfg.dt_min, level.dt);
    cfg.dt_init = std::max(cfg.dt_init, level.dt);
    const ManufacturedForcing forcing(mc, grid, params, h);
    const RunSummary sum = run(s, grid, params, cfg, nullptr, forcing);
    if (sum.termination != Termination::Completed) {
      res.verdict = OrderVerdict::Fault;
      res.note = std::string("level n=") + std::to_string(level.n) + " terminated: " + to_string(sum.termination);
      return res;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < level.n; ++i) {
      const double x = grid.x(i);
      err = std::max({err, std::fabs(s.v[i] - mc.v(x)), std::fabs(s.u[i] - mc.u(s.t, x))});
    }
    res.levels.push_back({level.n, grid.dx(), level.dt, err});
  }
  detail::finish(res);
  return res;
}

/// Independent, term-by-term expanded discretisation of the same system.
/// Geometric factors are differentiated analytically with r_x = v / r^m;
/// only constitutive fluxes are differenced. Intended for small grids.
inline Rhs brute_force_rhs(const State& state, const RadialGrid& grid, const ModelParams& params) {
  const std::size_t n = grid.n();
  if (n < 5) throw std::domain_error("brute_force_rhs: need at least 5 nodes");
  if (state.v.size() != n || state.u.size() != n) throw std::invalid_argument("brute_force_rhs: size mismatch");
  const int m = params.m();
  const double dx = grid.dx();
  const double b5 = params.beta + 5.0;
  constexpr long pad = 3;
  const long total = static_cast<long>(n) + 2 * pad;

  // Padded copies, index p = i + pad.
  std::vector<double> v(total), u(total), r(total);
  for (long i = 0; i < static_cast<long>(n); ++i) {
    v[i + pad] = state.v[i];
    u[i + pad] = state.u[i];
  }
  u[pad] = 0.0;
  for (long k = 1; k <= pad; ++k) {
    v[pad - k] = state.v[k];
    u[pad - k] = -state.u[k];
    v[pad + n - 1 + k] = 1.0;
    u[pad + n - 1 + k] = 0.0;
  }
  // Cumulative volume from the wall through every padded node.
  std::vector<double> vol(total, 0.0);
  for (long p = pad + 1; p < total; ++p) vol[p] = vol[p - 1] + dx * 0.5 * (v[p] + v[p - 1]);
  for (long p = pad - 1; p >= 0; --p) vol[p] = vol[p + 1] - dx * 0.5 * (v[p] + v[p + 1]);
  for (long p = 0; p < total; ++p) {
    const double s = std::pow(params.a, m + 1.0) + (m + 1.0) * vol[p];
    if (!(s > 0.0)) throw std::invalid_argument("brute_force_rhs: grid too coarse near the wall");
    r[p] = std::pow(s, 1.0 / (m + 1.0));
  }
  r[pad] = params.a;

  auto diff = [&](const std::vector<double>& f, long p) { return (f[p + 1] - f[p - 1]) / (2.0 * dx); };
  auto rp = [&](long p, double e) { return std::pow(r[p], e); };

  std::vector<double> vx(total, 0.0), a(total, 0.0), q(total, 0.0), pp(total, 0.0), visc(total, 0.0),
      pres(total, 0.0);
  for (long p = 1; p + 1 < total; ++p) vx[p] = diff(v, p);
  for (long p = 0; p < total; ++p) pres[p] = std::pow(v[p], -params.gamma);
  for (long p = 1; p + 1 < total; ++p) {
    a[p] = std::pow(v[p], -b5) * vx[p];
    pp[p] = std::pow(v[p], -(b5 - 1.0)) * vx[p];
  }
  for (long p = 2; p + 2 < total; ++p) {
    q[p] = diff(a, p) + 0.5 * b5 * std::pow(v[p], -b5 - 1.0) * vx[p] * vx[p];
    const double w = rp(p, m) * diff(u, p) + (m == 0 ? 0.0 : m * u[p] * v[p] / r[p]);
    double coeff = 0.0;
    if (params.kind == ModelKind::Kazhikhov)
      coeff = 2.0 * params.mu_tilde + params.lambda_tilde * std::pow(v[p], -params.alpha);
    else
      coeff = (2.0 * params.mu_tilde + params.lambda_tilde) * std::pow(v[p], -params.alpha);
    visc[p] = coeff * w / v[p];
  }

  Rhs out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const long p = i + pad;
    const double rm = rp(p, m);
    out.dvdt[i] = rm * diff(u, p) + (m == 0 ? 0.0 : m * u[p] * v[p] / r[p]);
    double cap_x = rp(p, 2 * m) * diff(q, p);
    if (m != 0) {
      cap_x += 2.0 * m * rp(p, m - 1) * v[p] * q[p] + 2.0 * m * rp(p, m - 1) * diff(pp, p) +
               2.0 * m * (m - 1.0) * rp(p, -2) * v[p] * pp[p];
    }
    double du = -rm * diff(pres, p) + rm * (diff(visc, p) - cap_x);
    if (m != 0) {
      du -= m * rp(p, 2 * m - 1) * std::pow(v[p], -b5) * vx[p] * vx[p];
      if (params.kind == ModelKind::DensityDependent)
        du += 2.0 * m * params.mu_tilde * params.alpha * std::pow(v[p], -(params.alpha + 1.0)) *
              rp(p, m - 1) * u[p] * vx[p];
    }
    out.dudt[i] = du;
  }
  out.dudt[0] = 0.0;
  out.dvdt[n - 1] = 0.0;
  out.dudt[n - 1] = 0.0;
  return out;
}

}  // namespace nsk::verify
