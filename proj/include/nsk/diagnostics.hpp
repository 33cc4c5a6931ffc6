#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "nsk/integrate.hpp"
#include "nsk/model.hpp"
#include "nsk/spatial.hpp"
#include "nsk/state.hpp"

namespace nsk {

/// Phi(v) = int_1^v (p(1) - p(s)) ds.
inline double phi(double v, double gamma) {
  if (!(v > 0.0)) throw std::domain_error("phi: v must be positive");
  if (gamma == 1.0) return (v - 1.0) - std::log(v);
  return (v - 1.0) + (power(v, 1.0 - gamma) - 1.0) / (gamma - 1.0);
}

/// Psi(v) = (1 - v)^2 / (1 + v).
inline double psi(double v) {
  if (!(v > 0.0)) throw std::domain_error("psi: v must be positive");
  return (1.0 - v) * ((1.0 - v) / (1.0 + v));
}

/// Ratios comparing the entropy with Psi at one point; v = 1 is 0/0 and
/// must be excluded by the caller.
struct PhiPsiRatio {
  double rho_phi_over_psi;  ///< rho Phi / Psi
  double phi_over_psi;      ///< Phi / Psi
};

inline PhiPsiRatio phi_psi_ratio(double v, double gamma) {
  const double p = psi(v);
  const double f = phi(v, gamma);
  return {f / (v * p), f / p};
}

/// min of rho Phi / Psi over `samples` log-spaced points of [lo, hi] (v = 1 skipped).
inline double empirical_c0(double gamma, double lo = 0.05, double hi = 20.0, std::size_t samples = 4001) {
  double c0 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const double v = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(samples - 1));
    if (std::fabs(v - 1.0) < 1e-6) continue;
    c0 = std::min(c0, phi_psi_ratio(v, gamma).rho_phi_over_psi);
  }
  return c0;
}

/// Composite trapezoid rule on the uniform grid.
inline double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

/// Node quantities shared by the diagnostic functionals, built once per state
/// with the solver's ghost closure.
struct DiscreteView {
  ExtendedFields ext;
  std::vector<double> vx;   ///< D v at nodes (plus two ghost layers each side)
  std::vector<double> w;    ///< D (r^m u) at nodes
  std::vector<double> ux;   ///< D u at nodes
  double dx = 0.0;
  std::size_t n = 0;

  DiscreteView(const State& state, const RadialGrid& grid, const ModelParams& params) {
    ext = ghost_fill(state, grid, params);
    n = grid.n();
    dx = grid.dx();
    for (double v : ext.v)
      if (!(v > 0.0)) throw PositivityFault("diagnostics: v <= 0");
    const int m = params.m();
    const double inv2dx = 1.0 / (2.0 * dx);
    vx.assign(n + 4, 0.0);
    for (std::size_t k = 0; k < n + 4; ++k) {
      const std::size_t j = kGhost - 2 + k;
      vx[k] = (ext.v[j + 1] - ext.v[j - 1]) * inv2dx;
    }
    w.resize(n);
    ux.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = kGhost + i;
      w[i] = (power(ext.r[j + 1], m) * ext.u[j + 1] - power(ext.r[j - 1], m) * ext.u[j - 1]) * inv2dx;
      ux[i] = (ext.u[j + 1] - ext.u[j - 1]) * inv2dx;
    }
  }

  [[nodiscard]] double v(std::size_t i) const { return ext.v[kGhost + i]; }
  [[nodiscard]] double u(std::size_t i) const { return ext.u[kGhost + i]; }
  [[nodiscard]] double r(std::size_t i) const { return ext.r[kGhost + i]; }
  /// D v at node i for -2 <= i <= n + 1.
  [[nodiscard]] double dv(std::ptrdiff_t i) const { return vx[static_cast<std::size_t>(i + 2)]; }
};

inline double energy(const DiscreteView& d, const ModelParams& params) {
  const int m = params.m();
  std::vector<double> e(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    const double v = d.v(i);
    const double vx = d.dv(static_cast<std::ptrdiff_t>(i));
    e[i] = phi(v, params.gamma) + 0.5 * d.u(i) * d.u(i) +
           0.5 * power(d.r(i), 2 * m) * vx * vx * power(v, -(params.beta + 5.0));
  }
  return trapezoid(e, d.dx);
}

/// E = int (Phi(v) + u^2/2 + r^{2m} v_x^2 / (2 v^{beta+5})) dx.
inline double energy(const State& state, const RadialGrid& grid, const ModelParams& params) {
  return energy(DiscreteView(state, grid, params), params);
}

/// Instantaneous viscous dissipation. For the density-dependent model the
/// integrand is written as a sum of squares:
///   [(lambda + 2mu/(m+1)) w^2 + 2m mu/(m+1) (r^m u_x - u v / r)^2] / v^{alpha+1},
/// with w = (r^m u)_x.
inline double dissipation_rate(const DiscreteView& d, const ModelParams& params) {
  const int m = params.m();
  std::vector<double> q(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    const double v = d.v(i);
    const double w = d.w[i];
    if (params.kind == ModelKind::Kazhikhov) {
      q[i] = viscous_coefficient(v, params) * w * w / v;
    } else {
      const double mp1 = m + 1.0;
      const double shear = power(d.r(i), m) * d.ux[i] - d.u(i) * v / d.r(i);
      q[i] = ((params.lambda_tilde + 2.0 * params.mu_tilde / mp1) * w * w +
              2.0 * m * params.mu_tilde / mp1 * shear * shear) *
             power(v, -(params.alpha + 1.0));
    }
  }
  return trapezoid(q, d.dx);
}

inline double dissipation_rate(const State& state, const RadialGrid& grid, const ModelParams& params) {
  return dissipation_rate(DiscreteView(state, grid, params), params);
}

/// Energy flux R at node i (zero velocity makes all but the capillary
/// transport term vanish).
inline double energy_flux(const DiscreteView& d, const ModelParams& params, std::size_t i) {
  const int m = params.m();
  const std::size_t j = kGhost + i;
  const double inv2dx = 1.0 / (2.0 * d.dx);
  const double v = d.v(i);
  const double u = d.u(i);
  const double r = d.r(i);
  const double rm = power(r, m);
  const double r2m = rm * rm;
  const double w = d.w[i];
  const double vx = d.dv(static_cast<std::ptrdiff_t>(i));
  const double cap_exp = -(params.beta + 5.0);
  const double g = r2m * power(v, cap_exp) * vx;
  auto g_at = [&](std::size_t jj, std::ptrdiff_t node) {
    return power(d.ext.r[jj], 2 * m) * power(d.ext.v[jj], cap_exp) * d.dv(node);
  };
  const auto ii = static_cast<std::ptrdiff_t>(i);
  const double gx = (g_at(j + 1, ii + 1) - g_at(j - 1, ii - 1)) * inv2dx;
  const double cap_flux = gx + 0.5 * (params.beta + 5.0) * r2m * power(v, cap_exp - 1.0) * vx * vx;
  double viscous = 0.0;
  if (params.kind == ModelKind::Kazhikhov) {
    viscous = viscous_coefficient(v, params) * rm * u * w / v;
  } else {
    viscous = (2.0 * params.mu_tilde + params.lambda_tilde) * rm * u * w * power(v, -(params.alpha + 1.0));
    if (m != 0) viscous -= 2.0 * m * params.mu_tilde * power(r, m - 1) * u * u * power(v, -params.alpha);
  }
  return rm * u * (1.0 - power(v, -params.gamma)) + viscous + w * g - rm * u * cap_flux;
}

/// Rate at which energy enters through the two ends of the truncated domain.
inline double boundary_leak_rate(const DiscreteView& d, const ModelParams& params) {
  return energy_flux(d, params, d.n - 1) - energy_flux(d, params, 0);
}

/// Ῡ(v) = int_1^v sqrt(Psi(s)) s^{-(beta+5)/2} ds, evaluated in log variables.
inline double kanel(double v, double beta) {
  if (!(v > 0.0)) throw std::domain_error("kanel: v must be positive");
  if (v == 1.0) return 0.0;
  auto integrand = [beta](double y) {
    const double s = std::exp(y);
    return std::sqrt(psi(s)) * std::exp(-0.5 * (beta + 5.0) * y) * s;
  };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, std::log(v), 25,
                                                                       1e-12, &error);
}

struct KanelBracket {
  double bound = 0.0;  ///< B = ||sqrt(Psi(v))|| * ||v_x / v^{(beta+5)/2}||
  std::optional<double> lower;
  std::optional<double> upper;
};

namespace detail {
/// Solves |Ῡ(v)| = target on one side of v = 1 (direction = -1 or +1).
inline std::optional<double> invert_kanel(double target, double beta, int direction) {
  if (target == 0.0) return 1.0;
  auto g = [&](double y) { return std::fabs(kanel(std::exp(y), beta)) - target; };
  double inner = 0.0;
  double outer = 0.5 * direction;
  for (double go = g(outer); !(go >= 0.0); go = g(outer)) {
    if (std::isnan(go)) return std::nullopt;
    inner = outer;
    outer *= 2.0;
    if (std::fabs(outer) > 600.0) return std::nullopt;
  }
  double lo = std::min(inner, outer);
  double hi = std::max(inner, outer);
  boost::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(
      g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  if (iters >= 200) return std::nullopt;
  return std::exp(0.5 * (root.first + root.second));
}
}  // namespace detail

inline KanelBracket kanel_bracket(const DiscreteView& d, const ModelParams& params) {
  std::vector<double> a(d.n), b(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    const double v = d.v(i);
    const double vx = d.dv(static_cast<std::ptrdiff_t>(i));
    a[i] = psi(v);
    b[i] = vx * vx * power(v, -(params.beta + 5.0));
  }
  KanelBracket out;
  out.bound = std::sqrt(trapezoid(a, d.dx)) * std::sqrt(trapezoid(b, d.dx));
  out.lower = detail::invert_kanel(out.bound, params.beta, -1);
  out.upper = detail::invert_kanel(out.bound, params.beta, +1);
  return out;
}

inline KanelBracket kanel_bracket(const State& state, const RadialGrid& grid, const ModelParams& params) {
  return kanel_bracket(DiscreteView(state, grid, params), params);
}

/// ||f||_{k,r}: k = 0 gives sqrt(int r^{2m} f^2 dx); k = 1 adds int r^{2m} f_x^2 dx
/// with f_x by centred differences and second-order one-sided ends.
inline double weighted_norm(std::span<const double> f, std::span<const double> r, int k,
                            const RadialGrid& grid, int m) {
  require_matching(grid, f.size(), "weighted_norm");
  require_matching(grid, r.size(), "weighted_norm");
  if (k != 0 && k != 1) throw std::invalid_argument("weighted_norm: k must be 0 or 1");
  const std::size_t n = grid.n();
  const double dx = grid.dx();
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    double fx = 0.0;
    if (k == 1) {
      if (i == 0)
        fx = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
      else if (i == n - 1)
        fx = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
      else
        fx = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
    q[i] = power(r[i], 2 * m) * (f[i] * f[i] + fx * fx);
  }
  return std::sqrt(trapezoid(q, dx));
}

/// Roots alpha_1 < 1 < alpha_2 of Phi(x) = eps0.
inline std::pair<double, double> phi_roots(double eps0, double gamma) {
  if (!(eps0 > 0.0)) return {1.0, 1.0};
  auto g = [&](double y) { return phi(std::exp(y), gamma) - eps0; };
  auto solve = [&](double direction) {
    double inner = 0.0;
    double outer = 0.5 * direction;
    while (g(outer) < 0.0) {
      inner = outer;
      outer *= 2.0;
      if (std::fabs(outer) > 700.0) throw std::domain_error("phi_roots: no root in range");
    }
    boost::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(g, std::min(inner, outer), std::max(inner, outer),
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
    return std::exp(0.5 * (root.first + root.second));
  };
  return {solve(-1.0), solve(1.0)};
}

struct JensenWindow {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double v_mean = 1.0;
  double phi_of_mean = 0.0;
  double phi_mean = 0.0;  ///< (1/|window|) int_window Phi(v) dx
  bool jensen_ok = true;  ///< phi_of_mean <= phi_mean
  bool within_roots = true;  ///< alpha_1 <= v_mean <= alpha_2 whenever phi_mean <= eps0
};

struct JensenReport {
  double eps0 = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  std::vector<JensenWindow> windows;
};

/// Consecutive windows of `window` nodes sharing end nodes; pass
/// unit_window(grid) for windows of unit mass length.
inline JensenReport jensen_check(std::span<const double> v, const RadialGrid& grid, double gamma,
                                 std::size_t window, double eps0) {
  require_matching(grid, v.size(), "jensen_check");
  if (window < 2) throw std::invalid_argument("jensen_check: window must span at least 2 nodes");
  JensenReport rep;
  rep.eps0 = eps0;
  std::tie(rep.alpha1, rep.alpha2) = phi_roots(eps0, gamma);
  const double dx = grid.dx();
  std::vector<double> phis(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) phis[i] = phi(v[i], gamma);
  for (std::size_t lo = 0; lo + window <= v.size(); lo += window - 1) {
    JensenWindow w;
    w.x_lo = grid.x(lo);
    w.x_hi = grid.x(lo + window - 1);
    const double len = w.x_hi - w.x_lo;
    w.v_mean = trapezoid(v.subspan(lo, window), dx) / len;
    w.phi_of_mean = phi(w.v_mean, gamma);
    w.phi_mean = trapezoid(std::span<const double>(phis).subspan(lo, window), dx) / len;
    w.jensen_ok = w.phi_of_mean <= w.phi_mean + 1e-14;
    if (w.phi_mean <= eps0)
      w.within_roots = w.v_mean >= rep.alpha1 * (1.0 - 1e-12) && w.v_mean <= rep.alpha2 * (1.0 + 1e-12);
    rep.windows.push_back(w);
  }
  return rep;
}

inline std::size_t unit_window(const RadialGrid& grid) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(1.0 / grid.dx())) + 1);
}

/// Instantaneous integrals from the higher-order estimate chain.
struct Lemma24Report {
  double vx2_v2a2 = 0.0;    ///< int v_x^2 / v^{2 alpha + 2}
  double vx2_va2 = 0.0;     ///< int v_x^2 / v^{alpha + 2}
  double vx2_vag2 = 0.0;    ///< int v_x^2 / v^{alpha + gamma + 2}
  double vxx2 = 0.0;        ///< int r^{2m} v_xx^2 / v^{alpha + beta + 6}
  double composite = 0.0;   ///< int [(r^m v^{-(alpha+beta+6)/2} v_x)_x]^2
  double w_over_rm = 0.0;   ///< ||(r^m u)_x / r^m||
  double vxxx_0r = 0.0;     ///< ||v_xxx||_{0,r}
};

inline Lemma24Report monitor_lemma24(const DiscreteView& d, const ModelParams& params) {
  const int m = params.m();
  const std::size_t n = d.n;
  const double dx = d.dx;
  const double a = params.alpha;
  const double b = params.beta;
  const auto& ve = d.ext.v;
  const auto& re = d.ext.r;
  // v_xx = D(D v), the nested stencil of the solver. The compact second
  // difference would also see the odd-even mode, which the nested operator
  // neither drives nor damps.
  auto vxx_at = [&](std::ptrdiff_t i) { return (d.dv(i + 1) - d.dv(i - 1)) / (2.0 * dx); };
  std::vector<double> q1(n), q0(n), q2(n), q3(n), q4(n), q5(n), q6(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = kGhost + i;
    const auto ii = static_cast<std::ptrdiff_t>(i);
    const double v = d.v(i);
    const double vx = d.dv(ii);
    const double r2m = power(d.r(i), 2 * m);
    q1[i] = vx * vx * power(v, -(2.0 * a + 2.0));
    q0[i] = vx * vx * power(v, -(a + 2.0));
    q2[i] = vx * vx * power(v, -(a + params.gamma + 2.0));
    const double vxx = vxx_at(ii);
    q3[i] = r2m * vxx * vxx * power(v, -(a + b + 6.0));
    auto h = [&](std::size_t jj, std::ptrdiff_t node) {
      return power(re[jj], m) * power(ve[jj], -0.5 * (a + b + 6.0)) * d.dv(node);
    };
    const double hx = (h(j + 1, ii + 1) - h(j - 1, ii - 1)) / (2.0 * dx);
    q4[i] = hx * hx;
    const double wr = d.w[i] / power(d.r(i), m);
    q5[i] = wr * wr;
    const double vxxx = (vxx_at(ii + 1) - vxx_at(ii - 1)) / (2.0 * dx);
    q6[i] = r2m * vxxx * vxxx;
  }
  Lemma24Report rep;
  rep.vx2_v2a2 = trapezoid(q1, dx);
  rep.vx2_va2 = trapezoid(q0, dx);
  rep.vx2_vag2 = trapezoid(q2, dx);
  rep.vxx2 = trapezoid(q3, dx);
  rep.composite = trapezoid(q4, dx);
  rep.w_over_rm = std::sqrt(trapezoid(q5, dx));
  rep.vxxx_0r = std::sqrt(trapezoid(q6, dx));
  return rep;
}

inline Lemma24Report monitor_lemma24(const State& state, const RadialGrid& grid, const ModelParams& params) {
  return monitor_lemma24(DiscreteView(state, grid, params), params);
}

struct EnergyLedger {
  double E = 0.0;
  double E0 = 0.0;
  double D_cum = 0.0;
  double boundary_leak = 0.0;
  double defect = 0.0;  ///< E + D_cum - boundary_leak - E0
};

/// One time-series row, written at every snapshot.
struct DiagnosticsRow {
  std::size_t step = 0;
  double t = 0.0;
  EnergyLedger ledger;
  double v_min = 0.0;
  double v_max = 0.0;
  KanelBracket kanel;
  double norm_v_minus_1_H1 = 0.0;
  double norm_u_H1 = 0.0;
  double norm_vx_1r = 0.0;
  Lemma24Report lemma24;
  /// Time integrals of the dissipation-type lemma24 integrals.
  double acc_vx2_vag2 = 0.0;
  double acc_vxx2 = 0.0;
  double acc_composite = 0.0;
};

/// Run observer that keeps the energy ledger (time integrals by the
/// trapezoid rule over accepted steps) and records a row per snapshot.
class DiagnosticsRecorder : public RunObserver {
 public:
  DiagnosticsRecorder(const RadialGrid& grid, const ModelParams& params, bool with_kanel = true)
      : grid_(grid), params_(params), with_kanel_(with_kanel) {}

  void on_step(std::size_t /*step*/, const State& state, double dt) override {
    const DiscreteView d(state, grid_, params_);
    const double e = energy(d, params_);
    const double dis = dissipation_rate(d, params_);
    const double leak = boundary_leak_rate(d, params_);
    const Lemma24Report lm = monitor_lemma24(d, params_);
    if (!started_) {
      started_ = true;
      ledger_ = {};
      ledger_.E0 = e;
    } else {
      ledger_.D_cum += 0.5 * dt * (prev_dis_ + dis);
      ledger_.boundary_leak += 0.5 * dt * (prev_leak_ + leak);
      acc_[0] += 0.5 * dt * (prev_lm_.vx2_vag2 + lm.vx2_vag2);
      acc_[1] += 0.5 * dt * (prev_lm_.vxx2 + lm.vxx2);
      acc_[2] += 0.5 * dt * (prev_lm_.composite + lm.composite);
    }
    ledger_.E = e;
    ledger_.defect = ledger_.E + ledger_.D_cum - ledger_.boundary_leak - ledger_.E0;
    prev_dis_ = dis;
    prev_leak_ = leak;
    prev_lm_ = lm;
  }

  void on_snapshot(std::size_t step, double t, const State& state) override {
    const DiscreteView d(state, grid_, params_);
    DiagnosticsRow row;
    row.step = step;
    row.t = t;
    row.ledger = ledger_;
    const auto [lo, hi] = std::minmax_element(state.v.begin(), state.v.end());
    row.v_min = *lo;
    row.v_max = *hi;
    if (with_kanel_) {
      row.kanel = kanel_bracket(d, params_);
      if (row.kanel.lower) lower_env_ = std::min(lower_env_.value_or(*row.kanel.lower), *row.kanel.lower);
      if (row.kanel.upper) upper_env_ = std::max(upper_env_.value_or(*row.kanel.upper), *row.kanel.upper);
    }
    std::vector<double> a(d.n), b(d.n), dvx(d.n);
    for (std::size_t i = 0; i < d.n; ++i) {
      const double vx = d.dv(static_cast<std::ptrdiff_t>(i));
      a[i] = (d.v(i) - 1.0) * (d.v(i) - 1.0) + vx * vx;
      b[i] = d.u(i) * d.u(i) + d.ux[i] * d.ux[i];
      dvx[i] = vx;
    }
    row.norm_v_minus_1_H1 = std::sqrt(trapezoid(a, d.dx));
    row.norm_u_H1 = std::sqrt(trapezoid(b, d.dx));
    std::vector<double> r(d.n);
    for (std::size_t i = 0; i < d.n; ++i) r[i] = d.r(i);
    row.norm_vx_1r = weighted_norm(dvx, r, 1, grid_, params_.m());
    row.lemma24 = monitor_lemma24(d, params_);
    row.acc_vx2_vag2 = acc_[0];
    row.acc_vxx2 = acc_[1];
    row.acc_composite = acc_[2];
    rows_.push_back(row);
  }

  [[nodiscard]] const EnergyLedger& ledger() const { return ledger_; }
  [[nodiscard]] const std::vector<DiagnosticsRow>& rows() const { return rows_; }
  /// Envelope of the per-snapshot brackets: the run-level prediction.
  [[nodiscard]] KanelBracket kanel_envelope() const {
    KanelBracket k;
    k.lower = lower_env_;
    k.upper = upper_env_;
    for (const auto& row : rows_) k.bound = std::max(k.bound, row.kanel.bound);
    return k;
  }

 private:
  RadialGrid grid_;
  ModelParams params_;
  bool with_kanel_;
  bool started_ = false;
  EnergyLedger ledger_;
  double prev_dis_ = 0.0;
  double prev_leak_ = 0.0;
  Lemma24Report prev_lm_;
  double acc_[3] = {0.0, 0.0, 0.0};
  std::optional<double> lower_env_;
  std::optional<double> upper_env_;
  std::vector<DiagnosticsRow> rows_;
};

inline void write_timeseries_header(std::ostream& os) {
  os << "step,t,E,D_cum,boundary_leak,defect,v_min,v_max,kanel_lower,kanel_upper,"
        "norm_v_minus_1_H1,norm_u_H1,norm_vx_1r,lemma24_vx2_v2a2,lemma24_vx2_va2,"
        "lemma24_vx2_vag2,lemma24_vxx2,lemma24_composite,lemma24_acc_vx2_vag2,"
        "lemma24_acc_vxx2,lemma24_acc_composite,w_over_rm,vxxx_0r\n";
}

inline void write_timeseries_row(std::ostream& os, const DiagnosticsRow& row) {
  const auto old = os.precision(17);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  os << row.step << ',' << row.t << ',' << row.ledger.E << ',' << row.ledger.D_cum << ','
     << row.ledger.boundary_leak << ',' << row.ledger.defect << ',' << row.v_min << ',' << row.v_max
     << ',' << row.kanel.lower.value_or(nan) << ',' << row.kanel.upper.value_or(nan) << ','
     << row.norm_v_minus_1_H1 << ',' << row.norm_u_H1 << ',' << row.norm_vx_1r << ','
     << row.lemma24.vx2_v2a2 << ',' << row.lemma24.vx2_va2 << ',' << row.lemma24.vx2_vag2 << ','
     << row.lemma24.vxx2 << ',' << row.lemma24.composite << ',' << row.acc_vx2_vag2 << ','
     << row.acc_vxx2 << ',' << row.acc_composite << ',' << row.lemma24.w_over_rm << ','
     << row.lemma24.vxxx_0r << '\n';
  os.precision(old);
}

}  // namespace nsk
