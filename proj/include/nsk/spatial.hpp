#pragma once

// Discrete right-hand side of the Lagrangian NSK system on the uniform mass
// grid. The momentum equation is assembled in flux form:
//
//   v_t = (r^m u)_x
//   u_t = -r^m p(v)_x + r^m F_x - m r^{2m-1} v^{-(beta+5)} v_x^2  [+ DD source]
//   F   = (2 mu + lambda)(v) (r^m u)_x / v
//         - (r^{2m} v^{-(beta+5)} v_x)_x - (beta+5)/2 r^{2m} v^{-(beta+6)} v_x^2
//
// Every x-derivative is the centred difference D f_i = (f_{i+1} - f_{i-1}) / 2dx,
// nested where the flux itself contains derivatives.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsk/geometry.hpp"
#include "nsk/model.hpp"
#include "nsk/state.hpp"

namespace nsk {

/// Raised when a specific volume is non-positive where the operator needs it.
class PositivityFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ghost layers on each side: the momentum stencil reaches v_{i±3}.
constexpr std::size_t kGhost = 3;

/// Node fields padded with kGhost layers on both ends. Index i of the grid
/// lives at storage index i + kGhost.
struct ExtendedFields {
  std::vector<double> v;
  std::vector<double> u;
  std::vector<double> r;

  [[nodiscard]] std::size_t interior() const { return v.size() - 2 * kGhost; }
};

/// Coefficient (2 mu + lambda)(v) in front of the divergence in the viscous flux.
inline double viscous_coefficient(double v, const ModelParams& params) {
  const double v_pow = power(v, -params.alpha);
  if (params.kind == ModelKind::Kazhikhov) return 2.0 * params.mu_tilde + params.lambda_tilde * v_pow;
  return (2.0 * params.mu_tilde + params.lambda_tilde) * v_pow;
}

namespace detail {

inline void check_fields(std::span<const double> v, std::span<const double> u) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || !std::isfinite(u[i]))
      throw std::domain_error("spatial operator: non-finite input at node " + std::to_string(i));
    if (!(v[i] > 0.0))
      throw PositivityFault("spatial operator: v <= 0 at node " + std::to_string(i));
  }
}

}  // namespace detail

/// Pads (v, u) with the wall reflection on the left (v even, u odd, u_0 = 0)
/// and the far-field state (1, 0) on the right. The radius is rebuilt from v
/// and continued through the ghosts with the same r^{m+1} integral.
inline void ghost_fill(std::span<const double> v, std::span<const double> u,
                       const RadialGrid& grid, const ModelParams& params, ExtendedFields& out) {
  require_matching(grid, v.size(), "ghost_fill");
  require_matching(grid, u.size(), "ghost_fill");
  const std::size_t n = grid.n();
  const std::size_t g = kGhost;
  out.v.resize(n + 2 * g);
  out.u.resize(n + 2 * g);
  out.r.resize(n + 2 * g);

  for (std::size_t i = 0; i < n; ++i) {
    out.v[g + i] = v[i];
    out.u[g + i] = u[i];
  }
  out.u[g] = 0.0;
  for (std::size_t k = 1; k <= g; ++k) {
    out.v[g - k] = v[k];
    out.u[g - k] = -u[k];
    out.v[g + n - 1 + k] = 1.0;
    out.u[g + n - 1 + k] = 0.0;
  }

  // s = r^{m+1}; s_i = a^{m+1} + (m+1) * trapezoid(v).
  const int m = params.m();
  const double mp1 = m + 1.0;
  const double dx = grid.dx();
  const double s_wall = power(params.a, mp1);
  const auto root = [&](double s) {
    if (!(s > 0.0)) throw std::invalid_argument("ghost_fill: radius ghost below the origin; refine the grid");
    return detail::radius_root(s, m);
  };
  std::vector<double> s(n);
  s[0] = s_wall;
  for (std::size_t i = 1; i < n; ++i) s[i] = s[i - 1] + mp1 * 0.5 * dx * (v[i - 1] + v[i]);
  out.r[g] = params.a;
  for (std::size_t i = 1; i < n; ++i) out.r[g + i] = root(s[i]);
  for (std::size_t k = 1; k <= g; ++k) {
    out.r[g - k] = root(2.0 * s_wall - s[k]);
    out.r[g + n - 1 + k] = root(s[n - 1] + mp1 * dx * static_cast<double>(k));
  }
}

inline ExtendedFields ghost_fill(const State& state, const RadialGrid& grid,
                                 const ModelParams& params) {
  ExtendedFields out;
  ghost_fill(state.v, state.u, grid, params, out);
  return out;
}

/// Reusable workspace for the flux-form operator. Not thread-safe; use one
/// per thread.
class SpatialOperator {
 public:
  SpatialOperator(const RadialGrid& grid, const ModelParams& params) : grid_(grid), params_(params) {
    if (grid.n() < 5) throw std::domain_error("SpatialOperator: need at least 5 nodes");
    const std::size_t ext = grid.n() + 2 * kGhost;
    for (auto* buf : {&rm_, &r2m_, &ru_, &p_, &dv_, &g_, &w_, &flux_}) buf->assign(ext, 0.0);
  }

  [[nodiscard]] const RadialGrid& grid() const { return grid_; }
  [[nodiscard]] const ModelParams& params() const { return params_; }
  /// Ghost-padded fields from the most recent evaluation.
  [[nodiscard]] const ExtendedFields& extended() const { return ext_; }

  /// Writes dv/dt and du/dt at every node. The wall velocity and both
  /// far-field unknowns have zero time derivative.
  void evaluate(std::span<const double> v, std::span<const double> u, std::span<double> dvdt,
                std::span<double> dudt) {
    require_matching(grid_, v.size(), "rhs");
    require_matching(grid_, u.size(), "rhs");
    require_matching(grid_, dvdt.size(), "rhs");
    require_matching(grid_, dudt.size(), "rhs");
    detail::check_fields(v, u);
    ghost_fill(v, u, grid_, params_, ext_);

    const std::size_t n = grid_.n();
    const std::size_t ext = n + 2 * kGhost;
    const std::size_t g = kGhost;
    const int m = params_.m();
    const double inv2dx = 1.0 / (2.0 * grid_.dx());
    const double cap_exp = -(params_.beta + 5.0);
    const double half_b5 = 0.5 * (params_.beta + 5.0);
    const auto& ve = ext_.v;
    const auto& ue = ext_.u;
    const auto& re = ext_.r;

    for (std::size_t j = 0; j < ext; ++j) {
      rm_[j] = power(re[j], m);
      r2m_[j] = rm_[j] * rm_[j];
      ru_[j] = rm_[j] * ue[j];
      p_[j] = power(ve[j], -params_.gamma);
    }
    for (std::size_t j = 1; j + 1 < ext; ++j) {
      dv_[j] = (ve[j + 1] - ve[j - 1]) * inv2dx;
      g_[j] = r2m_[j] * power(ve[j], cap_exp) * dv_[j];
    }
    for (std::size_t j = 2; j + 2 < ext; ++j) {
      w_[j] = (ru_[j + 1] - ru_[j - 1]) * inv2dx;
      const double capillary = (g_[j + 1] - g_[j - 1]) * inv2dx +
                               half_b5 * r2m_[j] * power(ve[j], cap_exp - 1.0) * dv_[j] * dv_[j];
      flux_[j] = viscous_coefficient(ve[j], params_) * w_[j] / ve[j] - capillary;
    }

    const bool dd = params_.kind == ModelKind::DensityDependent;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = g + i;
      dvdt[i] = w_[j];
      double acc = -rm_[j] * (p_[j + 1] - p_[j - 1]) * inv2dx +
                   rm_[j] * (flux_[j + 1] - flux_[j - 1]) * inv2dx;
      if (m != 0) {
        acc -= m * r2m_[j] / re[j] * power(ve[j], cap_exp) * dv_[j] * dv_[j];
        if (dd)
          acc += 2.0 * m * params_.mu_tilde * params_.alpha * power(ve[j], -(params_.alpha + 1.0)) *
                 rm_[j] / re[j] * ue[j] * dv_[j];
      }
      dudt[i] = acc;
    }
    dudt[0] = 0.0;
    dvdt[n - 1] = 0.0;
    dudt[n - 1] = 0.0;
  }

 private:
  RadialGrid grid_;
  ModelParams params_;
  ExtendedFields ext_;
  std::vector<double> rm_, r2m_, ru_, p_, dv_, g_, w_, flux_;
};

struct Rhs {
  std::vector<double> dvdt;
  std::vector<double> dudt;
};

/// One-shot evaluation of the discrete right-hand side.
inline Rhs rhs(const State& state, const RadialGrid& grid, const ModelParams& params) {
  SpatialOperator op(grid, params);
  Rhs out{std::vector<double>(grid.n()), std::vector<double>(grid.n())};
  op.evaluate(state.v, state.u, out.dvdt, out.dudt);
  return out;
}

}  // namespace nsk
