#pragma once

// Eulerian <-> Lagrangian coordinate machinery for the exterior domain
// r >= a. The mass coordinate x = int_a^r z^m rho(z) dz turns the moving
// domain into the fixed half-line, with d(r^{m+1})/dx = (m+1) v.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nsk/model.hpp"
#include "nsk/state.hpp"

namespace nsk {

constexpr double kQuadTol = 1e-12;

namespace detail {
/// s^{1/(m+1)}.
inline double radius_root(double s, int m) {
  switch (m) {
    case 0: return s;
    case 1: return std::sqrt(s);
    case 2: return std::cbrt(s);
    default: return std::pow(s, 1.0 / (m + 1.0));
  }
}
}  // namespace detail

/// h(r) = int_a^r z^m rho0(z) dz by adaptive Gauss-Kronrod quadrature.
template <class Density>
double mass_coordinate(double r, Density&& rho0, const ModelParams& params,
                       double quad_tol = kQuadTol) {
  if (r < params.a) throw std::domain_error("mass_coordinate: r < a");
  if (r == params.a) return 0.0;
  const int m = params.m();
  auto integrand = [&](double z) { return power(z, m) * rho0(z); };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, params.a, r, 20,
                                                                       quad_tol, &error);
}

/// Same quadrature split at known non-smooth points of rho0 (breakpoints
/// outside (a, r) are ignored).
template <class Density>
double mass_coordinate(double r, Density&& rho0, const ModelParams& params,
                       std::span<const double> breakpoints, double quad_tol = kQuadTol) {
  if (r < params.a) throw std::domain_error("mass_coordinate: r < a");
  const int m = params.m();
  auto integrand = [&](double z) { return power(z, m) * rho0(z); };
  double total = 0.0;
  double lo = params.a;
  auto segment = [&](double from, double to) {
    if (to <= from) return;
    double error = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, from, to, 20,
                                                                           quad_tol, &error);
  };
  for (double b : breakpoints) {
    if (b <= lo || b >= r) continue;
    segment(lo, b);
    lo = b;
  }
  segment(lo, r);
  return total;
}

/// r_i = (a^{m+1} + (m+1) int_0^{x_i} v dy)^{1/(m+1)} with the composite
/// trapezoid rule; r_0 = a exactly.
inline std::vector<double> radius_from_state(std::span<const double> v, const RadialGrid& grid,
                                             const ModelParams& params) {
  require_matching(grid, v.size(), "radius_from_state");
  const int m = params.m();
  const double mp1 = m + 1.0;
  const double dx = grid.dx();
  const double base = power(params.a, mp1);
  std::vector<double> r(v.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw std::domain_error("radius_from_state: non-positive specific volume");
    if (i > 0) integral += 0.5 * dx * (v[i - 1] + v[i]);
    r[i] = i == 0 ? params.a : detail::radius_root(base + mp1 * integral, m);
  }
  return r;
}

/// Eulerian samples (r, rho, u_radial) at the Lagrangian nodes.
struct EulerianTable {
  std::vector<double> r;
  std::vector<double> rho;
  std::vector<double> u;
};

inline EulerianTable to_eulerian(const State& state, const RadialGrid& grid,
                                 const ModelParams& params) {
  require_matching(grid, state.v.size(), "to_eulerian");
  require_matching(grid, state.u.size(), "to_eulerian");
  EulerianTable table;
  table.r = radius_from_state(state.v, grid, params);
  table.rho.resize(state.v.size());
  for (std::size_t i = 0; i < state.v.size(); ++i) table.rho[i] = 1.0 / state.v[i];
  table.u = state.u;
  return table;
}

/// Lagrangian state recovered from an Eulerian table whose first row sits
/// on the wall r = a. Mass coordinates of the rows are accumulated as the
/// exact inverse of the trapezoid radius map; the fields are then resampled
/// onto a uniform grid of n_out nodes (default: one per row) with monotone
/// piecewise-cubic interpolation.
inline std::pair<State, RadialGrid> from_eulerian(const EulerianTable& table,
                                                  const ModelParams& params,
                                                  std::size_t n_out = 0) {
  const std::size_t rows = table.r.size();
  if (rows < 4 || table.rho.size() != rows || table.u.size() != rows)
    throw std::domain_error("from_eulerian: need at least 4 consistent rows");
  if (std::fabs(table.r.front() - params.a) > 1e-12 * std::max(1.0, params.a))
    throw std::domain_error("from_eulerian: first row must lie on r = a");
  for (std::size_t j = 1; j < rows; ++j)
    if (!(table.r[j] > table.r[j - 1]))
      throw std::domain_error("from_eulerian: radius table is not strictly increasing");
  for (double rho : table.rho)
    if (!(rho > 0.0)) throw std::domain_error("from_eulerian: non-positive density");

  const double mp1 = params.m() + 1.0;
  std::vector<double> x(rows), v(rows);
  for (std::size_t j = 0; j < rows; ++j) v[j] = 1.0 / table.rho[j];
  x[0] = 0.0;
  for (std::size_t j = 1; j < rows; ++j) {
    const double ds = (power(table.r[j], mp1) - power(table.r[j - 1], mp1)) / mp1;
    x[j] = x[j - 1] + 2.0 * ds / (v[j] + v[j - 1]);
  }

  const std::size_t n = n_out == 0 ? rows : n_out;
  RadialGrid grid(n, x.back());
  using boost::math::interpolators::pchip;
  pchip<std::vector<double>> v_of_x{std::vector<double>(x), std::vector<double>(v)};
  pchip<std::vector<double>> u_of_x{std::vector<double>(x), std::vector<double>(table.u)};

  State state;
  state.v.resize(n);
  state.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = std::min(grid.x(i), x.back());
    state.v[i] = v_of_x(xi);
    state.u[i] = u_of_x(xi);
  }
  state.v.back() = v.back();
  state.u.back() = table.u.back();
  state.r = radius_from_state(state.v, grid, params);
  return {std::move(state), grid};
}

/// Eulerian density of a Lagrangian profile, taking v piecewise linear in x
/// between nodes (the profile the trapezoid radius map integrates exactly).
/// Beyond the last node v is held at its final value.
class LagrangianDensityProfile {
 public:
  LagrangianDensityProfile(std::span<const double> v, const RadialGrid& grid,
                           const ModelParams& params)
      : v_(v.begin(), v.end()),
        r_(radius_from_state(v, grid, params)),
        dx_(grid.dx()),
        mp1_(params.m() + 1.0) {}

  /// Node radii: the kinks of the profile.
  [[nodiscard]] const std::vector<double>& breakpoints() const { return r_; }

  double operator()(double z) const {
    if (z < r_.front()) throw std::domain_error("LagrangianDensityProfile: z < a");
    auto it = std::upper_bound(r_.begin(), r_.end(), z);
    if (it == r_.end()) return 1.0 / v_.back();
    const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
    // (m+1)^{-1} (z^{m+1} - r_i^{m+1}) = v_i s + (v_{i+1} - v_i) s^2 / (2 dx)
    const double target = (power(z, mp1_) - power(r_[i], mp1_)) / mp1_;
    const double b = v_[i];
    const double c = (v_[i + 1] - v_[i]) / (2.0 * dx_);
    const double s = std::fabs(c) < 1e-300 ? target / b : 2.0 * target / (b + std::sqrt(b * b + 4.0 * c * target));
    return 1.0 / (v_[i] + (v_[i + 1] - v_[i]) * s / dx_);
  }

 private:
  std::vector<double> v_;
  std::vector<double> r_;
  double dx_;
  double mp1_;
};

inline void write_eulerian_csv(std::ostream& os, const EulerianTable& table) {
  const auto old_precision = os.precision(17);
  os << "r,rho,u_radial\n";
  for (std::size_t i = 0; i < table.r.size(); ++i)
    os << table.r[i] << ',' << table.rho[i] << ',' << table.u[i] << '\n';
  os.precision(old_precision);
}

}  // namespace nsk
