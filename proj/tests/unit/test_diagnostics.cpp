#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nsk/diagnostics.hpp"

using namespace nsk;

namespace {
ModelParams params(int dim, ModelKind kind = ModelKind::Kazhikhov, double alpha = 0.0) {
  ModelParams p;
  p.kind = kind;
  p.dim = dim;
  p.alpha = alpha;
  p.beta = -2.0;
  p.gamma = 2.0;
  p.lambda_tilde = 0.3;
  return p;
}

State bump(const RadialGrid& g, double amp = 0.2, double w = 1.0) {
  State s;
  s.v.resize(g.n());
  s.u.resize(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double x = g.x(i) / w;
    s.v[i] = 1.0 + amp * std::exp(-x * x);
    s.u[i] = amp * x * std::exp(-x * x);
  }
  s.v.back() = 1.0;
  s.u.back() = 0.0;
  return s;
}

// Composite Simpson on [a, b] with 2k panels.
template <class F>
double simpson(F f, double a, double b, int k = 20000) {
  const double h = (b - a) / (2.0 * k);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * k; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}
}  // namespace

TEST(Potentials, PhiAndPsiValues) {
  EXPECT_DOUBLE_EQ(phi(2.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(phi(0.5, 2.0), 0.5);
  EXPECT_NEAR(phi(std::numbers::e, 1.0), std::numbers::e - 2.0, 1e-15);
  EXPECT_EQ(phi(1.0, 1.4), 0.0);
  EXPECT_DOUBLE_EQ(psi(3.0), 1.0);
  EXPECT_EQ(psi(1.0), 0.0);
  EXPECT_THROW(phi(0.0, 2.0), std::domain_error);
  EXPECT_THROW(psi(-1.0), std::domain_error);
  const auto r = phi_psi_ratio(2.0, 2.0);
  EXPECT_DOUBLE_EQ(r.phi_over_psi, 0.5 / (1.0 / 3.0));
  EXPECT_DOUBLE_EQ(r.rho_phi_over_psi, r.phi_over_psi / 2.0);
}

TEST(Potentials, EquivalenceConstantPositive) {
  for (double g : {1.0, 1.4, 2.0, 3.0}) EXPECT_GT(empirical_c0(g), 0.0) << g;
}

TEST(Potentials, PhiRoots) {
  const auto [a1, a2] = phi_roots(0.5, 2.0);
  EXPECT_NEAR(a1, 0.5, 1e-13);
  EXPECT_NEAR(a2, 2.0, 1e-13);
  for (double g : {1.0, 1.4, 3.0}) {
    const auto [lo, hi] = phi_roots(0.1, g);
    EXPECT_NEAR(phi(lo, g), 0.1, 1e-12);
    EXPECT_NEAR(phi(hi, g), 0.1, 1e-12);
    EXPECT_LT(lo, 1.0);
    EXPECT_GT(hi, 1.0);
  }
}

TEST(Quadrature, Trapezoid) {
  const std::vector<double> f{0.0, 1.0, 4.0};
  EXPECT_DOUBLE_EQ(trapezoid(f, 0.5), 0.5 * (0.0 + 2.0 * 1.0 + 4.0) / 2.0);
  EXPECT_EQ(trapezoid(std::vector<double>{1.0}, 1.0), 0.0);
}

TEST(Energy, Values) {
  const auto p = params(2);
  const RadialGrid g(65, 4.0);
  State s;
  s.v.assign(g.n(), 1.0);
  s.u.assign(g.n(), 0.0);
  EXPECT_EQ(energy(s, g, p), 0.0);
  for (std::size_t i = 0; i < g.n(); ++i) s.u[i] = std::sin(std::numbers::pi * g.x(i) / 4.0);
  EXPECT_NEAR(energy(s, g, p), 1.0, 1e-13);
}

TEST(Energy, PotentialPartForPlanarConstantInterior) {
  // v = 2 on interior nodes; v_x is nonzero only near the right end.
  const auto p = params(1);
  const RadialGrid g(41, 4.0);
  State s;
  s.v.assign(g.n(), 2.0);
  s.v.back() = 1.0;
  s.u.assign(g.n(), 0.0);
  double expected_phi = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) expected_phi += (i == 0 || i + 1 == g.n() ? 0.5 : 1.0) * phi(s.v[i], 2.0);
  expected_phi *= g.dx();
  const double dx = g.dx();
  const double vx_last = (1.0 - 2.0) / (2.0 * dx);          // node n-2
  const double vx_end = (1.0 - 2.0) / (2.0 * dx);           // node n-1, ghost v = 1
  const double cap = dx * (vx_last * vx_last * 0.5 * std::pow(2.0, -3.0) +
                           0.5 * vx_end * vx_end * 0.5 * 1.0);
  EXPECT_NEAR(energy(s, g, p), expected_phi + cap, 1e-12);
}

TEST(Dissipation, DensityDependentSumOfSquaresMatchesStandardForm) {
  // lambda w^2 + 2 mu (A^2 + m B^2) with A = r^m u_x, B = v u / r and
  // w = A + m B; the discrete w obeys the product rule only to O(dx^2).
  for (int dim : {2, 3}) {
    auto p = params(dim, ModelKind::DensityDependent, 0.7);
    double prev = 0.0;
    for (std::size_t n : {129, 257, 513}) {
      const RadialGrid g(n, 6.0);
      const auto s = bump(g, 0.3);
      const DiscreteView d(s, g, p);
      const int m = p.m();
      std::vector<double> q(g.n());
      for (std::size_t i = 0; i < g.n(); ++i) {
        const double A = std::pow(d.r(i), m) * d.ux[i];
        const double B = d.v(i) * d.u(i) / d.r(i);
        q[i] = (p.lambda_tilde * d.w[i] * d.w[i] + 2.0 * p.mu_tilde * (A * A + m * B * B)) *
               std::pow(d.v(i), -(p.alpha + 1.0));
      }
      const double ref = trapezoid(q, g.dx());
      const double gap = std::fabs(dissipation_rate(d, p) - ref);
      EXPECT_LT(gap, 5e-3 * ref);
      if (prev > 0.0) EXPECT_GT(prev / gap, 3.5);
      prev = gap;
    }
  }
}

TEST(Dissipation, NonNegative) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> amp(-0.3, 0.3);
  for (int k = 0; k < 10; ++k) {
    for (auto kind : {ModelKind::Kazhikhov, ModelKind::DensityDependent}) {
      const auto p = params(3, kind, 1.0);
      const RadialGrid g(65, 4.0);
      auto s = bump(g, amp(rng));
      for (std::size_t i = 1; i + 1 < g.n(); ++i) s.u[i] += 0.1 * amp(rng);
      EXPECT_GE(dissipation_rate(s, g, p), 0.0);
    }
  }
}

TEST(EnergyFlux, VanishesAtRestFarField) {
  const auto p = params(3);
  const RadialGrid g(129, 8.0);
  const DiscreteView d(bump(g), g, p);
  EXPECT_EQ(energy_flux(d, p, 0), 0.0);
  EXPECT_LE(std::fabs(boundary_leak_rate(d, p)), 1e-12);
}

TEST(Kanel, AgreesWithDirectQuadrature) {
  for (double beta : {-5.0, -3.0, -2.0}) {
    auto f = [beta](double s) { return std::sqrt(psi(s)) * std::pow(s, -0.5 * (beta + 5.0)); };
    for (double v : {0.3, 0.8, 1.5, 4.0}) {
      const double ref = v > 1.0 ? simpson(f, 1.0, v) : -simpson(f, v, 1.0);
      EXPECT_NEAR(kanel(v, beta), ref, 1e-9 * std::max(1.0, std::fabs(ref))) << beta << ' ' << v;
    }
  }
}

TEST(Kanel, MonotoneAndSigned) {
  double prev = -std::numeric_limits<double>::infinity();
  for (double v = 0.05; v < 20.0; v *= 1.3) {
    const double k = kanel(v, -2.5);
    EXPECT_GT(k, prev);
    EXPECT_EQ(k > 0.0, v > 1.0);
    prev = k;
  }
  EXPECT_EQ(kanel(1.0, -2.5), 0.0);
}

TEST(Kanel, BracketContainsState) {
  for (double beta : {-3.0, -2.5, -2.0}) {
    auto p = params(3);
    p.beta = beta;
    const RadialGrid g(257, 8.0);
    for (double amp : {-0.4, 0.1, 0.5}) {
      const auto s = bump(g, amp);
      const auto k = kanel_bracket(s, g, p);
      ASSERT_TRUE(k.lower && k.upper);
      EXPECT_NEAR(std::fabs(kanel(*k.lower, beta)), k.bound, 1e-10);
      EXPECT_NEAR(kanel(*k.upper, beta), k.bound, 1e-10);
      const auto [lo, hi] = std::minmax_element(s.v.begin(), s.v.end());
      EXPECT_LE(*k.lower, *lo);
      EXPECT_GE(*k.upper, *hi);
    }
  }
}

TEST(Kanel, UnboundedSideReportsUnavailable) {
  // For beta > -2 the v > 1 branch is bounded, so a large bound has no upper root.
  EXPECT_FALSE(detail::invert_kanel(1e6, 0.0, +1).has_value());
  EXPECT_EQ(detail::invert_kanel(0.0, -2.0, +1), 1.0);
}

TEST(WeightedNorm, ConstantAndPlanarCases) {
  const RadialGrid g(201, 2.0);
  const std::vector<double> one(g.n(), 1.0);
  std::vector<double> r(g.n(), 1.0);
  EXPECT_NEAR(weighted_norm(one, r, 0, g, 0), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(weighted_norm(one, r, 1, g, 0), std::sqrt(2.0), 1e-14);
  std::vector<double> lin(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) lin[i] = g.x(i);
  // int_0^2 (x^2 + 1) dx = 14/3; trapezoid error is dx^2 * 2 / 6 * ... = O(1e-4).
  EXPECT_NEAR(weighted_norm(lin, r, 1, g, 0), std::sqrt(14.0 / 3.0), 1e-4);
  for (std::size_t i = 0; i < g.n(); ++i) r[i] = 2.0;
  EXPECT_NEAR(weighted_norm(one, r, 0, g, 2), 4.0 * std::sqrt(2.0), 1e-13);
  EXPECT_THROW(weighted_norm(one, r, 2, g, 0), std::invalid_argument);
}

TEST(Jensen, WindowsAndConvexity) {
  const RadialGrid g(17, 4.0);
  EXPECT_EQ(unit_window(g), 5u);
  std::vector<double> v(g.n(), 1.0);
  auto rep = jensen_check(v, g, 2.0, unit_window(g), 0.5);
  ASSERT_EQ(rep.windows.size(), 4u);
  EXPECT_DOUBLE_EQ(rep.windows[1].x_lo, 1.0);
  EXPECT_DOUBLE_EQ(rep.windows[1].x_hi, 2.0);
  EXPECT_NEAR(rep.alpha1, 0.5, 1e-13);
  for (const auto& w : rep.windows) EXPECT_TRUE(w.jensen_ok && w.within_roots);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.2, 5.0);
  const RadialGrid g2(401, 20.0);
  std::vector<double> rv(g2.n());
  for (int trial = 0; trial < 20; ++trial) {
    for (double& x : rv) x = d(rng);
    rep = jensen_check(rv, g2, 1.4, unit_window(g2), 0.3);
    for (const auto& w : rep.windows) {
      EXPECT_TRUE(w.jensen_ok);
      EXPECT_TRUE(w.within_roots);
    }
  }
  EXPECT_THROW(jensen_check(v, g, 2.0, 1, 0.5), std::invalid_argument);
}

TEST(HigherOrderMonitor, SmallAmplitudeQuadraticScaling) {
  const auto p = params(3, ModelKind::Kazhikhov, 0.5);
  const RadialGrid g(1025, 8.0);
  auto gp = [](double x) { return -2.0 * x * std::exp(-x * x); };
  std::vector<double> ref(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) ref[i] = gp(g.x(i)) * gp(g.x(i));
  const double integral = trapezoid(ref, g.dx());
  for (double eps : {1e-3, 1e-4}) {
    State s;
    s.v.resize(g.n());
    s.u.assign(g.n(), 0.0);
    for (std::size_t i = 0; i < g.n(); ++i) s.v[i] = 1.0 + eps * std::exp(-g.x(i) * g.x(i));
    const auto rep = monitor_lemma24(s, g, p);
    EXPECT_NEAR(rep.vx2_v2a2 / (eps * eps), integral, 1e-2 * integral);
    EXPECT_NEAR(rep.vx2_va2 / (eps * eps), integral, 1e-2 * integral);
    EXPECT_NEAR(rep.vx2_vag2 / (eps * eps), integral, 1e-2 * integral);
    EXPECT_EQ(rep.w_over_rm, 0.0);
  }
}

TEST(Recorder, LedgerDefectShrinksUnderRefinement) {
  const auto p = params(2);
  double prev = 0.0;
  for (std::size_t n : {129, 257}) {
    const RadialGrid g(n, 8.0);
    auto s = bump(g, 0.2);
    DiagnosticsRecorder rec(g, p, false);
    RunConfig c;
    c.t_end = 0.05;
    c.snapshot_every = 1000000;
    ASSERT_EQ(run(s, g, p, c, &rec).termination, Termination::Completed);
    const auto& l = rec.ledger();
    EXPECT_GT(l.D_cum, 0.0);
    EXPECT_LT(l.E, l.E0);
    EXPECT_NEAR(l.defect, l.E + l.D_cum - l.boundary_leak - l.E0, 1e-15);
    if (prev > 0.0) EXPECT_GT(prev / std::fabs(l.defect), 3.0);
    prev = std::fabs(l.defect);
    EXPECT_EQ(rec.rows().size(), 2u);
  }
}

TEST(Recorder, EnvelopeAndCsv) {
  const auto p = params(3);
  const RadialGrid g(129, 8.0);
  auto s = bump(g, 0.3);
  DiagnosticsRecorder rec(g, p);
  RunConfig c;
  c.t_end = 0.02;
  c.snapshot_every = 10;
  ASSERT_EQ(run(s, g, p, c, &rec).termination, Termination::Completed);
  const auto env = rec.kanel_envelope();
  ASSERT_TRUE(env.lower && env.upper);
  for (const auto& row : rec.rows()) {
    EXPECT_LE(*env.lower, row.v_min);
    EXPECT_GE(*env.upper, row.v_max);
    EXPECT_GE(row.acc_vxx2, 0.0);
  }
  std::ostringstream os;
  write_timeseries_header(os);
  write_timeseries_row(os, rec.rows().back());
  const auto text = os.str();
  const auto header = text.substr(0, text.find('\n'));
  const auto row = text.substr(text.find('\n') + 1);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}
