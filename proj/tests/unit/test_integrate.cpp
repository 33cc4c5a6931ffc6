#include <gtest/gtest.h>

#include <cmath>

#include "nsk/integrate.hpp"

using namespace nsk;

namespace {
ModelParams params(int dim = 2) {
  ModelParams p;
  p.dim = dim;
  p.beta = -2.0;
  p.gamma = 2.0;
  return p;
}

State bump(const RadialGrid& g, double amp = 0.2) {
  State s;
  s.v.resize(g.n());
  s.u.resize(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double x = g.x(i);
    s.v[i] = 1.0 + amp * std::exp(-x * x);
    s.u[i] = amp * x * std::exp(-x * x);
  }
  s.v.back() = 1.0;
  s.u.back() = 0.0;
  return s;
}

struct Counter : RunObserver {
  std::size_t steps = 0, snapshots = 0;
  std::vector<double> snapshot_times;
  void on_step(std::size_t, const State&, double) override { ++steps; }
  void on_snapshot(std::size_t, double t, const State&) override {
    ++snapshots;
    snapshot_times.push_back(t);
  }
};
}  // namespace

TEST(Rk4, GlobalFourthOrderOnLinearDecay) {
  auto solve = [](double dt) {
    std::vector<double> y{1.0};
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int k = 0; k < steps; ++k)
      rk4_advance(y, k * dt, dt, [](double, const std::vector<double>& z, std::vector<double>& dz) {
        dz[0] = -z[0];
      });
    return std::fabs(y[0] - std::exp(-1.0));
  };
  const double ratio = solve(0.1) / solve(0.05);
  EXPECT_NEAR(ratio, 16.0, 1.0);
}

TEST(Rk4, AfterStageHookSeesEveryStage) {
  std::vector<double> y{0.0}, k1, k2, k3, k4, tmp;
  int calls = 0;
  rk4_advance(y, 0.0, 0.1, [](double, const std::vector<double>&, std::vector<double>& d) { d[0] = 1.0; },
              [&](std::vector<double>&) { ++calls; }, k1, k2, k3, k4, tmp);
  EXPECT_EQ(calls, 4);
  EXPECT_NEAR(y[0], 0.1, 1e-15);
}

TEST(Run, EquilibriumUnchanged) {
  const auto p = params(3);
  const RadialGrid g(129, 8.0);
  State s;
  s.v.assign(g.n(), 1.0);
  s.u.assign(g.n(), 0.0);
  RunConfig c;
  c.t_end = 0.05;
  const auto sum = run(s, g, p, c);
  EXPECT_EQ(sum.termination, Termination::Completed);
  EXPECT_GT(sum.steps, 0u);
  for (std::size_t i = 0; i < g.n(); ++i) {
    EXPECT_EQ(s.v[i], 1.0);
    EXPECT_EQ(s.u[i], 0.0);
  }
  EXPECT_NEAR(sum.final_time, 0.05, 1e-15);
}

TEST(Run, ZeroEndTimeTakesNoSteps) {
  const RadialGrid g(33, 4.0);
  auto s = bump(g);
  const auto before = s;
  RunConfig c;
  c.t_end = 0.0;
  Counter obs;
  const auto sum = run(s, g, params(), c, &obs);
  EXPECT_EQ(sum.termination, Termination::Completed);
  EXPECT_EQ(sum.steps, 0u);
  EXPECT_EQ(s.v, before.v);
  EXPECT_EQ(obs.steps, 1u);
  EXPECT_EQ(obs.snapshots, 1u);
}

TEST(Run, Deterministic) {
  const RadialGrid g(65, 4.0);
  RunConfig c;
  c.t_end = 0.02;
  auto a = bump(g), b = bump(g);
  const auto sa = run(a, g, params(), c);
  const auto sb = run(b, g, params(), c);
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(a.u, b.u);
}

TEST(Run, SnapshotCadenceIncludesFinalState) {
  const RadialGrid g(33, 4.0);
  auto s = bump(g);
  RunConfig c;
  c.t_end = 0.01;
  c.fixed_dt = 0.0007;
  c.snapshot_every = 5;
  Counter obs;
  const auto sum = run(s, g, params(), c, &obs);
  ASSERT_EQ(sum.termination, Termination::Completed);
  EXPECT_EQ(sum.steps, 15u);
  EXPECT_EQ(obs.steps, 16u);
  EXPECT_EQ(obs.snapshots, 1u + 3u);
  EXPECT_NEAR(obs.snapshot_times.back(), 0.01, 1e-15);
}

TEST(Run, BoundaryValuesHeld) {
  const RadialGrid g(65, 4.0);
  auto s = bump(g);
  RunConfig c;
  c.t_end = 0.05;
  ASSERT_EQ(run(s, g, params(3), c).termination, Termination::Completed);
  EXPECT_EQ(s.u.front(), 0.0);
  EXPECT_EQ(s.u.back(), 0.0);
  EXPECT_EQ(s.v.back(), 1.0);
  EXPECT_EQ(s.r.front(), 1.0);
}

TEST(Run, TimeOrderUnderFixedStep) {
  const RadialGrid g(33, 4.0);
  const auto p = params(2);
  auto solve = [&](double dt) {
    auto s = bump(g);
    RunConfig c;
    c.t_end = 0.02;
    c.fixed_dt = dt;
    EXPECT_EQ(run(s, g, p, c).termination, Termination::Completed);
    return s;
  };
  const double dt0 = 0.5 * stable_dt(bump(g), g, p);
  const auto ref = solve(dt0 / 16.0);
  auto err = [&](const State& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) e = std::max({e, std::fabs(s.v[i] - ref.v[i]), std::fabs(s.u[i] - ref.u[i])});
    return e;
  };
  const double e1 = err(solve(dt0)), e2 = err(solve(dt0 / 2.0));
  EXPECT_GT(e1 / e2, 12.0);
}

TEST(StableDt, ScalesWithGridSquared) {
  const auto p = params(3);
  const RadialGrid g1(257, 8.0), g2(513, 8.0);
  const double ratio = stable_dt(bump(g1), g1, p) / stable_dt(bump(g2), g2, p);
  EXPECT_NEAR(ratio, 4.0, 0.1);
}

TEST(StableDt, NonIncreasingInViscosityAndDomain) {
  const RadialGrid g(129, 8.0);
  const auto s = bump(g);
  auto p = params(3);
  double prev = std::numeric_limits<double>::infinity();
  for (double mu : {0.1, 0.5, 1.0, 4.0, 16.0}) {
    p.mu_tilde = mu;
    const double dt = stable_dt(s, g, p);
    EXPECT_LE(dt, prev);
    prev = dt;
  }
  p = params(3);
  prev = std::numeric_limits<double>::infinity();
  for (std::size_t n : {65, 129, 257}) {
    const RadialGrid gx(n, 0.0625 * static_cast<double>(n - 1));
    const double dt = stable_dt(bump(gx), gx, p);
    EXPECT_LE(dt, prev);
    prev = dt;
  }
}

TEST(StableDt, HonoursCap) {
  const RadialGrid g(33, 4.0);
  RunConfig c;
  c.dt_max = 1e-7;
  EXPECT_EQ(stable_dt(bump(g), g, params(), c), 1e-7);
}

TEST(Run, OverlargeStepFaults) {
  const RadialGrid g(129, 8.0);
  auto s = bump(g, 0.3);
  RunConfig c;
  c.t_end = 1.0;
  c.fixed_dt = 0.01;
  const auto sum = run(s, g, params(3), c);
  EXPECT_TRUE(sum.termination == Termination::NonFinite || sum.termination == Termination::PositivityFault);
  EXPECT_LT(sum.final_time, 1.0);
}

TEST(Run, DtUnderflow) {
  const RadialGrid g(257, 8.0);
  auto s = bump(g);
  RunConfig c;
  c.t_end = 1.0;
  c.dt_min = 1e-2;
  c.dt_init = 1e-2;
  const auto sum = run(s, g, params(), c);
  EXPECT_EQ(sum.termination, Termination::DtUnderflow);
  EXPECT_EQ(sum.steps, 0u);
}

TEST(Run, InvalidConfigRejected) {
  const RadialGrid g(33, 4.0);
  auto s = bump(g);
  RunConfig c;
  c.cfl_visc = 0.0;
  EXPECT_THROW(run(s, g, params(), c), std::invalid_argument);
  c = {};
  c.snapshot_every = 0;
  EXPECT_FALSE(validate(c).empty());
  EXPECT_TRUE(validate(RunConfig{}).empty());
}

TEST(Step, ThrowsOnFault) {
  const RadialGrid g(129, 8.0);
  EXPECT_THROW(step(bump(g, 0.3), g, params(3), 1.0), StepFault);
  EXPECT_THROW(step(bump(g), g, params(3), 0.0), std::invalid_argument);
  const auto next = step(bump(g), g, params(3), 1e-5);
  EXPECT_NEAR(next.t, 1e-5, 1e-20);
}

TEST(Run, ContinuityMatchesVelocityDivergence) {
  // Over one tiny step v changes by dt * D(r^m u) to leading order.
  const RadialGrid g(65, 4.0);
  const auto p = params(3);
  const auto s = bump(g);
  const double dt = 1e-7;
  const auto next = step(s, g, p, dt);
  const auto f = rhs(s, g, p);
  for (std::size_t i = 0; i < g.n(); ++i) EXPECT_NEAR((next.v[i] - s.v[i]) / dt, f.dvdt[i], 1e-4);
}
