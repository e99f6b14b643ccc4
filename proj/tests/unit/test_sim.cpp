#include <cmath>
#include <random>

#include "beamflat/error.hpp"
#include "beamflat/sim.hpp"
#include "common.hpp"
#include "doctest.h"

using namespace beamflat;
using namespace beamflat::test;

namespace {

// Smooth state with u(L) = u_x(L) = 0 and v(L) = 0.
BeamState random_clamped(std::mt19937& rng, const BeamParams& P, int nx) {
  std::normal_distribution<double> N01;
  const double L = P.length;
  const double a = 0.01 * N01(rng), b = 0.01 * N01(rng), c = 0.05 * N01(rng), d = 0.05 * N01(rng);
  BeamState z;
  z.u = GridFunction::sample(0.0, L, nx, [&](double x) {
    const double s = x - L;
    return s * s * (a + b * s);
  });
  z.v = GridFunction::sample(0.0, L, nx, [&](double x) {
    const double s = x - L;
    return s * (c + d * s);
  });
  z.alpha = z.v[0];
  z.beta = -(c + 2 * d * (-L));  // v_x(0)
  return z;
}

BeamState subsample(const BeamState& z, int factor) {
  std::vector<double> u, v;
  for (int i = 0; i <= z.u.intervals(); i += factor) {
    u.push_back(z.u[i]);
    v.push_back(z.v[i]);
  }
  BeamState s;
  s.u = GridFunction(z.u.x0(), z.u.x1(), u);
  s.v = GridFunction(z.v.x0(), z.v.x1(), v);
  s.alpha = z.alpha;
  s.beta = z.beta;
  return s;
}

SimConfig short_cfg(double t_end = 0.5) {
  SimConfig c;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("steady state under matching constant input stays fixed") {
  const BeamParams P = lab();
  const BeamState z0 = steady_state(P, 0.3, 300);
  const SimResult r = simulate(P, z0, ControlSignal::constant(0.3), SimConfig{});
  double worst = 0.0;
  for (const auto& z : r.snapshots) worst = std::max(worst, z_norm(z - z0, P));
  CHECK(worst <= 1e-10);
  CHECK(r.snapshots.size() == 301);
  CHECK(r.terminal.u.intervals() == 300);
}

TEST_CASE("zero data give the zero trajectory and zero drift") {
  const BeamParams P = lab();
  const SimResult r = simulate(P, zero_state(P, 300), ControlSignal::constant(0.0), short_cfg());
  for (const auto& z : r.snapshots) CHECK(z_norm(z, P) == 0.0);
  CHECK(energy_audit(r) == 0.0);
}

TEST_CASE("energy drift from random clamped states stays below 1e-3") {
  const BeamParams P = lab();
  std::mt19937 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const BeamState z0 = random_clamped(rng, P, 300);
    const SimResult r = simulate(P, z0, ControlSignal::constant(0.0), SimConfig{});
    CHECK(energy_audit(r) <= 1e-3);
    CHECK(r.energy.front() > 0.0);
  }
}

TEST_CASE("energy audit refuses time-varying inputs") {
  const BeamParams P = lab();
  const auto plan = example_plan(1, 6);
  const SimResult r = simulate(P, steady_state(P, 0.3, 64),
                               ControlSignal::from_plan(plan),
                               [] { SimConfig c; c.nx = 64; c.t_end = 0.2; return c; }());
  CHECK_THROWS_AS(energy_audit(r), Error);
}

TEST_CASE("compatibility, horizon and grid errors") {
  const BeamParams P = lab();
  CHECK_THROWS_AS(simulate(P, steady_state(P, 0.3, 300), ControlSignal::constant(0.1), short_cfg()), Error);
  CHECK_THROWS_AS(simulate(P, steady_state(P, 0.3, 200), ControlSignal::constant(0.3), short_cfg()), Error);
  const auto plan = example_plan(1, 4);
  CHECK_THROWS_AS(simulate(P, steady_state(P, 0.3, 300), ControlSignal::from_plan(plan), short_cfg(4.0)), Error);
  SimConfig bad;
  bad.dt = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = SimConfig{};
  bad.nx = 16;
  CHECK_THROWS_AS(bad.validate(), Error);
  bool caught = false;
  try {
    simulate(P, steady_state(P, 0.3, 300), ControlSignal::constant(0.1), short_cfg());
  } catch (const Error& e) {
    caught = e.id() == "sim.compat";
  }
  CHECK(caught);
}

TEST_CASE("non-finite input is reported with the step index") {
  const BeamParams P = lab();
  ControlSignal f([](double t, int o) { return (o == 2 && t > 0.1) ? NAN : 0.0; }, 1.0);
  bool caught = false;
  try {
    simulate(P, zero_state(P, 300), f, short_cfg());
  } catch (const Error& e) {
    caught = e.id() == "sim.finite" && std::string(e.what()).find("at step ") != std::string::npos;
  }
  CHECK(caught);
}

TEST_CASE("linearity in (z0, f)") {
  const BeamParams P = lab();
  std::mt19937 rng(11);
  BeamState z0 = random_clamped(rng, P, 300);
  const auto plan = example_plan(2, 6);
  const BeamState zp = plan->state_at(0.0, 300);
  z0 = z0 + zp;
  const ControlSignal f = ControlSignal::from_plan(plan);
  const SimResult a = simulate(P, z0, f, short_cfg());
  const SimResult b = simulate(P, 2.5 * z0, 2.5 * f, short_cfg());
  for (std::size_t s = 0; s < a.snapshots.size(); s += 10) {
    const double ref = z_norm(a.snapshots[s], P);
    CHECK(z_norm(b.snapshots[s] - 2.5 * a.snapshots[s], P) <= 1e-9 * 2.5 * ref);
  }
  const SimResult c = simulate(P, 2.0 * random_clamped(rng, P, 300), ControlSignal::constant(0.0), short_cfg());
  CHECK(c.terminal.u.intervals() == 300);
}

TEST_CASE("scaling z0 by 2 with zero input scales the trajectory exactly") {
  const BeamParams P = lab();
  std::mt19937 rng(5);
  const BeamState z0 = random_clamped(rng, P, 300);
  const SimResult a = simulate(P, z0, ControlSignal::constant(0.0), short_cfg());
  const SimResult b = simulate(P, 2.0 * z0, ControlSignal::constant(0.0), short_cfg());
  for (std::size_t s = 0; s < a.snapshots.size(); ++s)
    for (int i = 0; i <= 300; ++i) CHECK(b.snapshots[s].u[i] == 2.0 * a.snapshots[s].u[i]);
}

TEST_CASE("boundary value is imposed exactly at every step") {
  const BeamParams P = lab();
  const auto plan = example_plan(1, 8);
  const ControlSignal f = ControlSignal::from_plan(plan);
  const SimResult r = simulate(P, steady_state(P, 0.3, 300), f, short_cfg(1.0));
  for (std::size_t s = 0; s < r.snapshots.size(); ++s)
    CHECK(r.snapshots[s].u.back() == f(r.snapshot_times[s]));
}

TEST_CASE("continuity probe ratio is independent of the perturbation size") {
  const BeamParams P = lab();
  const BeamState z0 = steady_state(P, 0.3, 300);
  const ControlSignal f = ControlSignal::constant(0.3);
  const double T = 3.0;
  auto bump = [T](double eps) {
    return ControlSignal(
        [eps, T](double t, int o) {
          const double w = M_PI / T;
          if (o == 0) return eps * std::pow(std::sin(w * t), 2);
          if (o == 1) return eps * w * std::sin(2 * w * t);
          return 2 * eps * w * w * std::cos(2 * w * t);
        },
        T);
  };
  SimConfig cfg;
  const double r1 = continuity_probe(P, z0, f, bump(1e-2), cfg);
  const double r2 = continuity_probe(P, z0, f, bump(5e-3), cfg);
  const double r3 = continuity_probe(P, z0, f, bump(2.5e-3), cfg);
  CHECK(r1 > 0.0);
  CHECK(std::abs(r2 / r1 - 1) < 0.1);
  CHECK(std::abs(r3 / r1 - 1) < 0.1);
  CHECK(continuity_probe(P, z0, f, ControlSignal::constant(0.0), cfg) == 0.0);
  CHECK_THROWS_AS(continuity_probe(P, z0, f, ControlSignal::constant(0.1), cfg), Error);
}

TEST_CASE("second-order spatial convergence on Example 1") {
  const BeamParams P = lab();
  const auto plan = example_plan(1, 10);
  const ControlSignal f = ControlSignal::from_plan(plan);
  SimConfig cfg;
  cfg.t_end = 1.5;
  cfg.dt = 1e-4;
  std::vector<BeamState> z;
  for (int nx : {50, 100, 200}) {
    cfg.nx = nx;
    z.push_back(simulate(P, steady_state(P, 0.3, nx), f, cfg).terminal);
  }
  const double e1 = z_norm(z[0] - subsample(z[1], 2), P);
  const double e2 = z_norm(subsample(z[1], 2) - subsample(z[2], 4), P);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("simulated tip follows the planned flat output") {
  const BeamParams P = lab();
  const auto plan = example_plan(2, 10);
  const SimResult r = simulate(P, plan->state_at(0.0, 300), ControlSignal::from_plan(plan), SimConfig{});
  double worst = 0.0;
  for (std::size_t i = 0; i < r.tip_times.size(); i += 40)
    worst = std::max(worst, std::abs(r.tip_w[i] - plan->w(0.0, r.tip_times[i])));
  CHECK(worst <= 5e-3);
}

TEST_CASE("sampled inputs are spline-differentiated with a warning") {
  const BeamParams P = lab();
  const auto plan = example_plan(1, 10);
  const ControlSignal s = ControlSignal::from_samples(plan->control_samples(), 0.0, 3.0 / 2000);
  CHECK_FALSE(s.warnings().empty());
  CHECK(s(1.2345) == doctest::Approx(plan->control(1.2345)).epsilon(1e-8));
  CHECK(s(1.2345, 2) == doctest::Approx(plan->control(1.2345, 2)).epsilon(1e-3));
  const SimResult a = simulate(P, steady_state(P, 0.3, 300), s, SimConfig{});
  const SimResult b = simulate(P, steady_state(P, 0.3, 300), ControlSignal::from_plan(plan), SimConfig{});
  CHECK(z_norm(a.terminal - b.terminal, P) < 1e-4);
}
