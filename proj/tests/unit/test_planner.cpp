#include <cmath>

#include "beamflat/error.hpp"
#include "beamflat/kernels.hpp"
#include "common.hpp"
#include "doctest.h"

using namespace beamflat;
using namespace beamflat::test;

namespace {

double max_over_time(const Plan& p, int n, auto&& f) {
  double m = 0.0;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(f(p.spec().T * i / n)));
  return m;
}

double gap(const Plan& a, const Plan& b) {
  std::vector<double> d(a.control_samples().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.control_samples()[i] - b.control_samples()[i];
  return l2_time_norm(d, a.spec().T);
}

}  // namespace

TEST_CASE("apply_L examples") {
  const auto& t = *lab_table();
  const Jet c = Jet::constant(1.0, 2 * t.K(), 0.7);
  CHECK(apply_L(t, FlatOperator::L2, c) == 0.7);
  CHECK(apply_L(t, FlatOperator::L1, c) == 0.0);
  Jet q(0.0, 2 * t.K());
  q[2] = 0.5;  // t^2 / 2
  CHECK(apply_L(t, FlatOperator::L1, q) == t.gxL()[1]);
  CHECK_THROWS_AS(apply_L(t, FlatOperator::L1, Jet(0.0, 3)), Error);
}

TEST_CASE("apply_L agrees with a doubled-resolution table") {
  const auto& a = *lab_table();
  const GenTable b = compute_gen_tables(lab(), 12, 4096);
  const auto plan = example_plan(1, 10);
  const Jet y = plan->y_jet(1.5, 24);
  for (auto which : {FlatOperator::L1, FlatOperator::L2})
    CHECK(rel(apply_L(a, which, y), apply_L(b, which, y)) < 1e-8);
}

TEST_CASE("series coefficients: c_0 = 1, both orders identical, decreasing ratios") {
  const auto& t = *lab_table();
  const SeriesCoeffs c = series_coeffs(t, 12);
  CHECK(c.c[0] == 1.0);
  CHECK(series_coeffs_in_order(t, 12, SumOrder::j_outer) ==
        series_coeffs_in_order(t, 12, SumOrder::k_outer));
  for (int l = 2; l < 12; ++l) CHECK(std::abs(c.c[l + 1] / c.c[l]) < 1.0);
  CHECK_THROWS_AS(series_coeffs(t, 13), Error);
}

TEST_CASE("control endpoints for Example 1") {
  const auto p = example_plan(1, 10);
  CHECK(std::abs(p->control(0.0) - 0.3) <= 1e-8);
  CHECK(std::abs(p->control(3.0)) <= 1e-8);
  CHECK(std::abs(p->control(0.0, 1)) <= 1e-12);
  CHECK(std::abs(p->control(3.0, 2)) <= 1e-12);
}

TEST_CASE("truncation gaps reproduce the published bounds and decay monotonically") {
  for (int ex : {1, 2}) {
    std::vector<std::shared_ptr<const Plan>> p(11);
    for (int n = 2; n <= 10; ++n) p[n] = example_plan(ex, n);
    const double b53 = ex == 1 ? 9e-7 : 7e-6, b105 = ex == 1 ? 3e-13 : 3e-12;
    CHECK(gap(*p[5], *p[3]) < b53);
    CHECK(gap(*p[10], *p[5]) < b105);
    for (int n = 4; n <= 10; ++n) CHECK(gap(*p[n], *p[n - 1]) < gap(*p[n - 1], *p[n - 2]));
  }
}

TEST_CASE("flat outputs are the values of w and w_x at the tip") {
  for (int ex : {1, 2}) {
    const auto p = example_plan(ex, 12);
    CHECK(max_over_time(*p, 60, [&](double t) { return p->w(0.0, t) - p->flat_output(1, t); }) <= 1e-9);
    CHECK(max_over_time(*p, 60, [&](double t) { return p->w(0.0, t, 1) - p->flat_output(2, t); }) <= 1e-9);
  }
}

TEST_CASE("steady y gives a rigid constant field") {
  PlanSpec s;
  s.y0 = TrajectoryGen::constant(0.4);
  s.yT = TrajectoryGen::constant(0.4);
  const Plan p(lab_table(), s);
  for (double t : {0.0, 0.7, 1.5, 3.0})
    for (double x : {0.0, 0.21, 0.5}) {
      CHECK(p.w(x, t) == doctest::Approx(0.4).epsilon(1e-12));
      CHECK(std::abs(p.w(x, t, 0, 1)) < 1e-12);
    }
  PlanSpec z;
  const Plan q(lab_table(), z);
  for (double f : q.control_samples()) CHECK(f == 0.0);
}

TEST_CASE("clamped slope vanishes and tip-mass residuals shrink with N") {
  const BeamParams P = lab();
  const double L = P.length, EI0 = P.EI(0.0), dEI0 = P.EI.eval(0.0, 1);
  for (int ex : {1, 2}) {
    const auto p5 = example_plan(ex, 5), p10 = example_plan(ex, 10);
    auto slope = [&](const Plan& p) {
      return max_over_time(p, 120, [&](double t) { return p.w(L, t, 1); });
    };
    auto shear = [&](const Plan& p) {
      return max_over_time(p, 120, [&](double t) {
        return P.tip_mass * p.w(0.0, t, 0, 2) + EI0 * p.w(0.0, t, 3) + dEI0 * p.w(0.0, t, 2);
      });
    };
    auto moment = [&](const Plan& p) {
      return max_over_time(p, 120, [&](double t) {
        return P.tip_inertia * p.w(0.0, t, 1, 2) - EI0 * p.w(0.0, t, 2);
      });
    };
    // the j + k <= N truncation is antisymmetric in (g, h) at x = L
    CHECK(slope(*p5) <= 1e-14);
    CHECK(slope(*p10) <= 1e-14);
    CHECK(shear(*p10) * 10 <= shear(*p5));
    CHECK(moment(*p10) * 10 <= moment(*p5));
  }
}

TEST_CASE("PDE residual of the planned field shrinks with N") {
  const BeamParams P = lab();
  auto resid = [&](const Plan& p) {
    double m = 0.0;
    for (double t : {0.6, 1.2, 1.8, 2.4})
      for (double x : {0.1, 0.25, 0.4}) {
        const double EI = P.EI(x), d1 = P.EI.eval(x, 1), d2 = P.EI.eval(x, 2);
        const double r = P.rho(x) * p.w(x, t, 0, 2) + EI * p.w(x, t, 4) + 2 * d1 * p.w(x, t, 3) +
                         d2 * p.w(x, t, 2);
        m = std::max(m, std::abs(r));
      }
    return m;
  };
  const double r5 = resid(*example_plan(2, 5)), r10 = resid(*example_plan(2, 10));
  CHECK(r10 < r5);
}

TEST_CASE("planned states: compatibility and endpoint states") {
  const auto p1 = example_plan(1, 10);
  const BeamParams P = lab();
  const BeamState s0 = p1->state_at(0.0, 300);
  CHECK(is_compatible(p1->control(0.0), s0, 1e-8));
  CHECK(z_norm(s0 - steady_state(P, 0.3, 300), P) <= 1e-12);
  CHECK(z_norm(p1->state_at(3.0, 300), P) <= 1e-6);

  const auto p2 = example_plan(2, 10);
  const BeamState z0 = p2->state_at(0.0, 300);
  CHECK(is_compatible(p2->control(0.0), z0, 1e-8));
  const SeriesCoeffs& c = p2->coeffs();
  const Jet y0 = TrajectoryGen::sum({TrajectoryGen::constant(1.0),
                                     TrajectoryGen::poly_exp({0.0, 0.0, 10.0}, -2.0)})
                     .jet(0.0, 20);
  double f0 = 0.0;
  for (int l = 0; l <= 10; ++l) f0 += c.c[l] * y0.derivative(2 * l);
  CHECK(p2->control(0.0) == doctest::Approx(f0).epsilon(1e-12));
  CHECK(l2_norm(z0.v) > 1e-3);  // not a rest state
}

TEST_CASE("steady_state builds the rest configuration") {
  const BeamParams P = lab();
  const BeamState z = steady_state(P, 0.0, 64);
  CHECK(z_norm(z, P) == 0.0);
  const BeamState c = steady_state(P, 0.3, 64);
  for (int i = 0; i <= 64; ++i) {
    CHECK(c.u[i] == 0.3);
    CHECK(c.v[i] == 0.0);
  }
  CHECK(c.alpha == 0.0);
  CHECK(c.beta == 0.0);
}

TEST_CASE("parallel sampling kernels match the serial reference bitwise") {
  const auto p = example_plan(2, 10);
  const auto ts = p->time_grid();
  CHECK(kernels::sample_control(*p, ts) == kernels::sample_control_serial(*p, ts));
  CHECK(kernels::sample_control(*p, ts, 2) == kernels::sample_control_serial(*p, ts, 2));
  std::vector<double> xs{0.0, 0.1, 0.33, 0.5}, tt{0.0, 0.4, 1.7, 3.0};
  CHECK(kernels::sample_field(*p, xs, tt, 2, 1) == kernels::sample_field_serial(*p, xs, tt, 2, 1));
  CHECK(p->control_samples() == kernels::sample_control_serial(*p, ts));
}

TEST_CASE("order and domain errors") {
  const auto p = example_plan(1, 4);
  CHECK_THROWS_AS(p->w(0.1, 1.0, 5, 0), Error);
  CHECK_THROWS_AS(p->w(0.1, 1.0, 0, 3), Error);
  CHECK_THROWS_AS(p->w(0.1, 3.5), Error);
  CHECK_THROWS_AS(p->control(1.0, 3), Error);
  PlanSpec s;
  s.N = 20;
  CHECK_THROWS_AS(Plan(lab_table(), s), Error);
}
