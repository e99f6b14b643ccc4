#include <cmath>

#include "beamflat/error.hpp"
#include "beamflat/gevrey.hpp"
#include "doctest.h"

using namespace beamflat;

namespace {

const TrajectoryGen ex2_y0 = TrajectoryGen::sum(
    {TrajectoryGen::constant(1.0), TrajectoryGen::poly_exp({0.0, 0.0, 10.0}, -2.0)});

}  // namespace

TEST_CASE("Cauchy product against (1 + t) e^t up to order 20") {
  const double t = 0.5;
  const Jet a = Jet::constant(t, 20, 1.0) + Jet::variable(t, 20);
  const Jet f = a * exp(Jet::variable(t, 20));
  // d^n/dt^n (1 + t) e^t = (1 + t + n) e^t
  for (int n = 0; n <= 20; ++n)
    CHECK(f.derivative(n) == doctest::Approx((1 + t + n) * std::exp(t)).epsilon(1e-10));
}

TEST_CASE("log and pow jets") {
  const double t = 0.8;
  const Jet x = Jet::variable(t, 12);
  const Jet l = log(x);
  CHECK(l[0] == doctest::Approx(std::log(t)));
  for (int n = 1; n <= 12; ++n)
    CHECK(l[n] == doctest::Approx((n % 2 ? 1.0 : -1.0) / (n * std::pow(t, n))).epsilon(1e-12));
  const Jet p = pow(x, -2.5);
  CHECK(p.derivative(3) == doctest::Approx(-2.5 * -3.5 * -4.5 * std::pow(t, -5.5)).epsilon(1e-12));
  CHECK_THROWS_AS(log(Jet::constant(t, 3, -1.0)), Error);
  CHECK_THROWS_AS(Jet(0.0, -1), Error);
}

TEST_CASE("affine composition reverses odd coefficients and shifts the point") {
  const Jet e = exp(Jet::variable(1.0, 6));
  const Jet r = e.compose_affine(-1.0, 2.0);  // tau -> e^(3 - tau) at tau = 2
  CHECK(r.point() == 2.0);
  for (int n = 0; n <= 6; ++n)
    CHECK(r.derivative(n) == doctest::Approx((n % 2 ? -1.0 : 1.0) * std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("trajectory generators give exact derivatives") {
  CHECK(ex2_y0.jet(0.0, 4).derivative(2) == doctest::Approx(20.0).epsilon(1e-14));
  const TrajectoryGen s = TrajectoryGen::sinusoid(2.0, 3.0, 0.4);
  const Jet j = s.jet(0.7, 5);
  for (int n = 0; n <= 5; ++n)
    CHECK(j.derivative(n) ==
          doctest::Approx(2.0 * std::pow(3.0, n) * std::sin(3.0 * 0.7 + 0.4 + n * M_PI / 2)).epsilon(1e-12));
}

TEST_CASE("psi endpoint and midpoint values") {
  const BumpSpec b(3.0, 1.5);
  const Jet j0 = psi_jet(b, 0.0, 24), jT = psi_jet(b, 3.0, 24), jm = psi_jet(b, 1.5, 4);
  CHECK(j0[0] == 1.0);
  CHECK(jT[0] == 0.0);
  for (int n = 1; n <= 24; ++n) {
    CHECK(j0[n] == 0.0);
    CHECK(jT[n] == 0.0);
  }
  CHECK(jm[0] == 0.5);
  CHECK_THROWS_AS(psi_jet(b, -0.1, 3), Error);
  CHECK_THROWS_AS(psi_jet(b, 3.1, 3), Error);
  CHECK_THROWS_AS(BumpSpec(3.0, 2.0), Error);
  CHECK_THROWS_AS(BumpSpec(3.0, 1.0), Error);
  CHECK_THROWS_AS(BumpSpec(0.0, 1.5), Error);
}

TEST_CASE("psi is nonincreasing and psi(t) + psi(T - t) = 1") {
  const BumpSpec b(3.0, 1.5);
  double prev = 1.0;
  for (int i = 0; i <= 300; ++i) {
    const double t = 3.0 * i / 300;
    const Jet j = psi_jet(b, t, 1);
    CHECK(j[0] <= prev + 1e-15);
    CHECK(j[1] <= 0.0);
    CHECK(j[0] + psi_jet(b, 3.0 - t, 0)[0] == doctest::Approx(1.0).epsilon(1e-12));
    prev = j[0];
  }
}

TEST_CASE("psi derivative matches difference quotients in the interior") {
  const BumpSpec b(3.0, 1.5);
  const double t = 0.9, h = 1e-4;
  const double fd = (psi_jet(b, t + h, 0)[0] - psi_jet(b, t - h, 0)[0]) / (2 * h);
  CHECK(psi_jet(b, t, 1).derivative(1) == doctest::Approx(fd).epsilon(1e-7));
  CHECK(psi_jet(b, t, 1).derivative(1) == doctest::Approx(-b.psi0(t) / b.norm_const()).epsilon(1e-14));
}

TEST_CASE("underflow clamp agrees with the unclamped jets") {
  const BumpSpec b(3.0, 1.5);
  for (double t : {0.05, 0.1, 0.115}) {
    REQUIRE(b.exponent(t) > BumpSpec::clamp_exponent);
    for (double u : {t, 3.0 - t}) {
      const Jet c = psi_jet(b, u, 24, true), r = psi_jet(b, u, 24, false);
      CHECK(c[0] == r[0]);
      for (int n = 1; n <= 24; ++n) {
        CHECK(c[n] == 0.0);
        CHECK(std::abs(r[n]) <= 1e-200);
      }
    }
  }
}

TEST_CASE("Gevrey growth: a D fitted on low orders bounds the high orders") {
  const BumpSpec b(3.0, 1.5);
  std::vector<double> sup(25, 0.0);
  for (int i = 1; i < 1500; ++i) {
    const double t = 1.5 * i / 1500;  // psi' is even about T/2
    const Jet j = psi_jet(b, t, 24);
    for (int n = 1; n <= 24; ++n) sup[n] = std::max(sup[n], std::abs(j.derivative(n)));
  }
  auto logD = [&](int n) { return (std::log(sup[n]) - b.s() * std::lgamma(n + 1.0)) / (n + 1); };
  double fitted = -INFINITY;
  for (int n = 1; n <= 12; ++n) fitted = std::max(fitted, logD(n));
  for (int n = 13; n <= 24; ++n) CHECK(logD(n) <= fitted);
}

TEST_CASE("blend_y examples") {
  const BumpSpec b(3.0, 1.5);
  const auto c03 = TrajectoryGen::constant(0.3), zero = TrajectoryGen::constant(0.0);
  const Jet s = blend_y(c03, zero, b, 0.0, 10);
  CHECK(s[0] == 0.3);
  for (int n = 1; n <= 10; ++n) CHECK(s[n] == 0.0);
  const Jet e = blend_y(c03, zero, b, 3.0, 10);
  for (int n = 0; n <= 10; ++n) CHECK(e[n] == 0.0);
  const Jet y2 = blend_y(ex2_y0, zero, b, 0.0, 4);
  CHECK(y2[0] == 1.0);
  CHECK(y2[1] == 0.0);
  CHECK(y2[2] == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("endpoint_match is zero for both examples and for a non-even target") {
  const BumpSpec b(3.0, 1.5);
  const auto zero = TrajectoryGen::constant(0.0);
  for (const auto& y0 : {TrajectoryGen::constant(0.3), ex2_y0}) {
    const EndpointReport r = endpoint_match(y0, zero, b, 8);
    CHECK(r.at_start == 0.0);
    CHECK(r.at_end == 0.0);
  }
  const auto odd = TrajectoryGen::sum({TrajectoryGen::constant(0.2), TrajectoryGen::sinusoid(0.1, 2.0, 0.0)});
  const EndpointReport r = endpoint_match(ex2_y0, odd, b, 8);
  CHECK(r.at_start == 0.0);
  CHECK(r.at_end <= 1e-10);
}

TEST_CASE("equal constant endpoints give a constant blend") {
  const BumpSpec b(3.0, 1.5);
  const auto c = TrajectoryGen::constant(0.7);
  const EndpointReport r = endpoint_match(c, c, b, 8);
  CHECK(r.at_start == 0.0);
  CHECK(r.at_end == 0.0);
  CHECK(blend_y(c, c, b, 1.5, 0)[0] == doctest::Approx(0.7).epsilon(1e-15));
  for (double t : {0.3, 1.1, 2.2}) CHECK(blend_y(c, c, b, t, 0)[0] == doctest::Approx(0.7).epsilon(1e-12));
}
