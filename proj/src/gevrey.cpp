#include "beamflat/gevrey.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "beamflat/error.hpp"

namespace beamflat {

TrajectoryGen TrajectoryGen::constant(double c) {
  TrajectoryGen g;
  g.kind_ = Kind::constant;
  g.c_ = c;
  return g;
}

TrajectoryGen TrajectoryGen::poly_exp(std::vector<double> coeffs, double rate) {
  TrajectoryGen g;
  g.kind_ = Kind::poly_exp;
  g.coeffs_ = std::move(coeffs);
  g.rate_ = rate;
  return g;
}

TrajectoryGen TrajectoryGen::sinusoid(double amp, double omega, double phase) {
  TrajectoryGen g;
  g.kind_ = Kind::sinusoid;
  g.amp_ = amp;
  g.omega_ = omega;
  g.phase_ = phase;
  return g;
}

TrajectoryGen TrajectoryGen::sum(std::vector<TrajectoryGen> terms) {
  TrajectoryGen g;
  g.kind_ = Kind::sum;
  g.terms_ = std::move(terms);
  return g;
}

Jet TrajectoryGen::jet(double t, int order) const {
  Jet out(t, order);
  switch (kind_) {
    case Kind::constant:
      out[0] = c_;
      break;
    case Kind::poly_exp: {
      // Taylor shift of the polynomial: d_n = sum_{i>=n} a_i C(i, n) t^(i-n)
      Jet p(t, order);
      const int deg = static_cast<int>(coeffs_.size()) - 1;
      for (int n = 0; n <= std::min(deg, order); ++n) {
        double s = 0.0;
        for (int i = deg; i >= n; --i) {
          double binom = 1.0;
          for (int q = 1; q <= n; ++q) binom = binom * (i - n + q) / q;
          s = s * t + coeffs_[static_cast<std::size_t>(i)] * binom;
        }
        p[n] = s;
      }
      Jet e(t, order);
      e[0] = std::exp(rate_ * t);
      for (int n = 1; n <= order; ++n) e[n] = e[n - 1] * rate_ / n;
      out = p * e;
      break;
    }
    case Kind::sinusoid: {
      const double arg = omega_ * t + phase_;
      double scale = amp_;
      for (int n = 0; n <= order; ++n) {
        out[n] = scale * std::sin(arg + n * M_PI / 2);
        scale *= omega_ / (n + 1);
      }
      break;
    }
    case Kind::sum:
      for (const auto& term : terms_) out += term.jet(t, order);
      break;
  }
  return out;
}

BumpSpec::BumpSpec(double T, double s) : T_(T), s_(s) {
  if (!(T > 0.0) || !std::isfinite(T)) throw Error("bump.T", "horizon T must be positive");
  if (!(s > 1.0 && s < 2.0)) throw Error("bump.s", "Gevrey order s must lie in (1, 2)");
  // psi0 is symmetric about T/2
  norm_ = 2.0 * partial_integral(T / 2);
  if (!(norm_ > 0.0)) throw Error("bump.norm", "normalization integral is not positive");
}

double BumpSpec::exponent(double t) const {
  const double v = (1.0 - t / T_) * (t / T_);
  if (!(v > 0.0)) return INFINITY;
  return std::pow(v, -1.0 / (s_ - 1.0));
}

double BumpSpec::psi0(double t) const {
  const double p = exponent(t);
  return std::isfinite(p) ? std::exp(-p) : 0.0;
}

double BumpSpec::partial_integral(double t) const {
  if (t <= 0.0) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  auto f = [this](double x) { return psi0(x); };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, t, 10, 1e-13);
}

Jet psi0_jet(const BumpSpec& spec, double t, int order) {
  const double T = spec.T();
  Jet v(t, order);
  v[0] = (1.0 - t / T) * (t / T);
  if (order >= 1) v[1] = 1.0 / T - 2.0 * t / (T * T);
  if (order >= 2) v[2] = -1.0 / (T * T);
  return exp(-1.0 * pow(v, -1.0 / (spec.s() - 1.0)));
}

Jet psi_jet(const BumpSpec& spec, double t, int order, bool clamp) {
  const double T = spec.T();
  if (!(t >= 0.0 && t <= T)) throw Error("bump.t", "t outside [0, T]");
  Jet out(t, order);
  const bool left = t <= T / 2;
  const bool flat = t == 0.0 || t == T || (clamp && spec.exponent(t) > BumpSpec::clamp_exponent);
  if (flat) {
    if (left) out[0] = 1.0;
    return out;
  }
  const double C = spec.norm_const();
  out[0] = left ? 1.0 - spec.partial_integral(t) / C : spec.partial_integral(T - t) / C;
  if (order >= 1) {
    const Jet p0 = psi0_jet(spec, t, order - 1);
    for (int n = 1; n <= order; ++n) out[n] = -p0[n - 1] / (C * n);
  }
  return out;
}

Jet blend_y(const TrajectoryGen& y0, const TrajectoryGen& yT, const BumpSpec& spec, double t,
            int order) {
  const double T = spec.T();
  const Jet a = y0.jet(t, order) * psi_jet(spec, t, order);
  // yT enters shifted, yT(t - T), so that y^(n)(T) = yT^(n)(0) for every n;
  // only the bump is reflected.
  const Jet shifted = yT.jet(t - T, order).compose_affine(1.0, t);
  const Jet reflected = psi_jet(spec, T - t, order).compose_affine(-1.0, t);
  return a + shifted * reflected;
}

EndpointReport endpoint_match(const TrajectoryGen& y0, const TrajectoryGen& yT,
                              const BumpSpec& spec, int order) {
  EndpointReport r;
  const Jet s = blend_y(y0, yT, spec, 0.0, order);
  const Jet e = blend_y(y0, yT, spec, spec.T(), order);
  const Jet a = y0.jet(0.0, order);
  const Jet b = yT.jet(0.0, order);
  for (int n = 0; n <= order; ++n) {
    const double ref0 = a.derivative(n), refT = b.derivative(n);
    r.at_start = std::max(r.at_start, std::abs(s.derivative(n) - ref0) / std::max(1.0, std::abs(ref0)));
    r.at_end = std::max(r.at_end, std::abs(e.derivative(n) - refT) / std::max(1.0, std::abs(refT)));
  }
  return r;
}

}  // namespace beamflat
