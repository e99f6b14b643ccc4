#pragma once

#include <memory>
#include <vector>

#include "beamflat/jet.hpp"

namespace beamflat {

/// Reference trajectory with exact derivatives of every order.
class TrajectoryGen {
 public:
  enum class Kind { constant, poly_exp, sinusoid, sum };

  static TrajectoryGen constant(double c);
  /// (sum_i coeffs[i] t^i) * exp(rate t)
  static TrajectoryGen poly_exp(std::vector<double> coeffs, double rate);
  /// amp * sin(omega t + phase)
  static TrajectoryGen sinusoid(double amp, double omega, double phase);
  static TrajectoryGen sum(std::vector<TrajectoryGen> terms);

  Kind kind() const noexcept { return kind_; }
  double c() const noexcept { return c_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double rate() const noexcept { return rate_; }
  double amp() const noexcept { return amp_; }
  double omega() const noexcept { return omega_; }
  double phase() const noexcept { return phase_; }
  const std::vector<TrajectoryGen>& terms() const noexcept { return terms_; }

  Jet jet(double t, int order) const;
  double operator()(double t) const { return jet(t, 0)[0]; }

 private:
  Kind kind_ = Kind::constant;
  double c_ = 0.0;
  std::vector<double> coeffs_;
  double rate_ = 0.0;
  double amp_ = 0.0, omega_ = 0.0, phase_ = 0.0;
  std::vector<TrajectoryGen> terms_;
};

/// psi(t) = 1 - int_0^t psi0 / int_0^T psi0 with
/// psi0(t) = exp(-[(1 - t/T)(t/T)]^(-1/(s-1))).
class BumpSpec {
 public:
  BumpSpec(double T, double s = 1.5);

  double T() const noexcept { return T_; }
  double s() const noexcept { return s_; }
  double norm_const() const noexcept { return norm_; }

  double psi0(double t) const;
  /// int_0^t psi0 for 0 <= t <= T/2.
  double partial_integral(double t) const;
  /// The exponent v^(-1/(s-1)) at t; jets are clamped once it exceeds this.
  static constexpr double clamp_exponent = 700.0;
  double exponent(double t) const;

 private:
  double T_, s_;
  double norm_;
};

Jet psi0_jet(const BumpSpec& spec, double t, int order);
Jet psi_jet(const BumpSpec& spec, double t, int order, bool clamp = true);

/// y(t) = y0(t) psi(t) + yT(t - T) psi(T - t).
Jet blend_y(const TrajectoryGen& y0, const TrajectoryGen& yT, const BumpSpec& spec, double t,
            int order);

struct EndpointReport {
  double at_start = 0.0;
  double at_end = 0.0;
};
EndpointReport endpoint_match(const TrajectoryGen& y0, const TrajectoryGen& yT,
                              const BumpSpec& spec, int order);

}  // namespace beamflat
