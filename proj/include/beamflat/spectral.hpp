#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "beamflat/genfun.hpp"
#include "beamflat/model.hpp"

namespace beamflat {

/// D(lambda) = G(L) H_x(L) - H(L) G_x(L) with G(x) = sum g_k(x) lambda^(2k)
/// and H likewise. Fails when the truncated series have not converged to
/// 1e-12 at |lambda|.
template <class Real>
std::complex<double> char_fn(const GenTableT<Real>& table, std::complex<double> lambda);

/// D(i omega); real because the series are even with real coefficients.
double char_fn_imag_axis(const GenTableQ& table, double omega);

struct ModeResiduals {
  double uL = 0.0;       // |u(L)| / max |u|
  double uxL = 0.0;      // |u_x(L)| / max |u_x|
  double shear = 0.0;    // |m lambda^2 u(0) + (EI u_xx)_x(0)|, relative
  double moment = 0.0;   // |J lambda^2 u_x(0) - EI(0) u_xx(0)|, relative
};

/// Mode for lambda = i omega, normalized by u_x(0) = 1. On the imaginary
/// axis the shape u is real, so the eigenvector
/// phi = [u, lambda u, lambda u(0), lambda u_x(0)] splits into
/// Re phi = [u, 0, 0, 0] and Im phi = [0, omega u, omega u(0), omega].
struct Eigenpair {
  double omega = 0.0;
  std::complex<double> lambda;
  double u0 = 0.0;
  double denominator = 0.0;  // sum g_j,x(L) lambda^(2j)
  GridFunction u;            // with derivative tables 1..4
  ModeResiduals residuals;

  BeamState re_phi() const;
  BeamState im_phi() const;
};

struct Spectrum {
  std::vector<Eigenpair> modes;
  std::shared_ptr<const GenTableQ> table;
  double omega_max = 0.0;
  std::vector<std::string> warnings;
};

/// Table depth for which envelope-bounded series tails at omega_max fall
/// below 1e-12.
int spectral_levels(const BeamParams& params, double omega_max);

std::shared_ptr<const GenTableQ> spectral_table(const BeamParams& params, double omega_max,
                                                int grid_n = 256);

Eigenpair eigenfunction(const GenTableQ& table, double omega, int nx);

/// Scans 400 log-spaced frequencies in [1, omega_max] for sign changes of
/// D(i omega) and bisects each bracket to relative 1e-10.
Spectrum find_eigenvalues(std::shared_ptr<const GenTableQ> table, double omega_max, int n_max,
                          int nx = 256, int scan_points = 400);

/// Shooting oracle: integrates (EI u_xx)_xx = omega^2 rho u from the tip with
/// the two tip conditions and returns det [u(L), u_x(L)] of the two basis
/// solutions.
double shooting_residual(const BeamParams& params, double omega, int steps = 4000);
std::vector<double> shooting_eigenfrequencies(const BeamParams& params, double omega_max,
                                              int n_max, int scan_points = 4000);

/// First root of cos(x) cosh(x) = -1.
double clamped_free_beta1L();

struct Projection {
  std::vector<double> coeffs;  // on phi_0, Re phi_1, Im phi_1, Re phi_2, ...
  double residual = 0.0;       // ||z - fit||_Z / ||z||_Z
  double condition = 0.0;      // of the normalized Gram matrix
};

/// Least-squares fit of z in the Z inner product onto
/// span{phi_0, Re phi_n, Im phi_n : n <= n_modes}.
Projection project_state(const Spectrum& spectrum, const BeamState& z, int n_modes);

}  // namespace beamflat
