#pragma once

#include <memory>
#include <vector>

#include "beamflat/genfun.hpp"
#include "beamflat/gevrey.hpp"
#include "beamflat/model.hpp"

namespace beamflat {

/// c_l = sum_{j+k=l} [g_k(L) h_j,x(L) - h_k(L) g_j,x(L)], l = 0..N.
struct SeriesCoeffs {
  int N = 0;
  std::vector<double> c;
};

enum class SumOrder { j_outer, k_outer };
std::vector<double> series_coeffs_in_order(const GenTable& table, int N, SumOrder order);

/// Builds the coefficients in both summation orders and fails unless they
/// agree bitwise.
SeriesCoeffs series_coeffs(const GenTable& table, int N);

enum class FlatOperator { L1, L2 };

/// L1 y = sum g_k,x(L) y^(2k), L2 y = sum h_k,x(L) y^(2k), k = 0..K.
double apply_L(const GenTable& table, FlatOperator which, const Jet& y_jet);

struct PlanSpec {
  TrajectoryGen y0 = TrajectoryGen::constant(0.0);
  TrajectoryGen yT = TrajectoryGen::constant(0.0);
  double T = 3.0;
  double s = 1.5;
  int N = 10;
  int samples = 2000;  // control export grid, intervals over [0, T]
};

/// Planned transfer: blended y, truncated series coefficients, cached control
/// samples. Immutable after construction.
class Plan {
 public:
  Plan(std::shared_ptr<const GenTable> table, PlanSpec spec);

  const PlanSpec& spec() const noexcept { return spec_; }
  const GenTable& table() const noexcept { return *table_; }
  const BeamParams& params() const noexcept { return table_->params(); }
  const BumpSpec& bump() const noexcept { return bump_; }
  const SeriesCoeffs& coeffs() const noexcept { return coeffs_; }

  Jet y_jet(double t, int order) const;

  /// d^b/dt^b of f^N(t) = sum_l c_l y^(2l)(t).
  double control(double t, int dt_order = 0) const;

  /// y1 = L2 y (which = 1) or y2 = -L1 y (which = 2), truncated at N.
  double flat_output(int which, double t, int dt_order = 0) const;

  /// d^a/dx^a d^b/dt^b of the truncated series w, with j + k <= N.
  double w(double x, double t, int dx = 0, int dt = 0) const;

  /// [w, w_t, w_t(0), w_xt(0)] at t on nx uniform intervals, with u_x and
  /// u_xx tables from the series.
  BeamState state_at(double t, int nx) const;

  /// One time row of the field: w^(dx, dt)(xs[i], t).
  std::vector<double> w_row(double t, std::span<const double> xs, int dx, int dt) const;

  std::vector<double> time_grid() const;
  const std::vector<double>& control_samples() const noexcept { return f_samples_; }
  const std::vector<double>& y_samples() const noexcept { return y_samples_; }

 private:
  struct Weights {
    std::vector<double> A, B;  // per level k for the g- and h-series
  };
  Weights weights(const Jet& y, int dt) const;
  double combine(const Weights& wt, double x, int dx) const;

  std::shared_ptr<const GenTable> table_;
  PlanSpec spec_;
  BumpSpec bump_;
  SeriesCoeffs coeffs_;
  std::vector<double> f_samples_, y_samples_;
};

Plan plan_transfer(const BeamParams& params, const TrajectoryGen& y0, const TrajectoryGen& yT,
                   double T, double s, int N, int K = 0, int grid_n = 2048);

/// Default table depth for a truncation level: max(N + 2, 12).
int default_levels(int N);

/// [u = c, 0, 0, 0] on n intervals.
BeamState steady_state(const BeamParams& params, double c, int n);

/// L2(0, T) norm of uniformly sampled values (composite Simpson).
double l2_time_norm(std::span<const double> samples, double T);

}  // namespace beamflat
