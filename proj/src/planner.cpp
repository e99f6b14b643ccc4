#include "beamflat/planner.hpp"

#include <algorithm>
#include <cmath>

#include "beamflat/error.hpp"
#include "beamflat/kernels.hpp"
#include "beamflat/summation.hpp"

namespace beamflat {

std::vector<double> series_coeffs_in_order(const GenTable& table, int N, SumOrder order) {
  if (N < 0 || N > table.K()) throw Error("planner.N", "truncation level N must satisfy 0 <= N <= K");
  const auto &gL = table.gL(), &gxL = table.gxL(), &hL = table.hL(), &hxL = table.hxL();
  std::vector<double> c(static_cast<std::size_t>(N) + 1);
  std::vector<double> terms;
  for (int l = 0; l <= N; ++l) {
    terms.clear();
    for (int outer = 0; outer <= l; ++outer) {
      const int j = order == SumOrder::j_outer ? outer : l - outer;
      const int k = l - j;
      terms.push_back(gL[k] * hxL[j]);
      terms.push_back(-hL[k] * gxL[j]);
    }
    c[l] = exact_sum(terms);
  }
  return c;
}

SeriesCoeffs series_coeffs(const GenTable& table, int N) {
  SeriesCoeffs s;
  s.N = N;
  s.c = series_coeffs_in_order(table, N, SumOrder::j_outer);
  if (s.c != series_coeffs_in_order(table, N, SumOrder::k_outer))
    throw Error("planner.commutation", "series coefficients depend on the summation order");
  return s;
}

double apply_L(const GenTable& table, FlatOperator which, const Jet& y) {
  const int K = table.K();
  if (y.order() < 2 * K) throw Error("planner.jet_order", "jet order must be at least 2K");
  const auto& coef = which == FlatOperator::L1 ? table.gxL() : table.hxL();
  CompensatedSum s;
  for (int k = 0; k <= K; ++k) s.add(coef[k] * y.derivative(2 * k));
  return s.value();
}

int default_levels(int N) { return std::max(N + 2, 12); }

Plan::Plan(std::shared_ptr<const GenTable> table, PlanSpec spec)
    : table_(std::move(table)), spec_(std::move(spec)), bump_(spec_.T, spec_.s) {
  if (!table_) throw Error("planner.table", "plan needs a generating-function table");
  if (spec_.N < 0 || spec_.N > table_->K())
    throw Error("planner.N", "truncation level N exceeds the table depth K");
  if (spec_.samples < 2 || spec_.samples % 2 != 0)
    throw Error("planner.samples", "sample count must be even and >= 2");
  coeffs_ = series_coeffs(*table_, spec_.N);
  const auto ts = time_grid();
  f_samples_ = kernels::sample_control(*this, ts);
  y_samples_.resize(ts.size());
  kernels::parallel_for(static_cast<int>(ts.size()),
                        [&](int i) { y_samples_[i] = y_jet(ts[i], 0)[0]; });
}

Jet Plan::y_jet(double t, int order) const {
  return blend_y(spec_.y0, spec_.yT, bump_, t, order);
}

std::vector<double> Plan::time_grid() const {
  std::vector<double> ts(static_cast<std::size_t>(spec_.samples) + 1);
  for (int i = 0; i <= spec_.samples; ++i) ts[i] = spec_.T * i / spec_.samples;
  ts.back() = spec_.T;
  return ts;
}

double Plan::control(double t, int dt_order) const {
  if (dt_order < 0 || dt_order > 2) throw Error("planner.order", "control derivative order must be 0..2");
  const int N = spec_.N;
  const Jet y = y_jet(t, 2 * N + dt_order);
  CompensatedSum s;
  for (int l = 0; l <= N; ++l) s.add(coeffs_.c[l] * y.derivative(2 * l + dt_order));
  return s.value();
}

double Plan::flat_output(int which, double t, int dt_order) const {
  if (which != 1 && which != 2) throw Error("planner.flat", "flat output index must be 1 or 2");
  const int N = spec_.N;
  const Jet y = y_jet(t, 2 * N + dt_order);
  const auto& coef = which == 1 ? table_->hxL() : table_->gxL();
  CompensatedSum s;
  for (int k = 0; k <= N; ++k) s.add(coef[k] * y.derivative(2 * k + dt_order));
  return which == 1 ? s.value() : -s.value();
}

Plan::Weights Plan::weights(const Jet& y, int dt) const {
  const int N = spec_.N;
  const auto &gxL = table_->gxL(), &hxL = table_->hxL();
  Weights w;
  w.A.resize(static_cast<std::size_t>(N) + 1);
  w.B.resize(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) {
    CompensatedSum a, b;
    for (int j = 0; j + k <= N; ++j) {
      const double d = y.derivative(2 * (j + k) + dt);
      a.add(hxL[j] * d);
      b.add(gxL[j] * d);
    }
    w.A[k] = a.value();
    w.B[k] = b.value();
  }
  return w;
}

double Plan::combine(const Weights& wt, double x, int dx) const {
  CompensatedSum s;
  for (int k = 0; k <= spec_.N; ++k) {
    s.add(table_->eval(Family::g, k, x, dx) * wt.A[k]);
    s.add(-table_->eval(Family::h, k, x, dx) * wt.B[k]);
  }
  return s.value();
}

double Plan::w(double x, double t, int dx, int dt) const {
  if (dx < 0 || dx > 4 || dt < 0 || dt > 2) throw Error("planner.order", "w orders must be <= (4, 2)");
  if (!(t >= 0.0 && t <= spec_.T)) throw Error("planner.t", "t outside [0, T]");
  const Jet y = y_jet(t, 2 * spec_.N + dt);
  return combine(weights(y, dt), x, dx);
}

std::vector<double> Plan::w_row(double t, std::span<const double> xs, int dx, int dt) const {
  if (dx < 0 || dx > 4 || dt < 0 || dt > 2) throw Error("planner.order", "w orders must be <= (4, 2)");
  if (!(t >= 0.0 && t <= spec_.T)) throw Error("planner.t", "t outside [0, T]");
  const Jet y = y_jet(t, 2 * spec_.N + dt);
  const Weights wt = weights(y, dt);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = combine(wt, xs[i], dx);
  return out;
}

BeamState Plan::state_at(double t, int nx) const {
  if (!(t >= 0.0 && t <= spec_.T)) throw Error("planner.t", "t outside [0, T]");
  const double L = params().length;
  const Jet y = y_jet(t, 2 * spec_.N + 1);
  const Weights w0 = weights(y, 0), w1 = weights(y, 1);
  const std::size_t n = static_cast<std::size_t>(nx) + 1;
  std::vector<double> u(n), ux(n), uxx(n), v(n);
  double beta = 0.0;
  for (int i = 0; i <= nx; ++i) {
    const double x = i == nx ? L : L * i / nx;
    u[i] = combine(w0, x, 0);
    ux[i] = combine(w0, x, 1);
    uxx[i] = combine(w0, x, 2);
    v[i] = combine(w1, x, 0);
    if (i == 0) beta = combine(w1, x, 1);
  }
  BeamState z;
  z.alpha = v[0];
  z.beta = beta;
  z.u = GridFunction(0.0, L, std::move(u));
  z.u.set_derivative(1, std::move(ux));
  z.u.set_derivative(2, std::move(uxx));
  z.v = GridFunction(0.0, L, std::move(v));
  return z;
}

Plan plan_transfer(const BeamParams& params, const TrajectoryGen& y0, const TrajectoryGen& yT,
                   double T, double s, int N, int K, int grid_n) {
  if (N < 0) throw Error("planner.N", "N must be >= 0");
  const int levels = K > 0 ? K : default_levels(N);
  auto table = std::make_shared<const GenTable>(compute_gen_tables(params, levels, grid_n));
  PlanSpec spec;
  spec.y0 = y0;
  spec.yT = yT;
  spec.T = T;
  spec.s = s;
  spec.N = N;
  return Plan(std::move(table), std::move(spec));
}

BeamState steady_state(const BeamParams& params, double c, int n) {
  BeamState z = zero_state(params, n);
  std::vector<double> u(static_cast<std::size_t>(n) + 1, c);
  z.u = GridFunction(0.0, params.length, std::move(u));
  z.u.set_derivative(1, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  z.u.set_derivative(2, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  return z;
}

double l2_time_norm(std::span<const double> samples, double T) {
  std::vector<double> sq(samples.begin(), samples.end());
  for (auto& v : sq) v *= v;
  return std::sqrt(simpson(sq, T / static_cast<double>(samples.size() - 1)));
}

}  // namespace beamflat
