#include "beamflat/sim.hpp"

#include <lapacke.h>

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>

#include "beamflat/error.hpp"
#include "beamflat/planner.hpp"

namespace beamflat {

void SimConfig::validate() const {
  if (nx < 32 || nx % 2 != 0) throw Error("sim.nx", "nx must be even and >= 32");
  if (!(dt > 0.0)) throw Error("sim.dt", "dt must be positive");
  if (!(t_end > 0.0)) throw Error("sim.t_end", "t_end must be positive");
  if (!(snapshot_every > 0.0)) throw Error("sim.snapshot", "snapshot interval must be positive");
}

ControlSignal::ControlSignal(Fn fn, double horizon, bool constant)
    : fn_(std::move(fn)), horizon_(horizon), constant_(constant) {}

ControlSignal ControlSignal::constant(double c) {
  return ControlSignal([c](double, int order) { return order == 0 ? c : 0.0; }, INFINITY, true);
}

ControlSignal ControlSignal::from_plan(std::shared_ptr<const Plan> plan) {
  const double T = plan->spec().T;
  return ControlSignal(
      [plan, T](double t, int order) { return plan->control(std::clamp(t, 0.0, T), order); }, T);
}

ControlSignal ControlSignal::from_samples(std::vector<double> values, double t0, double dt) {
  if (values.size() < 4) throw Error("input.samples", "need at least 4 input samples");
  auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
      values.begin(), values.end(), t0, dt);
  const double t1 = t0 + dt * static_cast<double>(values.size() - 1);
  ControlSignal s(
      [spline, t0, t1](double t, int order) {
        t = std::clamp(t, t0, t1);
        if (order == 0) return (*spline)(t);
        if (order == 1) return spline->prime(t);
        return spline->double_prime(t);
      },
      t1);
  s.warnings_.push_back("input derivatives come from cubic-spline differentiation of samples");
  return s;
}

double ControlSignal::operator()(double t, int order) const {
  if (order < 0 || order > 2) throw Error("input.order", "input derivative order must be 0..2");
  return fn_(t, order);
}

ControlSignal operator+(const ControlSignal& a, const ControlSignal& b) {
  ControlSignal s([a, b](double t, int o) { return a(t, o) + b(t, o); },
                  std::min(a.horizon_, b.horizon_), a.constant_ && b.constant_);
  return s;
}

ControlSignal operator*(double k, const ControlSignal& a) {
  return ControlSignal([k, a](double t, int o) { return k * a(t, o); }, a.horizon_, a.constant_);
}

namespace {

// Unknowns q = [theta, w~_0 .. w~_(N-1)] with w~ = w - f, so w~_N = 0.
// Curvatures: k_0 = 2(w_1 - w_0 - h theta)/h^2 (ghost node from the slope),
// k_i central, k_N = 2(w_(N-1) - w_N)/h^2 (ghost from the clamped slope).
// The potential 1/2 sum_i c_i h EI_i k_i^2 (c = 1/2 at both ends) gives
// K = D^T W D, which reproduces the ghost-node elimination of the tip moment
// and shear conditions.
struct Discretization {
  int N = 0;
  double h = 0.0;
  std::vector<double> W;     // N + 1 curvature weights
  std::vector<double> mass;  // N + 1 lumped masses (theta first)

  void curvature(const std::vector<double>& q, std::vector<double>& k) const {
    k.assign(static_cast<std::size_t>(N) + 1, 0.0);
    const double h2 = h * h;
    auto w = [&](int i) { return i < N ? q[static_cast<std::size_t>(i) + 1] : 0.0; };
    k[0] = 2.0 * (w(1) - w(0) - h * q[0]) / h2;
    for (int i = 1; i < N; ++i) k[i] = (w(i - 1) - 2.0 * w(i) + w(i + 1)) / h2;
    k[N] = 2.0 * w(N - 1) / h2;
  }

  void stiffness_apply(const std::vector<double>& q, std::vector<double>& out) const {
    std::vector<double> k;
    curvature(q, k);
    for (int i = 0; i <= N; ++i) k[i] *= W[i];
    out.assign(q.size(), 0.0);
    const double h2 = h * h;
    auto add_w = [&](int i, double v) {
      if (i < N) out[static_cast<std::size_t>(i) + 1] += v;
    };
    out[0] += -2.0 * h / h2 * k[0];
    add_w(1, 2.0 / h2 * k[0]);
    add_w(0, -2.0 / h2 * k[0]);
    for (int i = 1; i < N; ++i) {
      add_w(i - 1, k[i] / h2);
      add_w(i, -2.0 * k[i] / h2);
      add_w(i + 1, k[i] / h2);
    }
    add_w(N - 1, 2.0 / h2 * k[N]);
  }

  double energy(const std::vector<double>& q, const std::vector<double>& v) const {
    std::vector<double> k;
    curvature(q, k);
    double e = 0.0;
    for (int i = 0; i <= N; ++i) e += W[i] * k[i] * k[i] + mass[i] * v[i] * v[i];
    return 0.5 * e;
  }

  // Lower band (kd = 2) of K + s M in LAPACK column-major band storage.
  std::vector<double> band(double s) const {
    const int n = N + 1, kd = 2, ld = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ld) * n, 0.0);
    auto add = [&](int i, int j, double v) {
      if (i >= n || j >= n) return;
      if (i < j) std::swap(i, j);
      ab[static_cast<std::size_t>(i - j) + static_cast<std::size_t>(j) * ld] += v;
    };
    const double h2 = h * h;
    for (int r = 0; r <= N; ++r) {
      int col[3];
      double c[3];
      if (r == 0) {
        col[0] = 0, col[1] = 1, col[2] = 2;
        c[0] = -2.0 * h / h2, c[1] = -2.0 / h2, c[2] = 2.0 / h2;
      } else if (r < N) {
        col[0] = r, col[1] = r + 1, col[2] = r + 2;
        c[0] = 1.0 / h2, c[1] = -2.0 / h2, c[2] = 1.0 / h2;
      } else {
        col[0] = N, col[1] = n, col[2] = n;
        c[0] = 2.0 / h2, c[1] = 0.0, c[2] = 0.0;
      }
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b <= a; ++b) {
          if (col[a] >= n || col[b] >= n) continue;
          const double v = W[r] * c[a] * c[b];
          add(col[a], col[b], v);
        }
    }
    for (int i = 0; i < n; ++i) add(i, i, s * mass[i]);
    return ab;
  }
};

Discretization discretize(const BeamParams& P, int N) {
  Discretization d;
  d.N = N;
  d.h = P.length / N;
  d.W.resize(static_cast<std::size_t>(N) + 1);
  d.mass.resize(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) {
    const double x = P.length * i / N;
    const double c = (i == 0 || i == N) ? 0.5 : 1.0;
    d.W[i] = c * d.h * P.EI(x);
  }
  d.mass[0] = P.tip_inertia;
  d.mass[1] = P.tip_mass + 0.5 * d.h * P.rho(0.0);
  for (int i = 1; i < N; ++i) d.mass[static_cast<std::size_t>(i) + 1] = d.h * P.rho(P.length * i / N);
  return d;
}

BeamState make_state(const BeamParams& P, int N, const std::vector<double>& q,
                     const std::vector<double>& v, double f, double ft) {
  std::vector<double> u(static_cast<std::size_t>(N) + 1), vel(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i < N; ++i) {
    u[i] = q[static_cast<std::size_t>(i) + 1] + f;
    vel[i] = v[static_cast<std::size_t>(i) + 1] + ft;
  }
  u[N] = f;
  vel[N] = ft;
  BeamState z;
  z.alpha = vel[0];
  z.beta = v[0];
  z.u = GridFunction(0.0, P.length, std::move(u));
  z.v = GridFunction(0.0, P.length, std::move(vel));
  return z;
}

}  // namespace

SimResult simulate(const BeamParams& params, const BeamState& z0, const ControlSignal& f,
                   const SimConfig& cfg) {
  cfg.validate();
  params.validate();
  const int N = cfg.nx;
  if (z0.u.intervals() != N || z0.v.intervals() != N)
    throw Error("sim.grid", "initial state grid does not match nx");
  if (!is_compatible(f(0.0), z0))
    throw Error("sim.compat", "input is not compatible with the initial state: f(0) != u(L)");
  const long steps = std::lround(cfg.t_end / cfg.dt);
  if (std::abs(steps * cfg.dt - cfg.t_end) > 1e-9 * cfg.t_end)
    throw Error("sim.dt", "t_end is not a whole number of time steps");
  if (f.horizon() < cfg.t_end * (1 - 1e-12))
    throw Error("sim.horizon", "input is defined on a shorter horizon than t_end");

  const Discretization d = discretize(params, N);
  const int n = N + 1;
  const double dt = cfg.dt;
  const double c0 = 4.0 / (dt * dt), c1 = 4.0 / dt;

  std::vector<double> ab = d.band(c0);
  if (LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', n, 2, ab.data(), 3) != 0)
    throw Error("sim.factor", "effective stiffness matrix is not positive definite");

  // initial data in shifted variables
  const double f0 = f(0.0), f0t = f(0.0, 1);
  std::vector<double> q(n), v(n), a(n), rhs(n), Kq;
  q[0] = z0.u.has_derivative(1) ? z0.u.derivative(1)[0] : first_derivative_at(z0.u, 0);
  v[0] = z0.beta;
  for (int i = 0; i < N; ++i) {
    q[static_cast<std::size_t>(i) + 1] = z0.u[i] - f0;
    v[static_cast<std::size_t>(i) + 1] = z0.v[i] - f0t;
  }
  v[1] = z0.alpha - f0t;
  auto load = [&](double t, std::vector<double>& F) {
    const double ftt = f(t, 2);
    F[0] = 0.0;
    for (int i = 1; i < n; ++i) F[i] = -d.mass[i] * ftt;
  };
  d.stiffness_apply(q, Kq);
  load(0.0, rhs);
  for (int i = 0; i < n; ++i) a[i] = (rhs[i] - Kq[i]) / d.mass[i];

  SimResult res;
  res.nx = N;
  res.dt = dt;
  res.constant_input = f.is_constant();
  const long every = std::max(1L, std::lround(cfg.snapshot_every / dt));
  auto record = [&](long k, double t) {
    const double ft = f(t), ftt = f(t, 1);
    res.tip_times.push_back(t);
    res.tip_w.push_back(q[1] + ft);
    res.tip_wx.push_back(q[0]);
    if (k % every == 0 || k == steps) {
      res.snapshot_times.push_back(t);
      res.snapshots.push_back(make_state(params, N, q, v, ft, ftt));
      res.energy.push_back(d.energy(q, v));
    }
  };
  record(0, 0.0);

  std::vector<double> qn(n), an(n);
  for (long k = 1; k <= steps; ++k) {
    const double t = k == steps ? cfg.t_end : k * dt;
    load(t, rhs);
    for (int i = 0; i < n; ++i) rhs[i] += d.mass[i] * (c0 * q[i] + c1 * v[i] + a[i]);
    if (!std::all_of(rhs.begin(), rhs.end(), [](double x) { return std::isfinite(x); }))
      throw Error("sim.finite", "non-finite load or state at step " + std::to_string(k));
    if (LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'L', n, 2, 1, ab.data(), 3, rhs.data(), n) != 0)
      throw Error("sim.solve", "banded solve failed at step " + std::to_string(k));
    for (int i = 0; i < n; ++i) {
      qn[i] = rhs[i];
      an[i] = c0 * (qn[i] - q[i]) - c1 * v[i] - a[i];
      v[i] += 0.5 * dt * (a[i] + an[i]);
      if (!std::isfinite(qn[i]) || !std::isfinite(v[i]))
        throw Error("sim.finite", "non-finite state at step " + std::to_string(k));
    }
    q.swap(qn);
    a.swap(an);
    record(k, t);
  }
  res.terminal = res.snapshots.back();
  return res;
}

double energy_audit(const SimResult& result) {
  if (!result.constant_input)
    throw Error("sim.audit", "energy audit requires a constant input");
  if (result.energy.empty()) return 0.0;
  const double e0 = result.energy.front();
  double drift = 0.0;
  for (double e : result.energy) drift = std::max(drift, std::abs(e - e0));
  if (e0 == 0.0) return drift;
  return drift / e0;
}

double continuity_probe(const BeamParams& params, const BeamState& z0, const ControlSignal& f,
                        const ControlSignal& df, const SimConfig& cfg) {
  if (df(0.0) != 0.0) throw Error("sim.compat", "perturbation must vanish at t = 0");
  const long steps = std::lround(cfg.t_end / cfg.dt);
  double c2 = 0.0, s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (long k = 0; k <= steps; ++k) {
    const double t = std::min(k * cfg.dt, cfg.t_end);
    s0 = std::max(s0, std::abs(df(t, 0)));
    s1 = std::max(s1, std::abs(df(t, 1)));
    s2 = std::max(s2, std::abs(df(t, 2)));
  }
  c2 = s0 + s1 + s2;
  if (c2 == 0.0) return 0.0;
  const SimResult base = simulate(params, z0, f, cfg);
  const SimResult pert = simulate(params, z0, f + df, cfg);
  double sup = 0.0;
  for (std::size_t i = 0; i < base.snapshots.size(); ++i)
    sup = std::max(sup, z_norm(pert.snapshots[i] - base.snapshots[i], params));
  return sup / c2;
}

}  // namespace beamflat
