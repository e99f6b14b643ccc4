#include "beamflat/model.hpp"

#include <algorithm>
#include <cmath>

#include "beamflat/error.hpp"

namespace beamflat {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Profile Profile::affine(double a, double b) {
  Profile p;
  p.kind_ = Kind::affine;
  p.a_ = a;
  p.b_ = b;
  return p;
}

Profile Profile::sampled(std::vector<double> samples, double length) {
  if (samples.size() < 6)
    throw Error("profile.samples", "a sampled profile needs at least 6 samples");
  if (!(length > 0.0)) throw Error("profile.length", "sampled profile length must be positive");
  if (!all_finite(samples)) throw Error("profile.finite", "non-finite profile sample");
  Profile p;
  p.kind_ = Kind::sampled;
  p.samples_ = std::move(samples);
  p.length_ = length;
  return p;
}

template <class Real>
Real Profile::eval(Real x, int deriv) const {
  if (deriv < 0 || deriv > 2) throw Error("profile.deriv", "profile derivative order must be 0..2");
  if (kind_ == Kind::affine) {
    const Real a = a_, b = b_;
    if (deriv == 0) return a * (Real(1) + b * x);
    if (deriv == 1) return a * b;
    return Real(0);
  }
  // Six-point Lagrange stencil around x; derivatives of the basis polynomials
  // are expanded as sums of products so nodes are not singular.
  const int n = static_cast<int>(samples_.size()) - 1;
  const Real h = Real(length_) / Real(n);
  int start = static_cast<int>(static_cast<double>(x / h)) - 2;
  start = std::clamp(start, 0, n - 5);
  Real t[6];
  for (int i = 0; i < 6; ++i) t[i] = x - Real(start + i) * h;
  Real sum = 0;
  for (int j = 0; j < 6; ++j) {
    Real denom = 1;
    for (int q = 0; q < 6; ++q)
      if (q != j) denom *= Real(j - q) * h;
    Real num = 0;
    if (deriv == 0) {
      num = 1;
      for (int q = 0; q < 6; ++q)
        if (q != j) num *= t[q];
    } else if (deriv == 1) {
      for (int a = 0; a < 6; ++a) {
        if (a == j) continue;
        Real prod = 1;
        for (int q = 0; q < 6; ++q)
          if (q != j && q != a) prod *= t[q];
        num += prod;
      }
    } else {
      for (int a = 0; a < 6; ++a) {
        if (a == j) continue;
        for (int b = 0; b < 6; ++b) {
          if (b == j || b == a) continue;
          Real prod = 1;
          for (int q = 0; q < 6; ++q)
            if (q != j && q != a && q != b) prod *= t[q];
          num += prod;
        }
      }
    }
    sum += Real(samples_[static_cast<std::size_t>(start + j)]) * num / denom;
  }
  return sum;
}

template double Profile::eval<double>(double, int) const;
template __float128 Profile::eval<__float128>(__float128, int) const;

void BeamParams::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw Error("params.L", "length L must be positive");
  if (!(tip_mass > 0.0)) throw Error("params.m", "tip mass m must be positive");
  if (!(tip_inertia > 0.0)) throw Error("params.J", "tip inertia J must be positive");
  if (grid_n < 2 || grid_n % 2 != 0) throw Error("params.grid_n", "grid_n must be even and >= 2");
  if (!(min_rho() > 0.0)) throw Error("params.rho", "rho must be positive on [0, L]");
  if (!(min_EI() > 0.0)) throw Error("params.EI", "EI must be positive on [0, L]");
}

namespace {
template <class F>
double grid_extreme(const BeamParams& p, const Profile& prof, F pick) {
  const int n = std::max(p.grid_n, 2);
  double best = prof(0.0);
  for (int i = 0; i <= n; ++i) best = pick(best, prof(p.length * i / n));
  return best;
}
}  // namespace

double BeamParams::min_rho() const {
  return grid_extreme(*this, rho, [](double a, double b) { return std::min(a, b); });
}
double BeamParams::max_rho() const {
  return grid_extreme(*this, rho, [](double a, double b) { return std::max(a, b); });
}
double BeamParams::min_EI() const {
  return grid_extreme(*this, EI, [](double a, double b) { return std::min(a, b); });
}

GridFunction::GridFunction(double x0, double x1, std::vector<double> values)
    : x0_(x0), x1_(x1), values_(std::move(values)) {
  if (values_.size() < 2) throw Error("grid.size", "a grid function needs at least two samples");
  if (!(x1_ > x0_)) throw Error("grid.domain", "grid domain must satisfy x1 > x0");
}

bool GridFunction::has_derivative(int order) const {
  return order >= 1 && order <= 4 && !derivs_[static_cast<std::size_t>(order - 1)].empty();
}

std::span<const double> GridFunction::derivative(int order) const {
  if (!has_derivative(order)) throw Error("grid.deriv", "derivative table not present");
  return derivs_[static_cast<std::size_t>(order - 1)];
}

void GridFunction::set_derivative(int order, std::vector<double> table) {
  if (order < 1 || order > 4) throw Error("grid.deriv", "derivative order must be 1..4");
  if (table.size() != values_.size())
    throw Error("grid.deriv", "derivative table length differs from values");
  derivs_[static_cast<std::size_t>(order - 1)] = std::move(table);
}

BeamState zero_state(const BeamParams& params, int n) {
  BeamState z;
  z.u = GridFunction(0.0, params.length, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  z.v = z.u;
  return z;
}

double simpson(std::span<const double> values, double h) {
  const std::size_t n = values.size() - 1;
  if (values.size() < 3 || n % 2 != 0)
    throw Error("quad.simpson", "Simpson's rule needs an even number of intervals");
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i < n; i += 2) odd += values[i];
  for (std::size_t i = 2; i < n; i += 2) even += values[i];
  return h / 3.0 * (values.front() + values.back() + 4.0 * odd + 2.0 * even);
}

std::vector<double> second_derivative(const GridFunction& u) {
  if (u.has_derivative(2)) {
    auto d = u.derivative(2);
    return {d.begin(), d.end()};
  }
  const int n = u.intervals();
  if (n < 6) throw Error("grid.size", "finite-difference u_xx needs at least 6 intervals");
  const double c = 1.0 / (12.0 * u.step() * u.step());
  auto v = u.values();
  std::vector<double> out(v.size());
  for (int i = 2; i <= n - 2; ++i)
    out[i] = c * (-v[i - 2] + 16 * v[i - 1] - 30 * v[i] + 16 * v[i + 1] - v[i + 2]);
  out[0] = c * (45 * v[0] - 154 * v[1] + 214 * v[2] - 156 * v[3] + 61 * v[4] - 10 * v[5]);
  out[1] = c * (10 * v[0] - 15 * v[1] - 4 * v[2] + 14 * v[3] - 6 * v[4] + v[5]);
  out[n] = c * (45 * v[n] - 154 * v[n - 1] + 214 * v[n - 2] - 156 * v[n - 3] + 61 * v[n - 4] -
                10 * v[n - 5]);
  out[n - 1] = c * (10 * v[n] - 15 * v[n - 1] - 4 * v[n - 2] + 14 * v[n - 3] - 6 * v[n - 4] +
                    v[n - 5]);
  return out;
}

double first_derivative_at(const GridFunction& u, int i) {
  if (u.has_derivative(1)) return u.derivative(1)[static_cast<std::size_t>(i)];
  const int n = u.intervals();
  if (n < 4) throw Error("grid.size", "finite-difference u_x needs at least 4 intervals");
  auto v = u.values();
  const double c = 1.0 / (12.0 * u.step());
  if (i >= 2 && i <= n - 2) return c * (v[i - 2] - 8 * v[i - 1] + 8 * v[i + 1] - v[i + 2]);
  static constexpr double left[2][5] = {{-25, 48, -36, 16, -3}, {-3, -10, 18, -6, 1}};
  double acc = 0;
  if (i < 2) {
    for (int q = 0; q < 5; ++q) acc += left[i][q] * v[q];
  } else {
    for (int q = 0; q < 5; ++q) acc -= left[n - i][q] * v[n - q];
  }
  return c * acc;
}

double z_inner(const StateArrays& a, const StateArrays& b, const BeamParams& params, double x0,
               double x1, bool with_plain_u) {
  const std::size_t m = a.u.size();
  if (b.u.size() != m || a.uxx.size() != m || b.uxx.size() != m || a.v.size() != m ||
      b.v.size() != m)
    throw Error("z.grid", "mismatched grid lengths in Z inner product");
  const double h = (x1 - x0) / static_cast<double>(m - 1);
  std::vector<double> stiff(m), plain(m), kin(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = x0 + static_cast<double>(i) * h;
    stiff[i] = params.EI(x) * a.uxx[i] * b.uxx[i];
    plain[i] = a.u[i] * b.u[i];
    kin[i] = params.rho(x) * a.v[i] * b.v[i];
  }
  double s = simpson(stiff, h) + simpson(kin, h) + params.tip_mass * a.alpha * b.alpha +
             params.tip_inertia * a.beta * b.beta;
  if (with_plain_u) s += simpson(plain, h);
  if (!std::isfinite(s)) throw Error("z.finite", "non-finite value in Z inner product");
  return s;
}

namespace {

void check_state_grid(const BeamState& z, const BeamParams& params) {
  if (z.u.intervals() != z.v.intervals())
    throw Error("z.grid", "u and v grids have different lengths");
  if (z.u.x0() != 0.0 || std::abs(z.u.x1() - params.length) > 1e-12 * params.length)
    throw Error("z.grid", "state grid does not span [0, L]");
  if (!all_finite(z.u.values()) || !all_finite(z.v.values()) || !std::isfinite(z.alpha) ||
      !std::isfinite(z.beta))
    throw Error("z.finite", "non-finite state sample");
}

double norm_impl(const BeamState& z, const BeamParams& params, bool plain) {
  const auto uxx = second_derivative(z.u);
  StateArrays a{z.u.values(), uxx, z.v.values(), z.alpha, z.beta};
  return std::sqrt(std::max(0.0, z_inner(a, a, params, z.u.x0(), z.u.x1(), plain)));
}

}  // namespace

double z_norm(const BeamState& z, const BeamParams& params) {
  check_state_grid(z, params);
  return norm_impl(z, params, true);
}

double tilde_z_norm(const BeamState& z, const BeamParams& params) {
  check_state_grid(z, params);
  if (std::abs(z.u.back()) > compat_tolerance(0.0))
    throw Error("ztilde.uL", "state is not in Z-tilde: u(L) != 0");
  return norm_impl(z, params, false);
}

double h2_norm(const GridFunction& u) {
  const auto uxx = second_derivative(u);
  const int n = u.intervals();
  std::vector<double> acc(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double ux = first_derivative_at(u, i);
    acc[i] = u[i] * u[i] + ux * ux + uxx[i] * uxx[i];
  }
  return std::sqrt(simpson(acc, u.step()));
}

double l2_norm(const GridFunction& u) {
  std::vector<double> acc(u.values().begin(), u.values().end());
  for (auto& a : acc) a *= a;
  return std::sqrt(simpson(acc, u.step()));
}

double compat_tolerance(double uL) { return 1e-9 * std::max(1.0, std::abs(uL)); }

bool is_compatible(double f0, const BeamState& state, std::optional<double> tol) {
  const double uL = state.u.back();
  return std::abs(f0 - uL) <= tol.value_or(compat_tolerance(uL));
}

namespace {

GridFunction combine(const GridFunction& a, const GridFunction& b, double sa, double sb) {
  if (a.intervals() != b.intervals() || a.x0() != b.x0() || a.x1() != b.x1())
    throw Error("z.grid", "state grids differ");
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = sa * a.values()[i] + sb * b.values()[i];
  GridFunction out(a.x0(), a.x1(), std::move(v));
  for (int k = 1; k <= 4; ++k) {
    if (!a.has_derivative(k) || !b.has_derivative(k)) continue;
    std::vector<double> d(out.values().size());
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = sa * a.derivative(k)[i] + sb * b.derivative(k)[i];
    out.set_derivative(k, std::move(d));
  }
  return out;
}

}  // namespace

BeamState operator-(const BeamState& a, const BeamState& b) {
  return {combine(a.u, b.u, 1.0, -1.0), combine(a.v, b.v, 1.0, -1.0), a.alpha - b.alpha,
          a.beta - b.beta};
}

BeamState operator+(const BeamState& a, const BeamState& b) {
  return {combine(a.u, b.u, 1.0, 1.0), combine(a.v, b.v, 1.0, 1.0), a.alpha + b.alpha,
          a.beta + b.beta};
}

BeamState operator*(double s, const BeamState& a) {
  return {combine(a.u, a.u, s, 0.0), combine(a.v, a.v, s, 0.0), s * a.alpha, s * a.beta};
}

}  // namespace beamflat
