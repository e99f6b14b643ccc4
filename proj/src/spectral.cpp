#include "beamflat/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "beamflat/error.hpp"
#include "beamflat/kernels.hpp"
#include "beamflat/realmath.hpp"

namespace beamflat {

namespace {

template <class Real>
struct Cx {
  Real re = 0, im = 0;
  Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Cx operator*(Real s) const { return {re * s, im * s}; }
  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx operator-(const Cx& o) const { return {re - o.re, im - o.im}; }
  Real abs() const { return rm::sqrt(re * re + im * im); }
};

template <class Real>
Real rmax(Real a, Real b) {
  return a < b ? b : a;
}

}  // namespace

template <class Real>
std::complex<double> char_fn(const GenTableT<Real>& table, std::complex<double> lambda) {
  const int K = table.K();
  const Cx<Real> l{Real(lambda.real()), Real(lambda.imag())};
  const Cx<Real> l2 = l * l;
  const std::vector<Real>* coef[4] = {&table.gL(), &table.hxL(), &table.hL(), &table.gxL()};
  Cx<Real> S[4];
  Real tail[4] = {0, 0, 0, 0};
  Cx<Real> p{1, 0};
  for (int k = 0; k <= K; ++k) {
    for (int s = 0; s < 4; ++s) {
      const Cx<Real> term = p * (*coef[s])[k];
      S[s] += term;
      if (k >= K - 1) tail[s] += term.abs();
    }
    p = p * l2;
  }
  for (int s = 0; s < 4; ++s)
    if (tail[s] > Real(1e-12) * rmax(S[s].abs(), Real(1)))
      throw Error("spectral.truncation",
                  "generating series not converged at |lambda| = " + std::to_string(std::abs(lambda)) +
                      "; raise K or lower omega_max");
  const Cx<Real> D = S[0] * S[1] - S[2] * S[3];
  return {static_cast<double>(D.re), static_cast<double>(D.im)};
}

template std::complex<double> char_fn<double>(const GenTable&, std::complex<double>);
template std::complex<double> char_fn<__float128>(const GenTableQ&, std::complex<double>);

double char_fn_imag_axis(const GenTableQ& table, double omega) {
  return char_fn(table, {0.0, omega}).real();
}

int spectral_levels(const BeamParams& params, double omega_max) {
  const auto c = envelope_constants(params);
  const double L = params.length, w2 = omega_max * omega_max;
  // envelope of the largest of the four boundary series terms at level k
  auto log_term = [&](int k) {
    double best = -1e300;
    const double lr1 = std::log(c.R1 * w2), lr2 = std::log(c.R2 * w2);
    for (int q : {1, 2}) best = std::max(best, k * lr1 + (4 * k - q) * std::log(L) - std::lgamma(4.0 * k - q + 1));
    for (int q : {2, 3}) best = std::max(best, k * lr2 + (4 * k - q) * std::log(L) - std::lgamma(4.0 * k - q + 1));
    return best;
  };
  const double target = std::log(1e-12) - std::log(10.0);
  int K = 2;
  while (K < 400 && !(log_term(K) < target && log_term(K - 1) < target)) ++K;
  return K;
}

std::shared_ptr<const GenTableQ> spectral_table(const BeamParams& params, double omega_max,
                                                int grid_n) {
  return std::make_shared<const GenTableQ>(
      compute_gen_tables_t<__float128>(params, spectral_levels(params, omega_max), grid_n));
}

BeamState Eigenpair::re_phi() const {
  BeamState z;
  z.u = u;
  std::vector<double> zero(u.values().size(), 0.0);
  z.v = GridFunction(u.x0(), u.x1(), zero);
  return z;
}

BeamState Eigenpair::im_phi() const {
  BeamState z;
  std::vector<double> zero(u.values().size(), 0.0);
  z.u = GridFunction(u.x0(), u.x1(), zero);
  for (int d = 1; d <= 2; ++d) z.u.set_derivative(d, zero);
  std::vector<double> v(u.values().begin(), u.values().end());
  for (auto& x : v) x *= omega;
  z.v = GridFunction(u.x0(), u.x1(), std::move(v));
  z.alpha = omega * u0;
  z.beta = omega;
  return z;
}

Eigenpair eigenfunction(const GenTableQ& table, double omega, int nx) {
  using Q = __float128;
  const int K = table.K();
  const BeamParams& P = table.params();
  const double L = table.length();
  const Q w2 = Q(omega) * Q(omega);
  std::vector<Q> pw(static_cast<std::size_t>(K) + 1);
  pw[0] = 1;
  for (int k = 1; k <= K; ++k) pw[k] = pw[k - 1] * (-w2);

  Eigenpair e;
  e.omega = omega;
  e.lambda = {0.0, omega};
  Q Gx = 0, Hx = 0;
  for (int k = 0; k <= K; ++k) {
    Gx += table.gxL()[k] * pw[k];
    Hx += table.hxL()[k] * pw[k];
  }
  if (!(Gx > 0)) throw Error("spectral.denominator", "sum g_j,x(L) lambda^(2j) is not positive");
  e.denominator = static_cast<double>(Gx);
  const Q u0 = -Hx / Gx;
  e.u0 = static_cast<double>(u0);

  auto mode = [&](Q x, Q out[5]) {
    for (int d = 0; d < 5; ++d) out[d] = 0;
    Q g[5], h[5];
    for (int k = 0; k <= K; ++k) {
      table.eval_all(Family::g, k, x, g);
      table.eval_all(Family::h, k, x, h);
      for (int d = 0; d < 5; ++d) out[d] += (u0 * g[d] + h[d]) * pw[k];
    }
  };
  std::vector<std::vector<double>> tab(5, std::vector<double>(static_cast<std::size_t>(nx) + 1));
  for (int i = 0; i <= nx; ++i) {
    Q out[5];
    mode(i == nx ? Q(L) : Q(L) * i / nx, out);
    for (int d = 0; d < 5; ++d) tab[d][i] = static_cast<double>(out[d]);
  }
  double umax = 0, uxmax = 0;
  for (int i = 0; i <= nx; ++i) {
    umax = std::max(umax, std::abs(tab[0][i]));
    uxmax = std::max(uxmax, std::abs(tab[1][i]));
  }
  Q at0[5], atL[5];
  mode(0, at0);
  mode(Q(L), atL);
  e.residuals.uL = std::abs(static_cast<double>(atL[0])) / umax;
  e.residuals.uxL = std::abs(static_cast<double>(atL[1])) / uxmax;
  const Q EI0 = P.EI.eval<Q>(0, 0), dEI0 = P.EI.eval<Q>(0, 1);
  const Q m = P.tip_mass, J = P.tip_inertia;
  const Q shear_a = -m * w2 * at0[0], shear_b = dEI0 * at0[2] + EI0 * at0[3];
  e.residuals.shear = static_cast<double>(rm::abs(shear_a + shear_b) /
                                          rmax(rm::abs(shear_a) + rm::abs(shear_b), Q(1e-300)));
  const Q mom_a = -J * w2 * at0[1], mom_b = -EI0 * at0[2];
  e.residuals.moment = static_cast<double>(rm::abs(mom_a + mom_b) /
                                           rmax(rm::abs(mom_a) + rm::abs(mom_b), Q(1e-300)));
  e.u = GridFunction(0.0, L, std::move(tab[0]));
  for (int d = 1; d <= 4; ++d) e.u.set_derivative(d, std::move(tab[d]));
  return e;
}

Spectrum find_eigenvalues(std::shared_ptr<const GenTableQ> table, double omega_max, int n_max,
                          int nx, int scan_points) {
  if (!table) throw Error("spectral.table", "missing generating-function table");
  if (!(omega_max > 1.0)) throw Error("spectral.omega_max", "omega_max must exceed 1");
  if (scan_points < 2) throw Error("spectral.scan", "need at least two scan points");
  Spectrum sp;
  sp.table = table;
  sp.omega_max = omega_max;
  if (table->K() > 40)
    sp.warnings.push_back("spectral table depth K = " + std::to_string(table->K()) + " exceeds 40");
  std::vector<double> om(static_cast<std::size_t>(scan_points));
  const double lmax = std::log(omega_max);
  for (int i = 0; i < scan_points; ++i) om[i] = std::exp(lmax * i / (scan_points - 1));
  om.back() = omega_max;
  const auto D = kernels::scan_char_fn(*table, om);

  std::vector<std::pair<double, double>> brackets;
  for (int i = 0; i + 1 < scan_points; ++i)
    if ((D[i] < 0) != (D[i + 1] < 0) || D[i] == 0.0) brackets.emplace_back(om[i], om[i + 1]);
  if (static_cast<int>(brackets.size()) > n_max) brackets.resize(static_cast<std::size_t>(n_max));

  std::vector<double> roots(brackets.size());
  kernels::parallel_for(static_cast<int>(brackets.size()), [&](int b) {
    double lo = brackets[b].first, hi = brackets[b].second;
    double flo = char_fn_imag_axis(*table, lo);
    while (hi - lo > 1e-10 * hi) {
      const double mid = 0.5 * (lo + hi);
      const double fm = char_fn_imag_axis(*table, mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots[b] = 0.5 * (lo + hi);
  });
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (!(roots[i] > roots[i - 1])) throw Error("spectral.simple", "eigenfrequencies not strictly increasing");
  if (static_cast<int>(roots.size()) < n_max)
    sp.warnings.push_back("found " + std::to_string(roots.size()) + " of " + std::to_string(n_max) +
                          " requested modes below omega_max");
  sp.modes.resize(roots.size());
  kernels::parallel_for(static_cast<int>(roots.size()),
                        [&](int i) { sp.modes[i] = eigenfunction(*table, roots[i], nx); });
  return sp;
}

double shooting_residual(const BeamParams& params, double omega, int steps) {
  using State = std::array<double, 8>;
  const double w2 = omega * omega;
  auto rhs = [&](const State& y, State& dy, double x) {
    const double EI = params.EI(x), rho = params.rho(x);
    for (int s = 0; s < 2; ++s) {
      const int o = 4 * s;
      dy[o + 0] = y[o + 1];
      dy[o + 1] = y[o + 2] / EI;
      dy[o + 2] = y[o + 3];
      dy[o + 3] = w2 * rho * y[o + 0];
    }
  };
  // [u, u_x, M = EI u_xx, S = M_x]; tip: S(0) = m w^2 u(0), M(0) = -J w^2 u_x(0)
  State y{1.0, 0.0, 0.0, params.tip_mass * w2, 0.0, 1.0, -params.tip_inertia * w2, 0.0};
  boost::numeric::odeint::runge_kutta4<State> stepper;
  boost::numeric::odeint::integrate_n_steps(stepper, rhs, y, 0.0, params.length / steps, steps);
  return y[0] * y[5] - y[4] * y[1];
}

std::vector<double> shooting_eigenfrequencies(const BeamParams& params, double omega_max,
                                              int n_max, int scan_points) {
  std::vector<double> roots;
  double lo = omega_max / scan_points * 0.5;
  double flo = shooting_residual(params, lo);
  for (int i = 1; i <= scan_points && static_cast<int>(roots.size()) < n_max; ++i) {
    const double hi = omega_max * i / scan_points;
    const double fhi = shooting_residual(params, hi);
    if ((flo < 0) != (fhi < 0)) {
      double a = lo, b = hi, fa = flo;
      for (int it = 0; it < 200 && b - a > 1e-13 * b; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = shooting_residual(params, m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    flo = fhi;
  }
  return roots;
}

double clamped_free_beta1L() {
  auto f = [](double x) { return std::cos(x) * std::cosh(x) + 1.0; };
  double a = 1.5, b = 2.5;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if ((f(m) < 0) == (f(a) < 0))
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

namespace {

struct Vec {
  std::vector<double> u, uxx, v;
  double alpha = 0, beta = 0;
  StateArrays view() const { return {u, uxx, v, alpha, beta}; }
};

}  // namespace

Projection project_state(const Spectrum& spectrum, const BeamState& z, int n_modes) {
  if (!spectrum.table) throw Error("spectral.table", "spectrum has no table");
  if (n_modes < 0 || n_modes > static_cast<int>(spectrum.modes.size()))
    throw Error("spectral.n_modes", "n_modes exceeds the number of computed modes");
  const BeamParams& P = spectrum.table->params();
  const int nx = z.u.intervals();
  const double x0 = z.u.x0(), x1 = z.u.x1();
  const std::size_t n = static_cast<std::size_t>(nx) + 1;

  Vec target;
  target.u.assign(z.u.values().begin(), z.u.values().end());
  target.uxx = second_derivative(z.u);
  target.v.assign(z.v.values().begin(), z.v.values().end());
  target.alpha = z.alpha;
  target.beta = z.beta;

  std::vector<Vec> basis(1 + 2 * static_cast<std::size_t>(n_modes));
  basis[0].u.assign(n, 1.0);
  basis[0].uxx.assign(n, 0.0);
  basis[0].v.assign(n, 0.0);
  kernels::parallel_for(n_modes, [&](int m) {
    const double om = spectrum.modes[m].omega;
    const Eigenpair e = eigenfunction(*spectrum.table, om, nx);
    Vec& re = basis[1 + 2 * m];
    Vec& im = basis[2 + 2 * m];
    re.u.assign(e.u.values().begin(), e.u.values().end());
    re.uxx.assign(e.u.derivative(2).begin(), e.u.derivative(2).end());
    re.v.assign(n, 0.0);
    im.u.assign(n, 0.0);
    im.uxx.assign(n, 0.0);
    im.v = re.u;
    for (auto& x : im.v) x *= om;
    im.alpha = om * e.u0;
    im.beta = om;
  });

  const int nb = static_cast<int>(basis.size());
  std::vector<double> scale(static_cast<std::size_t>(nb));
  for (int a = 0; a < nb; ++a)
    scale[a] = std::sqrt(z_inner(basis[a].view(), basis[a].view(), P, x0, x1));
  Eigen::MatrixXd G(nb, nb);
  Eigen::VectorXd r(nb);
  for (int a = 0; a < nb; ++a) {
    r(a) = z_inner(basis[a].view(), target.view(), P, x0, x1) / scale[a];
    for (int b = a; b < nb; ++b) {
      G(a, b) = z_inner(basis[a].view(), basis[b].view(), P, x0, x1) / (scale[a] * scale[b]);
      G(b, a) = G(a, b);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Projection pr;
  pr.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(pr.condition < 1e14))
    throw Error("spectral.rank", "projection Gram matrix is rank deficient (condition " +
                                     std::to_string(pr.condition) + ")");
  const Eigen::VectorXd c = svd.solve(r);

  Vec res = target;
  pr.coeffs.resize(static_cast<std::size_t>(nb));
  for (int a = 0; a < nb; ++a) {
    const double ca = c(a) / scale[a];
    pr.coeffs[a] = ca;
    for (std::size_t i = 0; i < n; ++i) {
      res.u[i] -= ca * basis[a].u[i];
      res.uxx[i] -= ca * basis[a].uxx[i];
      res.v[i] -= ca * basis[a].v[i];
    }
    res.alpha -= ca * basis[a].alpha;
    res.beta -= ca * basis[a].beta;
  }
  const double zn = std::sqrt(z_inner(target.view(), target.view(), P, x0, x1));
  const double rn = std::sqrt(std::max(0.0, z_inner(res.view(), res.view(), P, x0, x1)));
  pr.residual = zn > 0 ? rn / zn : rn;
  return pr;
}

}  // namespace beamflat
