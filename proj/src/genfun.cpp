#include "beamflat/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamflat/error.hpp"
#include "beamflat/realmath.hpp"

namespace beamflat {

namespace {

constexpr int kPanelNodes = 16;
constexpr int kGeoPanels = 48;

// Chebyshev-Lobatto nodes on [-1, 1] (ascending) and the cumulative
// integration matrix Q with (Q f)_j = integral from -1 to s_j of the
// interpolant, built in quad precision through the Chebyshev coefficients.
struct Reference {
  std::vector<__float128> nodes;
  std::vector<__float128> Q;  // row-major p x p
  std::vector<__float128> bary;
};

const Reference& reference() {
  static const Reference ref = [] {
    const int p = kPanelNodes, n = p - 1;
    const __float128 pi = rm::pi<__float128>();
    Reference r;
    r.nodes.resize(p);
    for (int j = 0; j < p; ++j) r.nodes[j] = -cosq(pi * j / n);
    // T_m(s_j) = cos(m theta_j), theta_j = pi (n - j) / n
    std::vector<__float128> T(static_cast<std::size_t>(p) * p);
    for (int m = 0; m < p; ++m)
      for (int j = 0; j < p; ++j) T[m * p + j] = cosq(pi * m * (n - j) / n);
    // coefficient map: a_m = sum_j C[m][j] f_j
    std::vector<__float128> C(static_cast<std::size_t>(p) * p);
    for (int m = 0; m < p; ++m)
      for (int j = 0; j < p; ++j) {
        __float128 c = 2 * T[m * p + j] / n;
        if (j == 0 || j == n) c /= 2;
        if (m == 0 || m == n) c /= 2;
        C[m * p + j] = c;
      }
    // A[j][m] = integral_{-1}^{s_j} T_m
    auto antider = [](int m, __float128 s) -> __float128 {
      if (m == 0) return s;
      if (m == 1) return s * s / 2;
      // T_{m+1}/(2(m+1)) - T_{m-1}/(2(m-1)) via the recurrence
      __float128 t0 = 1, t1 = s;
      __float128 tm1 = 0, tp1 = 0;
      for (int q = 1; q <= m; ++q) {
        const __float128 t2 = 2 * s * t1 - t0;
        if (q == m - 1) tm1 = t1;
        if (q == m) tp1 = t2;
        t0 = t1;
        t1 = t2;
      }
      return tp1 / (2 * (m + 1)) - tm1 / (2 * (m - 1));
    };
    r.Q.assign(static_cast<std::size_t>(p) * p, 0);
    for (int j = 0; j < p; ++j)
      for (int m = 0; m < p; ++m) {
        const __float128 a = antider(m, r.nodes[j]) - antider(m, -1);
        for (int l = 0; l < p; ++l) r.Q[j * p + l] += a * C[m * p + l];
      }
    r.bary.resize(p);
    for (int j = 0; j < p; ++j) {
      __float128 w = (j % 2 == 0) ? 1 : -1;
      if (j == 0 || j == n) w /= 2;
      r.bary[j] = w;
    }
    return r;
  }();
  return ref;
}

template <class Real>
double to_double(Real x) {
  return static_cast<double>(x);
}

}  // namespace

template <class Real>
int GenTableT<Real>::locate(Real x) const {
  const Real h = Real(length_) / Real(grid_n_);
  if (x >= h) {
    int i = static_cast<int>(to_double(x / h));
    i = std::clamp(i, 1, grid_n_ - 1);
    return geo_ + i;
  }
  for (int q = geo_; q > 0; --q)
    if (x >= lo_[q]) return q;
  return 0;
}

template <class Real>
Real GenTableT<Real>::interp_one(const std::vector<Real>& data, int panel, Real x) const {
  const Real a = lo_[panel], b = hi_[panel];
  const Real s = (2 * x - a - b) / (b - a);
  const std::size_t base = static_cast<std::size_t>(panel) * p_;
  Real num = 0, den = 0;
  for (int j = 0; j < p_; ++j) {
    const Real d = s - ref_[j];
    if (d == Real(0)) return data[base + j];
    const Real w = bary_[j] / d;
    num += w * data[base + j];
    den += w;
  }
  return num / den;
}

template <class Real>
void GenTableT<Real>::interp(const Level& lv, int panel, Real x, Real out[4]) const {
  out[0] = interp_one(lv.val, panel, x);
  out[1] = interp_one(lv.d1, panel, x);
  out[2] = interp_one(lv.M, panel, x);
  out[3] = interp_one(lv.Mp, panel, x);
}

template <class Real>
void GenTableT<Real>::eval_all(Family f, int k, Real x, Real out[5]) const {
  if (k < 0 || k > K_) throw Error("genfun.k", "level index out of range");
  if (x < Real(0) || x > Real(length_) * (1 + 1e-14))
    throw Error("genfun.x", "evaluation point outside [0, L]");
  if (k == 0) {
    out[0] = f == Family::g ? Real(1) : x;
    out[1] = f == Family::g ? Real(0) : Real(1);
    out[2] = out[3] = out[4] = 0;
    return;
  }
  const auto& levels = f == Family::g ? g_lv_ : h_lv_;
  const int panel = locate(x);
  Real d[4];
  interp(levels[k], panel, x, d);
  const auto& P = params_;
  const Real EI = P.EI.eval<Real>(x, 0), dEI = P.EI.eval<Real>(x, 1), ddEI = P.EI.eval<Real>(x, 2);
  Real prev;
  if (k == 1)
    prev = f == Family::g ? Real(1) : x;
  else
    prev = interp_one(levels[k - 1].val, panel, x);
  const Real F = -P.rho.eval<Real>(x, 0) * prev;
  out[0] = d[0];
  out[1] = d[1];
  out[2] = d[2] / EI;
  out[3] = (d[3] - dEI * out[2]) / EI;
  out[4] = (F - 2 * dEI * out[3] - ddEI * out[2]) / EI;
}

template <class Real>
Real GenTableT<Real>::eval(Family f, int k, Real x, int deriv) const {
  if (deriv < 0 || deriv > 4) throw Error("genfun.deriv", "derivative order must be 0..4");
  Real out[5];
  eval_all(f, k, x, out);
  return out[deriv];
}

template <class Real>
GenTableT<Real> compute_gen_tables_t(const BeamParams& params, int K, int grid_n) {
  params.validate();
  if (K < 1) throw Error("genfun.K", "K must be >= 1");
  if (grid_n < 64 || grid_n % 2 != 0) throw Error("genfun.grid_n", "grid_n must be even and >= 64");

  const Reference& R = reference();
  GenTableT<Real> t;
  t.params_ = params;
  t.K_ = K;
  t.grid_n_ = grid_n;
  t.length_ = params.length;
  t.geo_ = kGeoPanels;
  t.p_ = kPanelNodes;
  const int p = kPanelNodes;
  for (int j = 0; j < p; ++j) {
    t.ref_.push_back(Real(R.nodes[j]));
    t.bary_.push_back(Real(R.bary[j]));
  }
  std::vector<Real> Q(R.Q.begin(), R.Q.end());

  const Real L = params.length;
  const Real h = L / Real(grid_n);
  // panel 0: [0, h 2^-G]; panel q (1..G): [h 2^-(G-q+1), h 2^-(G-q)]; then [ih, (i+1)h]
  Real top = h;
  for (int q = 0; q < kGeoPanels; ++q) top /= 2;
  t.lo_.push_back(0);
  t.hi_.push_back(top);
  for (int q = 1; q <= kGeoPanels; ++q) {
    t.lo_.push_back(top);
    top *= 2;
    t.hi_.push_back(top);
  }
  for (int i = 1; i < grid_n; ++i) {
    t.lo_.push_back(Real(i) * h);
    t.hi_.push_back(i + 1 == grid_n ? L : Real(i + 1) * h);
  }
  const int panels = static_cast<int>(t.lo_.size());
  const std::size_t np = static_cast<std::size_t>(panels) * p;

  std::vector<Real> xs(np), rho(np), EI(np);
  for (int q = 0; q < panels; ++q)
    for (int j = 0; j < p; ++j) {
      const Real x = t.lo_[q] + (t.hi_[q] - t.lo_[q]) * (t.ref_[j] + 1) / 2;
      const std::size_t i = static_cast<std::size_t>(q) * p + j;
      xs[i] = x;
      rho[i] = params.rho.eval<Real>(x, 0);
      EI[i] = params.EI.eval<Real>(x, 0);
    }

  auto cumint = [&](const std::vector<Real>& f, Real start) {
    std::vector<Real> out(np);
    Real c = start;
    for (int q = 0; q < panels; ++q) {
      const Real half = (t.hi_[q] - t.lo_[q]) / 2;
      const std::size_t base = static_cast<std::size_t>(q) * p;
      for (int j = 0; j < p; ++j) {
        Real acc = 0;
        for (int l = 0; l < p; ++l) acc += Q[j * p + l] * f[base + l];
        out[base + j] = c + half * acc;
      }
      c = out[base + p - 1];
    }
    return out;
  };

  using Level = typename GenTableT<Real>::Level;
  Level g0, h0;
  g0.val.assign(np, Real(1));
  g0.d1.assign(np, Real(0));
  g0.M = g0.Mp = g0.d1;
  h0.val = xs;
  h0.d1.assign(np, Real(1));
  h0.M = h0.Mp = g0.d1;
  t.g_lv_.push_back(std::move(g0));
  t.h_lv_.push_back(std::move(h0));

  for (int k = 1; k <= K; ++k) {
    auto step = [&](const Level& prev, Real M0, Real Mp0) {
      std::vector<Real> F(np);
      for (std::size_t i = 0; i < np; ++i) F[i] = -rho[i] * prev.val[i];
      Level lv;
      lv.Mp = cumint(F, Mp0);
      lv.M = cumint(lv.Mp, M0);
      std::vector<Real> d2(np);
      for (std::size_t i = 0; i < np; ++i) d2[i] = lv.M[i] / EI[i];
      lv.d1 = cumint(d2, 0);
      lv.val = cumint(lv.d1, 0);
      return lv;
    };
    const Real m = params.tip_mass, J = params.tip_inertia;
    Level gk, hk;
#pragma omp parallel sections
    {
#pragma omp section
      gk = step(t.g_lv_[k - 1], 0, k == 1 ? -m : Real(0));
#pragma omp section
      hk = step(t.h_lv_[k - 1], k == 1 ? J : Real(0), 0);
    }
    for (const auto* lv : {&gk, &hk}) {
      const bool zero = std::all_of(lv->val.begin(), lv->val.end(), [](Real v) { return v == Real(0); });
      if (zero)
        t.warnings_.push_back("level " + std::to_string(k) +
                              " underflowed to zero; K is larger than the representable range");
    }
    t.g_lv_.push_back(std::move(gk));
    t.h_lv_.push_back(std::move(hk));
  }

  // uniform-grid export
  for (int k = 0; k <= K; ++k) {
    for (Family fam : {Family::g, Family::h}) {
      std::vector<std::vector<double>> tab(5, std::vector<double>(static_cast<std::size_t>(grid_n) + 1));
      GridFunction shape(0.0, params.length, std::vector<double>(static_cast<std::size_t>(grid_n) + 1));
      for (int i = 0; i <= grid_n; ++i) {
        Real out[5];
        const Real x = i == 0 ? Real(0) : t.hi_[static_cast<std::size_t>(kGeoPanels + i - 1)];
        t.eval_all(fam, k, x, out);
        for (int d = 0; d < 5; ++d) tab[d][i] = to_double(out[d]);
        if (k == 0 && fam == Family::h) tab[0][i] = shape.x(i);
      }
      GridFunction gf(0.0, params.length, std::move(tab[0]));
      for (int d = 1; d <= 4; ++d) gf.set_derivative(d, std::move(tab[d]));
      (fam == Family::g ? t.g_grid_ : t.h_grid_).push_back(std::move(gf));
    }
    Real gv[5], hv[5];
    t.eval_all(Family::g, k, L, gv);
    t.eval_all(Family::h, k, L, hv);
    t.gL_.push_back(gv[0]);
    t.gxL_.push_back(gv[1]);
    t.hL_.push_back(hv[0]);
    t.hxL_.push_back(hv[1]);
  }
  return t;
}

template class GenTableT<double>;
template class GenTableT<__float128>;
template GenTableT<double> compute_gen_tables_t<double>(const BeamParams&, int, int);
template GenTableT<__float128> compute_gen_tables_t<__float128>(const BeamParams&, int, int);

GenTable compute_gen_tables(const BeamParams& params, int K, int grid_n) {
  return compute_gen_tables_t<double>(params, K, grid_n);
}

OdeResidual check_ode_residual(const GenTable& table, int k) {
  if (k < 0 || k > table.K()) throw Error("genfun.k", "level index out of range");
  OdeResidual r;
  if (k == 0) return r;
  const auto& P = table.params();
  const int n = table.grid_n();
  const double hx = table.length() / n;
  auto one = [&](Family f) {
    const GridFunction& cur = table.table(f, k);
    const GridFunction& prev = table.table(f, k - 1);
    std::vector<double> M(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) M[i] = P.EI(cur.x(i)) * cur.derivative(2)[i];
    double worst = 0.0, scale = 0.0;
    for (int i = 2; i <= n - 2; ++i) {
      const double Mxx =
          (-M[i - 2] + 16 * M[i - 1] - 30 * M[i] + 16 * M[i + 1] - M[i + 2]) / (12 * hx * hx);
      const double src = P.rho(cur.x(i)) * prev[i];
      worst = std::max(worst, std::abs(Mxx + src));
      scale = std::max(scale, std::abs(src));
    }
    return scale > 0 ? worst / scale : worst;
  };
  r.g = one(Family::g);
  r.h = one(Family::h);
  return r;
}

EnvelopeConstants envelope_constants(const BeamParams& params) {
  const double L = params.length;
  const double minEI = params.min_EI(), maxrho = params.max_rho();
  EnvelopeConstants c;
  c.R1 = (maxrho + params.tip_mass) / minEI * std::max(1.0, L);
  c.R2 = (maxrho + params.tip_inertia) / minEI * std::max(1.0, L * L * L);
  return c;
}

EnvelopeReport check_envelopes(const GenTable& table, EnvelopeConstants c) {
  EnvelopeReport rep;
  const int n = table.grid_n();
  auto test = [&](double value, double R, int k, int q, double x) {
    // bound R^k x^(4k-q) / (4k-q)!
    const int e = 4 * k - q;
    double margin;
    if (value == 0.0) {
      margin = -1e300;
    } else if (x == 0.0) {
      margin = e > 0 ? 1e300 : std::log(std::abs(value)) - k * std::log(R);
    } else {
      const double logb = k * std::log(R) + e * std::log(x) - std::lgamma(e + 1.0);
      margin = std::log(std::abs(value)) - logb;
    }
    if (margin > 1e-12) ++rep.violations;
    if (margin > rep.worst_log_margin) {
      rep.worst_log_margin = margin;
      rep.worst_k = k;
      rep.worst_x = x;
    }
  };
  for (int k = 1; k <= table.K(); ++k) {
    const auto& g = table.g(k);
    const auto& h = table.h(k);
    for (int i = 0; i <= n; ++i) {
      const double x = g.x(i);
      test(g[i], c.R1, k, 1, x);
      test(g.derivative(1)[i], c.R1, k, 2, x);
      test(h[i], c.R2, k, 2, x);
      test(h.derivative(1)[i], c.R2, k, 3, x);
    }
  }
  return rep;
}

}  // namespace beamflat
