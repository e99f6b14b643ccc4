#pragma once

#include <string>
#include <vector>

#include "beamflat/model.hpp"

namespace beamflat {

enum class Family { g, h };

/// Generating functions g_k, h_k for k = 0..K.
///
/// The cascade is solved on piecewise Chebyshev-Lobatto panels: one panel per
/// uniform grid interval, with the first interval split geometrically towards
/// x = 0 so that the x^(4k) behaviour there keeps full relative accuracy.
/// Uniform-grid tables (values and derivatives 1..4) are exported as
/// GridFunctions; `eval` interpolates the panel data at any x.
template <class Real>
class GenTableT {
 public:
  int K() const noexcept { return K_; }
  int grid_n() const noexcept { return grid_n_; }
  double length() const noexcept { return length_; }
  const BeamParams& params() const noexcept { return params_; }

  const GridFunction& g(int k) const { return g_grid_.at(static_cast<std::size_t>(k)); }
  const GridFunction& h(int k) const { return h_grid_.at(static_cast<std::size_t>(k)); }
  const GridFunction& table(Family f, int k) const { return f == Family::g ? g(k) : h(k); }

  // Boundary values g_k(L), g_k,x(L), h_k(L), h_k,x(L).
  const std::vector<Real>& gL() const noexcept { return gL_; }
  const std::vector<Real>& gxL() const noexcept { return gxL_; }
  const std::vector<Real>& hL() const noexcept { return hL_; }
  const std::vector<Real>& hxL() const noexcept { return hxL_; }

  /// d^deriv/dx^deriv of g_k or h_k at x in [0, L], deriv in 0..4.
  Real eval(Family f, int k, Real x, int deriv = 0) const;

  /// Evaluates derivative orders 0..4 at once.
  void eval_all(Family f, int k, Real x, Real out[5]) const;

  /// Non-fatal findings from construction (levels lost to underflow).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  template <class R>
  friend GenTableT<R> compute_gen_tables_t(const BeamParams&, int, int);

  struct Level {
    std::vector<Real> val, d1, M, Mp;  // at panel nodes
  };

  int locate(Real x) const;
  void interp(const Level& lv, int panel, Real x, Real out[4]) const;
  Real interp_one(const std::vector<Real>& data, int panel, Real x) const;

  BeamParams params_;
  int K_ = 0;
  int grid_n_ = 0;
  double length_ = 0.0;
  int geo_ = 0;      // geometric sub-panels in the first interval (plus one bottom panel)
  int p_ = 0;        // nodes per panel
  std::vector<Real> lo_, hi_;   // panel bounds
  std::vector<Real> ref_;       // reference nodes on [-1, 1]
  std::vector<Real> bary_;      // barycentric weights
  std::vector<Level> g_lv_, h_lv_;
  std::vector<GridFunction> g_grid_, h_grid_;
  std::vector<Real> gL_, gxL_, hL_, hxL_;
  std::vector<std::string> warnings_;
};

template <class Real>
GenTableT<Real> compute_gen_tables_t(const BeamParams& params, int K, int grid_n);

using GenTable = GenTableT<double>;
using GenTableQ = GenTableT<__float128>;

GenTable compute_gen_tables(const BeamParams& params, int K, int grid_n = 2048);

/// Max over interior nodes of |(EI g_k,xx)_xx + rho g_(k-1)| (five-point
/// differences of the stored moment), normalized by max |rho g_(k-1)|.
struct OdeResidual {
  double g = 0.0;
  double h = 0.0;
};
OdeResidual check_ode_residual(const GenTable& table, int k);

struct EnvelopeConstants {
  double R1 = 0.0;
  double R2 = 0.0;
};
EnvelopeConstants envelope_constants(const BeamParams& params);

/// Log-space comparison of the tables with the factorial envelopes
/// R^k x^(4k-q)/(4k-q)!. A positive `worst_log_margin` means a violation.
struct EnvelopeReport {
  int violations = 0;
  double worst_log_margin = -1e300;
  int worst_k = 0;
  double worst_x = 0.0;
};
EnvelopeReport check_envelopes(const GenTable& table, EnvelopeConstants c);

}  // namespace beamflat
