#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace beamflat {

/// Spatial coefficient profile on [0, L]: either the affine law a(1 + b x)
/// or a table of samples on a uniform grid, interpolated by local
/// sixth-order Lagrange polynomials.
class Profile {
 public:
  enum class Kind { affine, sampled };

  static Profile affine(double a, double b);
  static Profile sampled(std::vector<double> samples, double length);

  Kind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const std::vector<double>& samples() const noexcept { return samples_; }

  /// Value (deriv = 0) or first/second derivative at x.
  template <class Real>
  Real eval(Real x, int deriv = 0) const;

  double operator()(double x) const { return eval<double>(x, 0); }

 private:
  Kind kind_ = Kind::affine;
  double a_ = 1.0;
  double b_ = 0.0;
  std::vector<double> samples_;
  double length_ = 1.0;
};

struct BeamParams {
  double length = 0.5;         // L [m]
  double tip_mass = 0.4;       // m [kg]
  double tip_inertia = 1.86e-4;  // J [kg m^2]
  Profile rho = Profile::affine(0.11, 3.0);  // [kg/m]
  Profile EI = Profile::affine(0.29, 3.0);   // [N m^2]
  int grid_n = 2048;

  /// Throws beamflat::Error when a physical or grid invariant fails.
  void validate() const;

  double min_rho() const;
  double max_rho() const;
  double min_EI() const;
};

/// Samples on the uniform grid x0 + i h, i = 0..n, with optional tables of
/// the first four x-derivatives.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(double x0, double x1, std::vector<double> values);

  template <class F>
  static GridFunction sample(double x0, double x1, int n, F&& f) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    const double h = (x1 - x0) / n;
    for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = f(x0 + i * h);
    return GridFunction(x0, x1, std::move(v));
  }

  double x0() const noexcept { return x0_; }
  double x1() const noexcept { return x1_; }
  int intervals() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double step() const noexcept { return (x1_ - x0_) / intervals(); }
  double x(int i) const noexcept { return x0_ + i * step(); }

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  bool has_derivative(int order) const;
  std::span<const double> derivative(int order) const;
  void set_derivative(int order, std::vector<double> table);

 private:
  double x0_ = 0.0;
  double x1_ = 1.0;
  std::vector<double> values_;
  std::array<std::vector<double>, 4> derivs_;
};

/// Element [u, v, alpha, beta] of the beam state space: deflection,
/// velocity, tip velocity and tip angular velocity.
struct BeamState {
  GridFunction u;
  GridFunction v;
  double alpha = 0.0;
  double beta = 0.0;
};

BeamState zero_state(const BeamParams& params, int n);

/// Composite Simpson rule on a uniform grid; the interval count must be even.
double simpson(std::span<const double> values, double h);

/// Second x-derivative: the stored table when present, otherwise
/// fourth-order finite differences (one-sided six-point stencils at the ends).
std::vector<double> second_derivative(const GridFunction& u);

/// Fourth-order finite-difference first derivative at node i.
double first_derivative_at(const GridFunction& u, int i);

/// Z inner product from explicit arrays. `with_plain_u` switches between the
/// Z form and the Z-tilde form (which omits the plain integral of u).
struct StateArrays {
  std::span<const double> u;
  std::span<const double> uxx;
  std::span<const double> v;
  double alpha = 0.0;
  double beta = 0.0;
};
double z_inner(const StateArrays& a, const StateArrays& b, const BeamParams& params,
               double x0, double x1, bool with_plain_u = true);

double z_norm(const BeamState& state, const BeamParams& params);
double tilde_z_norm(const BeamState& state, const BeamParams& params);

/// H^2(0, L) norm of a profile and L^2(0, L) norm of a profile.
double h2_norm(const GridFunction& u);
double l2_norm(const GridFunction& u);

double compat_tolerance(double uL);
bool is_compatible(double f0, const BeamState& state,
                   std::optional<double> tol = std::nullopt);

BeamState operator-(const BeamState& a, const BeamState& b);
BeamState operator+(const BeamState& a, const BeamState& b);
BeamState operator*(double s, const BeamState& a);

}  // namespace beamflat
