#pragma once

#include <span>
#include <vector>

namespace beamflat {

/// Truncated Taylor expansion at `point`: c_n = f^(n)(point) / n!, n = 0..order.
class Jet {
 public:
  Jet() = default;
  Jet(double point, int order);

  static Jet constant(double point, int order, double c);
  static Jet variable(double point, int order);  // the identity t -> t

  double point() const noexcept { return point_; }
  int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return c_; }
  double operator[](int n) const { return c_[static_cast<std::size_t>(n)]; }
  double& operator[](int n) { return c_[static_cast<std::size_t>(n)]; }

  /// f^(n)(point) = n! c_n.
  double derivative(int n) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

  /// Jet at `new_point` of tau -> f(scale * tau + shift), given that this jet
  /// sits at scale * new_point + shift.
  Jet compose_affine(double scale, double new_point) const;

  bool all_finite() const;

 private:
  double point_ = 0.0;
  std::vector<double> c_{0.0};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(double s, Jet a);
Jet operator*(const Jet& a, const Jet& b);  // Cauchy product

Jet exp(const Jet& a);
Jet log(const Jet& a);           // requires a[0] > 0
Jet pow(const Jet& a, double p);  // exp(p log a), requires a[0] > 0

}  // namespace beamflat
