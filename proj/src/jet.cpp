#include "beamflat/jet.hpp"

#include <cmath>

#include "beamflat/error.hpp"

namespace beamflat {

Jet::Jet(double point, int order) : point_(point) {
  if (order < 0) throw Error("jet.order", "jet order must be >= 0");
  c_.assign(static_cast<std::size_t>(order) + 1, 0.0);
}

Jet Jet::constant(double point, int order, double c) {
  Jet j(point, order);
  j.c_[0] = c;
  return j;
}

Jet Jet::variable(double point, int order) {
  Jet j(point, order);
  j.c_[0] = point;
  if (order >= 1) j.c_[1] = 1.0;
  return j;
}

double Jet::derivative(int n) const {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f * c_.at(static_cast<std::size_t>(n));
}

namespace {
void check_same(const Jet& a, const Jet& b) {
  if (a.order() != b.order() || a.point() != b.point())
    throw Error("jet.mismatch", "jets differ in order or expansion point");
}
}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Jet Jet::compose_affine(double scale, double new_point) const {
  Jet out(new_point, order());
  double f = 1.0;
  for (std::size_t n = 0; n < c_.size(); ++n) {
    out.c_[n] = c_[n] * f;
    f *= scale;
  }
  return out;
}

bool Jet::all_finite() const {
  for (double c : c_)
    if (!std::isfinite(c)) return false;
  return true;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet operator*(const Jet& a, const Jet& b) {
  check_same(a, b);
  const int N = a.order();
  Jet out(a.point(), N);
  for (int n = 0; n <= N; ++n) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += a[i] * b[n - i];
    out[n] = s;
  }
  return out;
}

// For e = exp(a): e' = a' e, so n e_n = sum_{i=1..n} i a_i e_{n-i}.
Jet exp(const Jet& a) {
  const int N = a.order();
  Jet e(a.point(), N);
  e[0] = std::exp(a[0]);
  for (int n = 1; n <= N; ++n) {
    double s = 0.0;
    for (int i = 1; i <= n; ++i) s += i * a[i] * e[n - i];
    e[n] = s / n;
  }
  return e;
}

// For l = log(a): a l' = a', so n a_0 l_n = n a_n - sum_{i=1..n-1} i l_i a_{n-i}.
Jet log(const Jet& a) {
  if (!(a[0] > 0.0)) throw Error("jet.log", "log of a jet with non-positive value");
  const int N = a.order();
  Jet l(a.point(), N);
  l[0] = std::log(a[0]);
  for (int n = 1; n <= N; ++n) {
    double s = n * a[n];
    for (int i = 1; i < n; ++i) s -= i * l[i] * a[n - i];
    l[n] = s / (n * a[0]);
  }
  return l;
}

Jet pow(const Jet& a, double p) { return exp(p * log(a)); }

}  // namespace beamflat
