#pragma once

#include <cmath>
#include <quadmath.h>

// Scalar helpers shared by the double and __float128 instantiations.
namespace beamflat::rm {

inline double abs(double x) { return std::fabs(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double log(double x) { return std::log(x); }
inline double exp(double x) { return std::exp(x); }
inline double cos(double x) { return std::cos(x); }

inline __float128 abs(__float128 x) { return fabsq(x); }
inline __float128 sqrt(__float128 x) { return sqrtq(x); }
inline __float128 log(__float128 x) { return logq(x); }
inline __float128 exp(__float128 x) { return expq(x); }
inline __float128 cos(__float128 x) { return cosq(x); }

template <class Real>
Real pi() {
  if constexpr (sizeof(Real) > sizeof(double))
    return acosq(__float128(-1));
  else
    return M_PI;
}

}  // namespace beamflat::rm
