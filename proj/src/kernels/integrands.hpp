// Included once per kernel translation unit with CCURV_ISA defined, so every
// instantiation lives in an ISA-specific namespace and never merges across
// translation units compiled with different target flags.
#ifndef CCURV_ISA
#error "define CCURV_ISA before including integrands.hpp"
#endif

#include <cmath>

#include "ccurv/kernels.hpp"

namespace ccurv::kernels::CCURV_ISA {

template <class T>
T horner(const SeriesView& s, const T& t) {
  T acc(0.0);
  for (int k = s.count - 1; k >= 0; --k) acc = acc * t + s.coeffs[k];
  for (int k = 0; k < s.valuation; ++k) acc = acc * t;
  for (int k = 0; k > s.valuation; --k) acc = acc / t;
  return acc;
}

template <class T>
T h1_of(const T& t) {
  using std::cos;
  using std::sin;
  const T s = sin(t), c = cos(t);
  return t * t + t * s * c - 2.0 * s * s;
}

template <class T>
T h2_of(const T& t) {
  using std::cos;
  using std::sin;
  const T s = sin(t), c = cos(t);
  return (t + s * c) * s - 2.0 * t * t * c;
}

template <class T>
T integrand(Integrand f, const T& t) {
  using std::cos;
  using std::sin;
  switch (f) {
    case Integrand::c6:
      return (t - sin(t)) / (t * t * t);
    case Integrand::c7:
      return (t * t + 2.0 * (cos(t) - 1.0)) / (t * t * t * t);
    case Integrand::c8:
      return (t * cos(t) - sin(t)) / (t * t);
    case Integrand::c9:
      return (t * cos(t) - sin(t)) / (t * t * t);
    case Integrand::c10:
      return (cos(t) * sin(t) - t) / (t * t * t);
    case Integrand::c11: {
      const T s = sin(t);
      return h1_of(t) / (t * t * t * t * t * s * s) - 2.0 / (45.0 * t);
    }
    case Integrand::c12: {
      const T s = sin(t);
      const T t3 = t * t * t;
      return 2.0 * (s - t * cos(t)) / (t3 * s * s * s) - 2.0 / (3.0 * t3) * (1.0 + 0.4 * t * t);
    }
    case Integrand::c13: {
      const T t3 = t * t * t;
      return 2.0 * (sin(t) - t * cos(t)) / (t3 * t * t * sin(t)) -
             2.0 / (3.0 * t3) * (1.0 + t * t / 15.0);
    }
    case Integrand::c14: {
      const T s = sin(t);
      const T t3 = t * t * t;
      return 4.0 * (s * s - t * t) / (t3 * t * t * s * s) + 4.0 / (3.0 * t3) * (1.0 + 0.2 * t * t);
    }
    case Integrand::c15:
      return (t - sin(t)) / (t * sin(t));
    case Integrand::c16: {
      const T s = sin(t);
      return (t * t * cos(t) - s * s) / (t * s * s);
    }
    case Integrand::c17: {
      const T t2 = t * t;
      return (2.0 * cos(t) - 2.0 + t * sin(t)) / (t2 * t2 * t2) + 1.0 / (12.0 * t2);
    }
    case Integrand::h1:
      return h1_of(t);
    case Integrand::h2:
      return h2_of(t);
    case Integrand::mu1_first:
    case Integrand::sphere_ss: {
      const T s = sin(t);
      return h1_of(t) / (t * t * s * s);
    }
    case Integrand::mu1_second: {
      const T half = 0.5 * t;
      const T s = sin(t);
      return 8.0 * cos(half) * h2_of(half) / (t * s * s * s);
    }
    case Integrand::mu1_third: {
      const T half = 0.5 * t;
      return 8.0 * cos(half) * h2_of(half) / (t * t * t * sin(t));
    }
    case Integrand::sphere_sc: {
      const T s = sin(t);
      return 2.0 * (s - t * cos(t)) / (s * s * s);
    }
    case Integrand::sphere_cs:
      return 2.0 * (sin(t) - t * cos(t)) / (t * t * sin(t));
    case Integrand::sphere_cross: {
      const T s = sin(t);
      return 4.0 * (s * s - t * t) / (t * t * s * s);
    }
    case Integrand::count:
      break;
  }
  return T(0.0);
}

}  // namespace ccurv::kernels::CCURV_ISA
