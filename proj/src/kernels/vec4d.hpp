// Four-lane double vector over AVX2 intrinsics. Only included by the AVX2
// kernel translation unit.
#pragma once

#include <immintrin.h>

namespace ccurv::simd {

struct Vec4d {
  __m256d v;

  Vec4d() : v(_mm256_setzero_pd()) {}
  Vec4d(__m256d x) : v(x) {}                   // NOLINT(implicit)
  Vec4d(double x) : v(_mm256_set1_pd(x)) {}    // NOLINT(implicit)

  static Vec4d load(const double* p) { return _mm256_loadu_pd(p); }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  static Vec4d iota(double start) { return _mm256_setr_pd(start, start + 1, start + 2, start + 3); }
};

inline Vec4d operator+(Vec4d a, Vec4d b) { return _mm256_add_pd(a.v, b.v); }
inline Vec4d operator-(Vec4d a, Vec4d b) { return _mm256_sub_pd(a.v, b.v); }
inline Vec4d operator*(Vec4d a, Vec4d b) { return _mm256_mul_pd(a.v, b.v); }
inline Vec4d operator/(Vec4d a, Vec4d b) { return _mm256_div_pd(a.v, b.v); }
inline Vec4d operator+(Vec4d a, double b) { return a + Vec4d(b); }
inline Vec4d operator-(Vec4d a, double b) { return a - Vec4d(b); }
inline Vec4d operator*(Vec4d a, double b) { return a * Vec4d(b); }
inline Vec4d operator/(Vec4d a, double b) { return a / Vec4d(b); }
inline Vec4d operator+(double a, Vec4d b) { return Vec4d(a) + b; }
inline Vec4d operator-(double a, Vec4d b) { return Vec4d(a) - b; }
inline Vec4d operator*(double a, Vec4d b) { return Vec4d(a) * b; }
inline Vec4d operator/(double a, Vec4d b) { return Vec4d(a) / b; }
inline Vec4d operator-(Vec4d a) { return _mm256_xor_pd(a.v, _mm256_set1_pd(-0.0)); }

inline Vec4d abs(Vec4d a) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), a.v); }
inline Vec4d min(Vec4d a, Vec4d b) { return _mm256_min_pd(a.v, b.v); }
inline Vec4d max(Vec4d a, Vec4d b) { return _mm256_max_pd(a.v, b.v); }
inline Vec4d floor(Vec4d a) { return _mm256_round_pd(a.v, _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC); }
inline Vec4d fma(Vec4d a, Vec4d b, Vec4d c) { return _mm256_fmadd_pd(a.v, b.v, c.v); }

inline __m256d lt(Vec4d a, Vec4d b) { return _mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ); }
inline __m256d ge(Vec4d a, Vec4d b) { return _mm256_cmp_pd(a.v, b.v, _CMP_GE_OQ); }
inline __m256d gt(Vec4d a, Vec4d b) { return _mm256_cmp_pd(a.v, b.v, _CMP_GT_OQ); }
inline __m256d eq(Vec4d a, Vec4d b) { return _mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ); }
/// mask ? b : a
inline Vec4d select(__m256d mask, Vec4d b, Vec4d a) { return _mm256_blendv_pd(a.v, b.v, mask); }
inline bool any(__m256d mask) { return _mm256_movemask_pd(mask) != 0; }
inline bool all(__m256d mask) { return _mm256_movemask_pd(mask) == 0xF; }

namespace detail {

// Cephes sin/cos: octant reduction with a three-part pi/4 and minimax
// polynomials on [-pi/4, pi/4].
constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDP1 = 7.85398125648498535156E-1;
constexpr double kDP2 = 3.77489470793079817668E-8;
constexpr double kDP3 = 2.69515142907905952645E-15;

inline Vec4d sin_poly(Vec4d z, Vec4d zz) {
  Vec4d p = 1.58962301576546568060E-10;
  p = fma(p, zz, -2.50507477628578072866E-8);
  p = fma(p, zz, 2.75573136213857245213E-6);
  p = fma(p, zz, -1.98412698295895385996E-4);
  p = fma(p, zz, 8.33333333332211858878E-3);
  p = fma(p, zz, -1.66666666666666307295E-1);
  return z + z * zz * p;
}

inline Vec4d cos_poly(Vec4d zz) {
  Vec4d p = -1.13585365213876817300E-11;
  p = fma(p, zz, 2.08757008419747316778E-9);
  p = fma(p, zz, -2.75573141792967388112E-7);
  p = fma(p, zz, 2.48015872888517045348E-5);
  p = fma(p, zz, -1.38888888888730564116E-3);
  p = fma(p, zz, 4.16666666666665929218E-2);
  return 1.0 - 0.5 * zz + zz * zz * p;
}

struct Reduced {
  Vec4d z;    // reduced argument
  Vec4d oct;  // octant in {0, 2, 4, 6}
};

inline Reduced reduce(Vec4d ax) {
  Vec4d y = floor(ax * kFourOverPi);
  const Vec4d odd = y - 2.0 * floor(y * 0.5);
  y = y + odd;
  const Vec4d oct = y - 8.0 * floor(y * 0.125);
  const Vec4d z = ((ax - y * kDP1) - y * kDP2) - y * kDP3;
  return {z, oct};
}

}  // namespace detail

inline Vec4d sin(Vec4d x) {
  const __m256d signbit = _mm256_set1_pd(-0.0);
  __m256d sign = _mm256_and_pd(x.v, signbit);
  const auto [z, oct0] = detail::reduce(abs(x));
  const __m256d upper = ge(oct0, 4.0);
  sign = _mm256_xor_pd(sign, _mm256_and_pd(upper, signbit));
  const Vec4d oct = select(upper, oct0 - 4.0, oct0);
  const Vec4d zz = z * z;
  const Vec4d r = select(eq(oct, 2.0), detail::cos_poly(zz), detail::sin_poly(z, zz));
  return _mm256_xor_pd(r.v, sign);
}

inline Vec4d cos(Vec4d x) {
  const __m256d signbit = _mm256_set1_pd(-0.0);
  const auto [z, oct0] = detail::reduce(abs(x));
  const __m256d upper = ge(oct0, 4.0);
  const Vec4d oct = select(upper, oct0 - 4.0, oct0);
  const __m256d flip = _mm256_xor_pd(upper, ge(oct, 2.0));
  const Vec4d zz = z * z;
  const Vec4d r = select(eq(oct, 2.0), detail::sin_poly(z, zz), detail::cos_poly(zz));
  return _mm256_xor_pd(r.v, _mm256_and_pd(flip, signbit));
}

}  // namespace ccurv::simd
