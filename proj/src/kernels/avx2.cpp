// Compiled with -mavx2 -mfma. Nothing here may instantiate templates that
// other translation units also instantiate, hence no std containers.
#include "vec4d.hpp"

#define CCURV_ISA avx2
#include "integrands.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ccurv::kernels::avx2 {

namespace {

using simd::Vec4d;

double eval_one(Integrand f, double t, const SeriesView& s) {
  if (s.coeffs != nullptr && t < s.below) return horner(s, t);
  return integrand(f, t);
}

Vec4d eval_lanes(Integrand f, Vec4d t, const SeriesView& s) {
  if (s.coeffs == nullptr) return integrand(f, t);
  const __m256d near = simd::lt(t, s.below);
  if (simd::all(near)) return horner(s, t);
  if (!simd::any(near)) return integrand(f, t);
  return simd::select(near, horner(s, t), integrand(f, t));
}

void evaluate(Integrand f, const double* tau, double* out, std::size_t n, SeriesView s) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) eval_lanes(f, Vec4d::load(tau + i), s).store(out + i);
  for (; i < n; ++i) out[i] = eval_one(f, tau[i], s);
}

SupResult sup_abs(Integrand f, double lo, double hi, std::size_t n, SeriesView s) {
  const double step = n > 1 ? (hi - lo) / static_cast<double>(n - 1) : 0.0;
  // Per-lane running maxima; strict comparison keeps the earliest index.
  Vec4d best(-1.0);
  Vec4d best_idx(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Vec4d idx = Vec4d::iota(static_cast<double>(i));
    const Vec4d t = Vec4d(lo) + Vec4d(step) * idx;
    const Vec4d v = simd::abs(eval_lanes(f, t, s));
    const __m256d better = simd::gt(v, best);
    best = simd::select(better, v, best);
    best_idx = simd::select(better, idx, best_idx);
  }
  alignas(32) double bv[4], bi[4];
  best.store(bv);
  best_idx.store(bi);
  SupResult r{-1.0, lo, 0};
  for (int l = 0; l < 4; ++l) {
    const auto li = static_cast<std::size_t>(bi[l]);
    if (bv[l] > r.value || (bv[l] == r.value && li < r.index)) r = {bv[l], 0.0, li};
  }
  for (; i < n; ++i) {
    const double t = lo + step * static_cast<double>(i);
    const double v = std::abs(eval_one(f, t, s));
    if (v > r.value) r = {v, 0.0, i};
  }
  r.tau = lo + step * static_cast<double>(r.index);
  return r;
}

template <class T>
T sphere_lane(double kappa, const T& r, const T& theta, const T& phi, const SeriesView* terms,
              T (*eval)(Integrand, const T&, const SeriesView&)) {
  using std::cos;
  using std::sin;
  const T st = sin(theta), ct = cos(theta), sp = sin(phi), cp = cos(phi);
  const T ss = eval(Integrand::sphere_ss, r, terms[0]);
  const T sc = eval(Integrand::sphere_sc, r, terms[1]);
  const T cs = eval(Integrand::sphere_cs, r, terms[2]);
  const T cross = eval(Integrand::sphere_cross, r, terms[3]);
  return kappa * (st * st * sp * sp * ss + st * st * cp * cp * sc + ct * ct * sp * sp * cs +
                  ct * st * cp * sp * cross);
}

Vec4d eval_lanes_ref(Integrand f, const Vec4d& t, const SeriesView& s) {
  return eval_lanes(f, t, s);
}
double eval_one_ref(Integrand f, const double& t, const SeriesView& s) { return eval_one(f, t, s); }

void sphere(double kappa, const double* rbar, const double* theta, const double* phi, double* out,
            std::size_t n, const SeriesView* terms) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    sphere_lane<Vec4d>(kappa, Vec4d::load(rbar + i), Vec4d::load(theta + i),
                       Vec4d::load(phi + i), terms, eval_lanes_ref)
        .store(out + i);
  }
  for (; i < n; ++i)
    out[i] = sphere_lane<double>(kappa, rbar[i], theta[i], phi[i], terms, eval_one_ref);
}

TrigMargins trig_margins(const double* r0, const double* theta, const double* phi,
                         std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  Vec4d m1v(kInf), m2v(kInf), m3v(kInf), i1v(0.0), i2v(0.0), i3v(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Vec4d th = Vec4d::load(theta + i), ph = Vec4d::load(phi + i), r = Vec4d::load(r0 + i);
    const Vec4d st = simd::sin(th), ct = simd::cos(th), sp = simd::sin(ph);
    const Vec4d sd = simd::sin(th - ph), cs = simd::cos(th + ph);
    const Vec4d r2 = r * r;
    const Vec4d a2 = sd * sd + r2 * st * st + r2 * sp * sp;
    const Vec4d base = st * st + ct * ct * sp * sp;
    const Vec4d m1 = base - a2 / four_pi2;
    const Vec4d m2 = st * st + 2.0 * ct * ct * sp * sp - simd::abs(ct * ct - cs * cs);
    const Vec4d m3 = base - 2.0 * simd::abs(ct * st * sp);
    const Vec4d idx = Vec4d::iota(static_cast<double>(i));
    __m256d lt = simd::lt(m1, m1v);
    m1v = simd::select(lt, m1, m1v);
    i1v = simd::select(lt, idx, i1v);
    lt = simd::lt(m2, m2v);
    m2v = simd::select(lt, m2, m2v);
    i2v = simd::select(lt, idx, i2v);
    lt = simd::lt(m3, m3v);
    m3v = simd::select(lt, m3, m3v);
    i3v = simd::select(lt, idx, i3v);
  }
  alignas(32) double a[4], ai[4], b[4], bi[4], c[4], ci[4];
  m1v.store(a);
  i1v.store(ai);
  m2v.store(b);
  i2v.store(bi);
  m3v.store(c);
  i3v.store(ci);
  TrigMargins m{kInf, kInf, kInf, 0, 0, 0};
  const auto take = [](double v, double idx, double& cur, std::size_t& at) {
    const auto k = static_cast<std::size_t>(idx);
    if (v < cur || (v == cur && k < at)) cur = v, at = k;
  };
  for (int l = 0; l < 4; ++l) {
    take(a[l], ai[l], m.area_weight, m.area_weight_at);
    take(b[l], bi[l], m.cos_split, m.cos_split_at);
    take(c[l], ci[l], m.cross, m.cross_at);
  }
  for (; i < n; ++i) {
    const double st = std::sin(theta[i]), ct = std::cos(theta[i]);
    const double sp = std::sin(phi[i]);
    const double sd = std::sin(theta[i] - phi[i]);
    const double cs = std::cos(theta[i] + phi[i]);
    const double r2 = r0[i] * r0[i];
    const double a2 = sd * sd + r2 * st * st + r2 * sp * sp;
    const double base = st * st + ct * ct * sp * sp;
    const double m1 = base - a2 / four_pi2;
    const double m2 = st * st + 2.0 * ct * ct * sp * sp - std::abs(ct * ct - cs * cs);
    const double m3 = base - 2.0 * std::abs(ct * st * sp);
    if (m1 < m.area_weight) m.area_weight = m1, m.area_weight_at = i;
    if (m2 < m.cos_split) m.cos_split = m2, m.cos_split_at = i;
    if (m3 < m.cross) m.cross = m3, m.cross_at = i;
  }
  return m;
}

}  // namespace

}  // namespace ccurv::kernels::avx2

namespace ccurv::kernels::detail {

// Declared in internal.hpp, which is not included here to keep the series
// type (and its std::vector member) out of this translation unit.
const KernelTable* avx2_table();

const KernelTable* avx2_table() {
  static const KernelTable t{"avx2", avx2::evaluate, avx2::sup_abs, avx2::sphere,
                             avx2::trig_margins};
  return &t;
}

}  // namespace ccurv::kernels::detail
