#define CCURV_ISA scalar
#include "integrands.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ccurv::kernels::scalar {

namespace {

double eval_one(Integrand f, double t, const SeriesView& s) {
  if (s.coeffs != nullptr && t < s.below) return horner(s, t);
  return integrand(f, t);
}

void evaluate(Integrand f, const double* tau, double* out, std::size_t n, SeriesView s) {
  for (std::size_t i = 0; i < n; ++i) out[i] = eval_one(f, tau[i], s);
}

SupResult sup_abs(Integrand f, double lo, double hi, std::size_t n, SeriesView s) {
  SupResult best{-1.0, lo, 0};
  const double step = n > 1 ? (hi - lo) / static_cast<double>(n - 1) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = lo + step * static_cast<double>(i);
    const double v = std::abs(eval_one(f, t, s));
    if (v > best.value) best = {v, t, i};
  }
  return best;
}

void sphere(double kappa, const double* rbar, const double* theta, const double* phi, double* out,
            std::size_t n, const SeriesView* terms) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rbar[i];
    const double st = std::sin(theta[i]), ct = std::cos(theta[i]);
    const double sp = std::sin(phi[i]), cp = std::cos(phi[i]);
    const double ss = eval_one(Integrand::sphere_ss, r, terms[0]);
    const double sc = eval_one(Integrand::sphere_sc, r, terms[1]);
    const double cs = eval_one(Integrand::sphere_cs, r, terms[2]);
    const double cross = eval_one(Integrand::sphere_cross, r, terms[3]);
    out[i] = kappa * (st * st * sp * sp * ss + st * st * cp * cp * sc + ct * ct * sp * sp * cs +
                      ct * st * cp * sp * cross);
  }
}

TrigMargins trig_margins(const double* r0, const double* theta, const double* phi,
                         std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  TrigMargins m{kInf, kInf, kInf, 0, 0, 0};
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
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

}  // namespace ccurv::kernels::scalar

namespace ccurv::kernels::detail {

const KernelTable& scalar_table() {
  static const KernelTable t{"scalar", scalar::evaluate, scalar::sup_abs, scalar::sphere,
                             scalar::trig_margins};
  return t;
}

PowerSeries build_series(Integrand f) {
  return scalar::integrand(f, PowerSeries::variable());
}

}  // namespace ccurv::kernels::detail
