#include "ccurv/ccurv.hpp"

#include <cmath>
#include <numbers>

#include "ccurv/constants.hpp"
#include "ccurv/error.hpp"
#include "ccurv/kernels.hpp"

namespace ccurv {

namespace {

constexpr double kPi = std::numbers::pi;

struct Trig {
  double st, ct, sp, cp, cos_sum;
  explicit Trig(const ProbeConfig& p)
      : st(std::sin(p.theta)),
        ct(std::cos(p.theta)),
        sp(std::sin(p.phi)),
        cp(std::cos(p.phi)),
        cos_sum(std::cos(p.theta + p.phi)) {}
  double cos_split() const { return ct * ct - cos_sum * cos_sum; }
};

double s_t(double omega) {
  return ode::solution_map({omega, [](double t) { return t; }}, 1.0);
}

double s_t2(double omega) {
  return ode::solution_map({omega, [](double t) { return t * t; }}, 1.0);
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::variational:
      return "variational";
    case Method::fd_oracle:
      return "fd-oracle";
    case Method::sphere_closed_form:
      return "sphere-closed-form";
  }
  return "?";
}

double a2(const ProbeConfig& p) {
  const double sd = std::sin(p.theta - p.phi);
  const double st = std::sin(p.theta), sp = std::sin(p.phi);
  const double r2 = p.r0 * p.r0;
  return sd * sd + r2 * st * st + r2 * sp * sp;
}

double c_curvature_sphere(double kappa, double rbar0, double theta, double phi) {
  if (!(rbar0 > 0.0 && rbar0 < kPi))
    throw ConfigError("c_curvature_sphere: rbar0 must lie in (0, pi)");
  if (!(kappa > 0.0)) throw ConfigError("c_curvature_sphere: kappa must be positive");
  static const kernels::SeriesView terms[4] = {
      kernels::series(kernels::Integrand::sphere_ss), kernels::series(kernels::Integrand::sphere_sc),
      kernels::series(kernels::Integrand::sphere_cs),
      kernels::series(kernels::Integrand::sphere_cross)};
  double out = 0.0;
  kernels::active().sphere(kappa, &rbar0, &theta, &phi, &out, 1, terms);
  return out;
}

CCurvSample c_curvature_at(const BundleState& y, const ProbeConfig& probe) {
  const double f0 = y[kF0], f1 = y[kF1];
  const double d0 = y[kFp0], d1 = y[kFp1];
  const double dd0 = y[kFpp0], dd1 = y[kFpp1];
  if (!(f1 > 0.0)) throw ConfigError("probe lies at or beyond the first conjugate point");
  const double r0 = probe.r0;
  const Trig tr(probe);
  const double s2t = tr.st * tr.st;
  const double cross = tr.ct * tr.st * tr.sp;
  const double q = f0 / f1;
  const double p_part = dd0 / f1 - f0 * dd1 / (f1 * f1) - 2.0 * d0 * d1 / (f1 * f1);
  const double tail = 2.0 * f0 * d1 * d1 / (f1 * f1 * f1);
  const double mixed = d0 / f1 - f0 * d1 / (f1 * f1);

  CCurvSample s;
  s.probe = probe;
  s.method = Method::variational;
  s.value = -s2t * (p_part + tail) + (2.0 / (r0 * r0)) * tr.cos_split() * (1.0 - q) +
            (4.0 / r0) * cross * mixed;

  // regrouped forms, used as internal consistency checks
  const double lead = d1 / f1 * tr.st + tr.sp * tr.ct / r0;
  s.alt_a = -s2t * p_part - 2.0 * q * lead * lead +
            (2.0 / (r0 * r0)) * (1.0 - q) *
                (2.0 * tr.ct * tr.cp * tr.st * tr.sp - s2t * tr.sp * tr.sp) +
            (2.0 / (r0 * r0)) * tr.ct * tr.ct * tr.sp * tr.sp + (4.0 / r0) * cross * d0 / f1;
  const double sq = tr.cp * tr.st + tr.ct * tr.sp;
  s.alt_b = -s2t * (p_part + tail + (2.0 / (r0 * r0)) * (1.0 - q)) +
            (2.0 / (r0 * r0)) * (1.0 - q) * sq * sq + (4.0 / r0) * cross * mixed;

  s.parts.e1 = f1 * f1 * dd0 - f0 * f1 * dd1 - 2.0 * f1 * d0 * d1 + 2.0 * f0 * d1 * d1;
  s.parts.e2 = (2.0 / (r0 * r0)) * f1 * f1 * (f1 - f0);
  s.parts.e3 = (4.0 / r0) * f1 * (f1 * d0 - f0 * d1);

  s.a2 = a2(probe);
  s.rank_one = s.a2 <= kRankOneA2;
  if (!s.rank_one) s.ratio = s.value / s.a2;
  return s;
}

CCurvSample c_curvature(const CurvatureField& field, const ProbeConfig& probe,
                        const ode::Tolerance& tol) {
  return c_curvature_at(solve_bundle(field, probe, tol).final_state(), probe);
}

AltForms alt_forms(const CurvatureField& field, const ProbeConfig& probe) {
  const CCurvSample s = c_curvature(field, probe);
  return {s.value, s.alt_a, s.alt_b};
}

double c_curvature_fd_oracle(const CurvatureField& field, const ProbeConfig& probe, double h,
                             int fixed_steps) {
  validate(probe);
  if (!(h >= 1e-4 && h <= 1e-2)) throw ConfigError("fd oracle: h must lie in [1e-4, 1e-2]");
  const Trig tr(probe);
  OffAxisOptions opts;
  opts.fixed_steps = fixed_steps;
  auto hessian = [&](double lambda) {
    const double v1 = lambda * tr.sp;
    const double v2 = probe.r0 + lambda * tr.cp;
    const double len = std::hypot(v1, v2);
    const OffAxisJacobi j = jacobi_off_axis(field, v1, v2, opts);
    if (!(j.f1 > 0.0)) throw NumericalError("fd oracle: stencil crosses the conjugate locus");
    const double u1 = v1 / len, u2 = v2 / len;
    const double dot = tr.st * u1 + tr.ct * u2;
    const double p1 = tr.st - dot * u1, p2 = tr.ct - dot * u2;
    return 1.0 - (1.0 - j.f0 / j.f1) * (p1 * p1 + p2 * p2);
  };
  const double ap = hessian(h), a0 = hessian(0.0), am = hessian(-h);
  return -(ap - 2.0 * a0 + am) / (h * h);
}

MaclaurinData maclaurin_data(const CurvatureField& field, double phi) {
  const CurvatureJet j = field.jet(0.0, 0.0);
  const double sp = std::sin(phi), cp = std::cos(phi);
  return {j.k2, 3.0 * cp * j.k2 + sp * j.k1, (2.0 + 4.0 * cp * cp) * j.k2 + 4.0 * sp * cp * j.k1};
}

MaclaurinResidual maclaurin_residual(const CurvatureField& field, const ProbeConfig& probe,
                                     std::optional<double> epsilon) {
  const double kappa = field.kappa0();
  const double rbar = std::sqrt(kappa) * probe.r0;
  if (!(rbar < kPi)) throw ConfigError("maclaurin_residual: requires rbar0 < pi");
  const double eps = epsilon ? *epsilon : c2_norm(field);
  if (eps > 1.0 / (kPi * kPi)) throw ConfigError("maclaurin_residual: requires eps <= 1/pi^2");

  const BundleState y = solve_bundle(field, probe).final_state();
  const CCurvSample s = c_curvature_at(y, probe);
  const double f1 = y[kF1];
  const double fb0 = std::cos(rbar);
  const double fb1 = std::sin(rbar) / rbar;
  const double cbar = c_curvature_sphere(kappa, rbar, probe.theta, probe.phi);
  const MaclaurinData psi = maclaurin_data(field, probe.phi);
  const double st = s_t(rbar), st2 = s_t2(rbar);
  const Trig tr(probe);
  const double r0 = probe.r0;
  const double bracket = st - fb0 * st2 / fb1;

  const double expr = std::pow(f1 / fb1, 3) * s.value - cbar -
                      r0 * psi.psi2 * tr.st * tr.st / fb1 * bracket +
                      2.0 * r0 * psi.psi0 * (st2 - st) / fb1 * tr.cos_split() +
                      4.0 * r0 * psi.psi1 * tr.ct * tr.st * tr.sp / fb1 * bracket;
  const double c1 = default_constants().C[1];
  const double bound = c1 * c1 * c1 * std::pow(kPi, 8) / (fb1 * fb1 * fb1) * eps * r0 * r0 *
                       (338.0 * tr.st * tr.st + 268.0 * tr.ct * tr.ct * tr.sp * tr.sp);
  return {std::abs(expr), bound, eps};
}

std::vector<double> default_r_sequence() {
  std::vector<double> r;
  for (int k = 0; k <= 5; ++k) r.push_back(0.4 * std::ldexp(1.0, -k));
  return r;
}

NearZeroLimit near_zero_limit(const CurvatureField& field, double theta, double phi,
                              std::span<const double> r_sequence) {
  const std::size_t n = r_sequence.size();
  if (n < 3) throw ConfigError("near_zero_limit: need at least three radii");
  for (std::size_t i = 1; i < n; ++i)
    if (!(r_sequence[i] < r_sequence[i - 1] && r_sequence[i] > 0.0))
      throw ConfigError("near_zero_limit: radii must decrease toward 0");

  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i)
    p[i] = c_curvature(field, {r_sequence[i], theta, phi}).value;
  // Neville tableau evaluated at r = 0; keep the last two diagonal entries
  double prev_diag = p[n - 1];
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const double ri = r_sequence[i], rj = r_sequence[i + m];
      p[i] = (rj * p[i] - ri * p[i + 1]) / (rj - ri);
    }
    if (m == n - 2) prev_diag = p[1];
  }
  NearZeroLimit out;
  out.value = p[0];
  out.error_estimate = std::abs(p[0] - prev_diag);
  const double sd = std::sin(theta - phi);
  out.expected = 2.0 / 3.0 * field.kappa0() * sd * sd;
  if (!(out.error_estimate <= 1e-6) || !std::isfinite(out.value))
    throw NumericalError("near_zero_limit: extrapolation did not converge");
  return out;
}

}  // namespace ccurv
