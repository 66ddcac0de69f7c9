#include "ccurv/jacobi.hpp"

#include <cmath>
#include <numbers>

#include "ccurv/error.hpp"

namespace ccurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_in_patch(const Patch& p, double x1, double x2) {
  if (!(std::abs(x1) <= p.x1_max && x2 >= p.x2_min && x2 <= p.x2_max))
    throw NumericalError("geodesic left the field patch");
}

// Geodesic acceleration in the Fermi chart, G = w^2.
void geodesic_accel(const CurvatureField& field, const double* y, double* dy) {
  check_in_patch(field.patch(), y[0], y[1]);
  const FermiMetricSample m = metric_smooth(field, y[0], y[1]);
  const double p1 = y[2], p2 = y[3];
  dy[0] = p1;
  dy[1] = p2;
  dy[2] = m.w * m.dw_dx1 * p2 * p2;
  dy[3] = -2.0 * (m.dw_dx1 / m.w) * p1 * p2 - (m.dw_dx2 / m.w) * p2 * p2;
}

}  // namespace

void validate(const ProbeConfig& probe) {
  if (!(probe.r0 > 0.0 && probe.r0 <= std::numbers::pi))
    throw ConfigError("probe: r0 must lie in (0, pi]");
  if (!(probe.theta >= 0.0 && probe.theta < kTwoPi))
    throw ConfigError("probe: theta must lie in [0, 2 pi)");
  if (!(probe.phi >= 0.0 && probe.phi < kTwoPi))
    throw ConfigError("probe: phi must lie in [0, 2 pi)");
}

BundleState JacobiBundle::at_node(std::size_t i) const {
  BundleState out{};
  const auto s = traj.state(i);
  for (std::size_t c = 0; c < kBundleDim; ++c) out[c] = s[c];
  return out;
}

JacobiBundle solve_bundle(const CurvatureField& field, const ProbeConfig& probe,
                          const ode::Tolerance& tol) {
  validate(probe);
  const double r0 = probe.r0;
  const double r2 = r0 * r0;
  const double sp = std::sin(probe.phi), cp = std::cos(probe.phi);

  ode::VectorField rhs = [field, r0, r2, sp, cp](double t, std::span<const double> y,
                                                 std::span<double> dy) {
    const CurvatureJet j = field.jet(0.0, t * r0);
    const double k = j.k;
    const double f1 = y[kF1];
    // D_nu and D_nu D_nu of K(X(t))
    const double kp = sp * f1 * j.k1 + t * cp * j.k2;
    const double kpp = j.k1 * y[kX1] + j.k2 * y[kX2] + j.k11 * f1 * f1 * sp * sp +
                       2.0 * j.k12 * t * f1 * sp * cp + j.k22 * t * t * cp * cp;
    for (std::size_t a = 0; a < 2; ++a) {
      const double f = y[kF0 + 2 * a];
      const double fp = y[kFp0 + 2 * a];
      const double fpp = y[kFpp0 + 2 * a];
      dy[kF0 + 2 * a] = y[kF0Dot + 2 * a];
      dy[kF0Dot + 2 * a] = -r2 * k * f;
      dy[kFp0 + 2 * a] = y[kFp0Dot + 2 * a];
      dy[kFp0Dot + 2 * a] = -r2 * k * fp - (2.0 * r0 * cp * k + r2 * kp) * f;
      dy[kFpp0 + 2 * a] = y[kFpp0Dot + 2 * a];
      dy[kFpp0Dot + 2 * a] = -r2 * k * fpp - (2.0 * k * f + 4.0 * r0 * cp * (kp * f + k * fp) +
                                              r2 * (kpp * f + 2.0 * kp * fp));
    }
    dy[kX1] = y[kX1Dot];
    dy[kX1Dot] = -r2 * k * y[kX1] - 4.0 * r0 * cp * sp * k * f1 - r2 * sp * sp * f1 * f1 * j.k1 -
                 2.0 * r2 * sp * cp * t * f1 * j.k2;
    dy[kX2] = y[kX2Dot];
    dy[kX2Dot] = 4.0 * r0 * sp * sp * k * f1 * y[kF1Dot] + r2 * sp * sp * f1 * f1 * j.k2;
  };

  BundleState y0{};
  y0[kF0] = 1.0;
  y0[kF1Dot] = 1.0;
  ode::IntegratorOptions opts;
  opts.tol = tol;
  return JacobiBundle{probe, ode::integrate_ivp(rhs, y0, 1.0, opts)};
}

double conjugate_distance(const CurvatureField& field, const ode::Tolerance& tol) {
  const double s_end = field.patch().x2_max;
  ode::VectorField rhs = [field](double s, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -field.K(0.0, s) * y[0];
  };
  const double y0[2] = {0.0, 1.0};
  ode::IntegratorOptions opts;
  opts.tol = tol;
  opts.max_step = 0.05;
  opts.stop = [](double s, std::span<const double> y) { return s > 1e-3 && y[0] < 0.0; };
  const ode::Trajectory traj = ode::integrate_ivp(rhs, y0, s_end, opts);
  const auto zero = ode::first_zero(traj, 0, {1e-6, 1e-12});
  if (!zero) throw NumericalError("no conjugate point before the end of the field patch");
  return *zero;
}

std::array<double, 4> GeodesicPath::at(double t) const {
  const std::vector<double> y = traj.refine(t);
  return {y[0], y[1], y[2], y[3]};
}

double GeodesicPath::energy(const CurvatureField& field, double t) const {
  const auto y = at(t);
  const double w = metric_smooth(field, y[0], y[1]).w;
  return y[2] * y[2] + w * w * y[3] * y[3];
}

GeodesicPath geodesic_shoot(const CurvatureField& field, double v1, double v2, double t_end,
                            const ode::Tolerance& tol) {
  if (!(std::hypot(v1, v2) <= std::numbers::pi))
    throw ConfigError("geodesic_shoot: |v| must not exceed pi");
  ode::VectorField rhs = [field](double, std::span<const double> y, std::span<double> dy) {
    geodesic_accel(field, y.data(), dy.data());
  };
  const double y0[4] = {0.0, 0.0, v1, v2};
  ode::IntegratorOptions opts;
  opts.tol = tol;
  return GeodesicPath{ode::integrate_ivp(rhs, y0, t_end, opts)};
}

OffAxisJacobi jacobi_off_axis(const CurvatureField& field, double v1, double v2,
                              const OffAxisOptions& opts) {
  if (!(std::hypot(v1, v2) <= std::numbers::pi))
    throw ConfigError("jacobi_off_axis: |v| must not exceed pi");
  // g(v, v) at the origin, where G = 1
  const double speed2 = v1 * v1 + v2 * v2;
  ode::VectorField rhs = [field, speed2](double, std::span<const double> y,
                                         std::span<double> dy) {
    geodesic_accel(field, y.data(), dy.data());
    const double k = field.K(y[0], y[1]);
    dy[4] = y[5];
    dy[5] = -speed2 * k * y[4];
    dy[6] = y[7];
    dy[7] = -speed2 * k * y[6];
  };
  const double y0[8] = {0.0, 0.0, v1, v2, 1.0, 0.0, 0.0, 1.0};
  std::vector<double> yf;
  if (opts.fixed_steps > 0) {
    yf = ode::integrate_fixed(rhs, y0, 1.0, opts.fixed_steps);
  } else {
    ode::IntegratorOptions io;
    io.tol = opts.tol;
    const auto traj = ode::integrate_ivp(rhs, y0, 1.0, io);
    const auto s = traj.final_state();
    yf.assign(s.begin(), s.end());
  }
  return {yf[4], yf[6]};
}

}  // namespace ccurv
