#pragma once

#include <array>
#include <cstddef>

#include "ccurv/field.hpp"
#include "ccurv/ode.hpp"

namespace ccurv {

/// Probe (r0, theta, phi): V0 = r0 d2, xi = sin(theta) d1 + cos(theta) d2,
/// nu = sin(phi) d1 + cos(phi) d2.
struct ProbeConfig {
  double r0 = 1.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Throws ConfigError unless 0 < r0 <= pi and theta, phi lie in [0, 2 pi).
void validate(const ProbeConfig& probe);

/// Bundle state layout: each quantity is followed by its t-derivative.
enum BundleSlot : std::size_t {
  kF0 = 0,
  kF0Dot,
  kF1,
  kF1Dot,
  kFp0,  ///< D_nu f0
  kFp0Dot,
  kFp1,
  kFp1Dot,
  kFpp0,  ///< D_nu D_nu f0
  kFpp0Dot,
  kFpp1,
  kFpp1Dot,
  kX1,  ///< D_nu D_nu X^1
  kX1Dot,
  kX2,  ///< D_nu D_nu X^2
  kX2Dot,
  kBundleDim,
};

using BundleState = std::array<double, kBundleDim>;

/// Jacobi fields along the axis t -> (0, t r0) and their first two
/// variations in the nu direction.
struct JacobiBundle {
  ProbeConfig probe;
  ode::Trajectory traj;

  BundleState at_node(std::size_t i) const;
  BundleState final_state() const { return at_node(traj.size() - 1); }
};

/// Default tolerances for bundle solves; tighter than the generic integrator
/// defaults because c-curvature divides by f1^3 near conjugacy.
inline constexpr ode::Tolerance kBundleTolerance{1e-12, 1e-14};

JacobiBundle solve_bundle(const CurvatureField& field, const ProbeConfig& probe,
                          const ode::Tolerance& tol = kBundleTolerance);

/// First zero of u'' + K(0, s) u = 0, u(0) = 0, u'(0) = 1, in arclength.
/// Throws NumericalError when no zero occurs before the patch end.
double conjugate_distance(const CurvatureField& field,
                          const ode::Tolerance& tol = kBundleTolerance);

/// Geodesic in the Fermi chart: state (x1, x2, dx1/dt, dx2/dt).
struct GeodesicPath {
  ode::Trajectory traj;
  std::array<double, 4> at(double t) const;
  /// g(X', X') at time t.
  double energy(const CurvatureField& field, double t) const;
};

GeodesicPath geodesic_shoot(const CurvatureField& field, double v1, double v2, double t_end = 1.0,
                            const ode::Tolerance& tol = kBundleTolerance);

struct OffAxisOptions {
  ode::Tolerance tol = kBundleTolerance;
  /// > 0 selects a fixed-step fifth-order integration with this many steps;
  /// its output is a smooth function of v, which finite differences need.
  int fixed_steps = 0;
};

struct OffAxisJacobi {
  double f0 = 1.0;
  double f1 = 0.0;
};

/// f0, f1 at t = 1 for the geodesic with initial velocity (v1, v2) at the origin.
OffAxisJacobi jacobi_off_axis(const CurvatureField& field, double v1, double v2,
                              const OffAxisOptions& opts = {});

}  // namespace ccurv
