#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ccurv/field.hpp"
#include "ccurv/jacobi.hpp"

namespace ccurv {

enum class Method { variational, fd_oracle, sphere_closed_form };

std::string_view to_string(Method m);

/// Coefficients of -sin^2 t, (cos^2 t - cos^2(t + p)) and cos t sin t sin p
/// in f1^3 * C.
struct CurvatureParts {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
};

/// a2 at or below this is treated as a rank <= 1 configuration.
inline constexpr double kRankOneA2 = 1e-14;

struct CCurvSample {
  double value = 0.0;
  double a2 = 0.0;
  std::optional<double> ratio;  ///< value / a2, absent for rank-1 probes
  CurvatureParts parts;
  double alt_a = 0.0;
  double alt_b = 0.0;
  ProbeConfig probe;
  Method method = Method::variational;
  bool rank_one = false;
};

/// sin^2(theta - phi) + r0^2 sin^2 theta + r0^2 sin^2 phi.
double a2(const ProbeConfig& probe);

/// Closed-form c-curvature of the constant-curvature surface (not divided by
/// kappa). Throws ConfigError unless 0 < rbar0 < pi.
double c_curvature_sphere(double kappa, double rbar0, double theta, double phi);

/// Assembles C from bundle values at t = 1. Throws ConfigError when f1 <= 0.
CCurvSample c_curvature_at(const BundleState& y, const ProbeConfig& probe);

/// Solves the bundle for `probe` and assembles C at t = 1.
CCurvSample c_curvature(const CurvatureField& field, const ProbeConfig& probe,
                        const ode::Tolerance& tol = kBundleTolerance);

struct AltForms {
  double general = 0.0;
  double alt_a = 0.0;
  double alt_b = 0.0;
};

AltForms alt_forms(const CurvatureField& field, const ProbeConfig& probe);

/// -(A(v0 + h nu) - 2 A(v0) + A(v0 - h nu)) / h^2 with A from off-axis
/// Jacobi fields. `fixed_steps` selects the fixed-step integrator (0: adaptive).
double c_curvature_fd_oracle(const CurvatureField& field, const ProbeConfig& probe,
                             double h = 1e-3, int fixed_steps = 2000);

struct MaclaurinData {
  double psi0 = 0.0;
  double psi1 = 0.0;
  double psi2 = 0.0;
};

MaclaurinData maclaurin_data(const CurvatureField& field, double phi);

struct MaclaurinResidual {
  double residual = 0.0;  ///< absolute value of the Maclaurin expression
  double bound = 0.0;
  double epsilon = 0.0;
  /// residual <= bound up to 1e-9 max(1, bound)
  bool holds() const { return residual <= bound + 1e-9 * (bound > 1.0 ? bound : 1.0); }
};

/// `epsilon` defaults to c2_norm(field).
MaclaurinResidual maclaurin_residual(const CurvatureField& field, const ProbeConfig& probe,
                                     std::optional<double> epsilon = std::nullopt);

struct NearZeroLimit {
  double value = 0.0;
  double error_estimate = 0.0;  ///< gap between the last two extrapolants
  double expected = 0.0;        ///< (2/3) K(0) sin^2(theta - phi)
};

/// r0 = 0.4 * 2^-k, k = 0..5.
std::vector<double> default_r_sequence();

/// Polynomial (Neville) extrapolation of C(r0) to r0 = 0. Throws
/// NumericalError when the last two extrapolants disagree by more than 1e-6.
NearZeroLimit near_zero_limit(const CurvatureField& field, double theta, double phi,
                              std::span<const double> r_sequence);

struct HMuValues {
  double h1 = 0.0;
  double h2 = 0.0;
  double mu1 = 0.0;
};

/// h1(tau), h2(tau) and mu1(tau) for tau in (0, pi).
HMuValues h_mu_functions(double tau);

/// Square-plus-remainder decomposition of the sphere c-curvature over kappa.
struct SphereSplit {
  double s1 = 0.0;
  double s2 = 0.0;
  double closed_form = 0.0;  ///< c_curvature_sphere / kappa
  double mu1_minorant = 0.0; ///< mu1(rbar0) (sin^2 theta + cos^2 theta sin^2 phi)
};

SphereSplit sphere_split(double rbar0, double theta, double phi);

}  // namespace ccurv
