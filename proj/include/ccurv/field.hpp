#pragma once

#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "ccurv/ode.hpp"

namespace ccurv {

enum class Family { constant, cosine_bump, product_wave, user_table };

std::string_view to_string(Family f);
/// Accepts "constant", "cosine-bump", "product-wave", "user-table".
Family parse_family(std::string_view s);

/// Rectangle of the Fermi chart on which the field is declared.
struct Patch {
  double x1_max = 1.2;
  double x2_min = -0.2;
  double x2_max = std::numbers::pi + 0.2;
};

/// Samples of K on a uniform (x1, x2) grid; row j holds the n1 values at x2_j.
struct CurvatureTable {
  int n1 = 0, n2 = 0;
  double x1_min = 0, x1_max = 0, x2_min = 0, x2_max = 0;
  std::vector<double> values;
};

struct FieldParams {
  double wave1 = 1.0;
  double wave2 = 1.0;
  double phase = 0.0;
  double phase2 = 0.0;  ///< product-wave only: phase of the x2 factor
  CurvatureTable table;  ///< user-table only
  bool allow_flat = false;  ///< admits the validation-only field K = 0
  Patch patch;
};

/// K and its coordinate derivatives up to order two.
struct CurvatureJet {
  double k = 0, k1 = 0, k2 = 0, k11 = 0, k12 = 0, k22 = 0;
};

/// Gauss curvature prescribed in the Fermi chart of the probe geodesic.
///
/// Perturbed families read K = floor + amplitude (1 + p(x)) / 2 with |p| <= 1,
/// so K >= floor >= 1; `kappa0()` reports the actual K(0, 0).
class CurvatureField {
 public:
  Family family() const;
  double kappa0() const;
  double amplitude() const;
  const FieldParams& params() const;
  const Patch& patch() const;

  CurvatureJet jet(double x1, double x2) const;
  double K(double x1, double x2) const { return jet(x1, x2).k; }

  /// Dense-sampled minimum of K over the patch.
  double min_K() const;
  /// Upper bound of K over the patch (analytic where available).
  double max_K() const;
  bool is_flat() const;
  std::string describe() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  friend CurvatureField make_field(Family, double, double, const FieldParams&);
};

/// Builds and validates a field. `kappa0` is the constant value for the
/// constant family and the floor level otherwise. Throws ConfigError.
CurvatureField make_field(Family family, double kappa0, double amplitude,
                          const FieldParams& params = {});

/// sqrt(G) and its first derivatives at one chart point.
struct FermiMetricSample {
  double w = 1.0;
  double dw_dx1 = 0.0;
  double dw_dx2 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

inline constexpr double kMetricFloor = 0.1;

/// Integrates w'' = -K w (and the x2-variational equation) along the x1-line
/// through (0, x2). Throws ConfigError outside the patch and NumericalError
/// when w drops to kMetricFloor.
FermiMetricSample reconstruct_metric(const CurvatureField& field, double x2, double x1,
                                     const ode::Tolerance& tol = {});

/// Same quantities by a fixed-step fifth-order scheme, a smooth function of
/// (x1, x2); used inside geodesic right-hand sides.
FermiMetricSample metric_smooth(const CurvatureField& field, double x1, double x2);

struct C2NormEstimate {
  double value = 0.0;  ///< sup of |K - 1| + |dK|_g + |Hess K|_g
  // the three summands at the maximizer (arg_x1, arg_x2)
  double deviation = 0.0;
  double gradient = 0.0;
  double hessian = 0.0;
  double arg_x1 = 0.0, arg_x2 = 0.0;
};

/// Sampled C^2 norm of K - 1 on an n1 x n2 grid over the patch (n1, n2 >= 32).
C2NormEstimate c2_norm_estimate(const CurvatureField& field, const Patch& patch, int n1, int n2);
double c2_norm(const CurvatureField& field, int n1 = 65, int n2 = 65);

}  // namespace ccurv
