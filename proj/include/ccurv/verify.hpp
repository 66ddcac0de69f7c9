#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccurv/ccurv.hpp"
#include "ccurv/constants.hpp"
#include "ccurv/field.hpp"

namespace ccurv {

/// Slack admitted by every bound check: 1e-9 max(1, rhs).
double bound_slack(double rhs);

struct BoundCheck {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs at the worst node
  bool pass = false;
  ProbeConfig worst;
};

struct BoundCheckReport {
  std::vector<BoundCheck> checks;
  double epsilon = 0.0;
  bool all_pass() const;
  /// Check with the smallest margin, nullptr when empty.
  const BoundCheck* worst() const;
};

/// Folds one (lhs, rhs) observation into the check with the given id.
/// A negative `slack` selects bound_slack(rhs).
void record(BoundCheckReport& report, const std::string& id, double lhs, double rhs,
            const ProbeConfig& at = {}, double slack = -1.0);

/// Number of uniform samples of t in [0, 1] used for sup norms.
inline constexpr int kSupSamples = 401;

/// The three lines of the perturbation lemma for every (j, k, a) and the
/// polarization bounds on D12 f_a, at every (r0, phi) node. `epsilon`
/// defaults to c2_norm(field); throws ConfigError when it exceeds 1/pi^2.
BoundCheckReport verify_lemma_bounds(const CurvatureField& field, std::span<const double> r0_grid,
                                     std::span<const double> phi_grid,
                                     std::optional<double> epsilon = std::nullopt);

/// Maclaurin residual against its bound at every probe (id "corollary").
BoundCheckReport verify_corollary(const CurvatureField& field, std::span<const ProbeConfig> probes,
                                  std::optional<double> epsilon = std::nullopt);

struct ScanGrid {
  int nr = 16;
  int ntheta = 16;
  int nphi = 16;
};

struct ScanFailure {
  ProbeConfig probe;
  std::string message;
};

struct ScanReport {
  ScanGrid grid;
  std::string field_id;
  std::vector<double> r0_nodes, theta_nodes, phi_nodes;
  std::vector<CCurvSample> samples;  ///< r0-major, then phi, then theta
  double min_ratio = 0.0;
  ProbeConfig argmin;
  std::vector<ProbeConfig> violations;
  double sigma_used = 0.0;
  double epsilon_used = 0.0;
  double conj_margin = 0.0;
  double ell0 = 0.0;
  double rank_one_max = 0.0;  ///< largest |C| over rank-1 probes
  std::size_t rank_one_count = 0;
  std::vector<ScanFailure> failures;
  bool exploratory = false;  ///< epsilon above the proven threshold

  bool rank_one_ok() const { return rank_one_max <= 1e-8; }
  bool clean() const { return violations.empty() && failures.empty() && rank_one_ok(); }
};

/// Violation slack 1e-9 max(1, sigma a2).
inline double violation_slack(double sigma_a2) { return 1e-9 * (sigma_a2 > 1.0 ? sigma_a2 : 1.0); }

/// Worker count: CCURV_THREADS when set (>= 1), else the hardware count.
unsigned worker_count();

/// C >= sigma a2 on the tensor grid r0 in (0, (1 - conj_margin) l0],
/// theta, phi in [0, 2 pi). One bundle per (r0, phi) serves every theta.
ScanReport scan_apcc(const CurvatureField& field, const ScanGrid& grid, double sigma,
                     double conj_margin = 1e-3, std::optional<double> epsilon = std::nullopt,
                     const ode::Tolerance& tol = kBundleTolerance);

struct BoundaryCurvature {
  double k = 0.0;
  double ell0 = 0.0;
  double d1 = 0.0, d2 = 0.0;            ///< D_1 f1, D_2 f1 at (v0, 1)
  double d11 = 0.0, d12 = 0.0, d22 = 0.0;
};

/// Curvature of the NoConj boundary curve at v0 = (0, l0).
BoundaryCurvature noconj_boundary_curvature(const CurvatureField& field);

/// mu1 lower bounds on both ranges and the two anchors.
BoundCheckReport mu1_minorant_check(double delta1, double delta2, std::size_t n_grid = 100'001);

/// Sturm comparison of f1 along every r0 trajectory, the l0 bracket and the
/// rbar0 pinching at conjugacy.
BoundCheckReport sturm_and_pinch_suite(const CurvatureField& field,
                                       std::span<const double> r0_grid,
                                       std::optional<double> epsilon = std::nullopt);

/// h1 increasing on [0, pi], h2 on [0, pi/2], and on (0, 1] the minorants
/// h1 >= (2/315) tau^6 (7 - tau^2), h2 >= (4/5) tau^6 (2/9 - tau^2/21),
/// mu1 >= (1/45) tau^2 (1 - (5/28) tau^2). Comparisons use 1e-12 relative slack.
BoundCheckReport hfunction_checks(std::size_t n_grid = 10'001);

}  // namespace ccurv
