#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel grid kernels. Every kernel exists as a scalar reference and,
// on x86-64 builds, as an AVX2 variant; the variant is picked at runtime from
// the CPU feature bits unless CCURV_ISA=scalar|avx2 forces one.

namespace ccurv::kernels {

/// One-variable functions scanned over grids. Those with a removable
/// singularity at 0 are evaluated from their Laurent series near the origin.
enum class Integrand : int {
  c6,
  c7,
  c8,
  c9,
  c10,
  c11,
  c12,
  c13,
  c14,
  c15,
  c16,
  c17,
  h1,
  h2,
  mu1_first,
  mu1_second,
  mu1_third,
  sphere_ss,     ///< coefficient of sin^2(theta) sin^2(phi)
  sphere_sc,     ///< coefficient of sin^2(theta) cos^2(phi)
  sphere_cs,     ///< coefficient of cos^2(theta) sin^2(phi)
  sphere_cross,  ///< coefficient of cos(theta) sin(theta) cos(phi) sin(phi)
  count,
};

constexpr std::size_t kIntegrandCount = static_cast<std::size_t>(Integrand::count);

std::string_view name(Integrand f);

/// Truncated series sum_k coeffs[k] tau^(valuation + k), used for tau < below.
struct SeriesView {
  const double* coeffs = nullptr;
  int count = 0;
  int valuation = 0;
  double below = 0.0;
};

struct SupResult {
  double value = 0.0;  ///< largest |f| on the grid
  double tau = 0.0;
  std::size_t index = 0;
};

/// Smallest slack (rhs - lhs) of the three trigonometric inequalities over a
/// batch of probes, with the index attaining it.
struct TrigMargins {
  double area_weight = 0.0;  ///< sin^2 t + cos^2 t sin^2 p - A2 / (4 pi^2)
  double cos_split = 0.0;    ///< sin^2 t + 2 cos^2 t sin^2 p - |cos^2 t - cos^2(t+p)|
  double cross = 0.0;        ///< sin^2 t + cos^2 t sin^2 p - 2 |cos t sin t sin p|
  std::size_t area_weight_at = 0, cos_split_at = 0, cross_at = 0;
};

struct KernelTable {
  const char* isa;
  void (*evaluate)(Integrand f, const double* tau, double* out, std::size_t n, SeriesView s);
  /// Grid tau_i = lo + (hi - lo) i / (n - 1), i = 0..n-1.
  SupResult (*sup_abs)(Integrand f, double lo, double hi, std::size_t n, SeriesView s);
  /// kappa * (closed-form c-curvature over kappa) at rbar = sqrt(kappa) r0.
  void (*sphere)(double kappa, const double* rbar, const double* theta, const double* phi,
                 double* out, std::size_t n, const SeriesView* terms);
  TrigMargins (*trig_margins)(const double* r0, const double* theta, const double* phi,
                              std::size_t n);
};

enum class Isa { scalar, avx2 };

bool available(Isa isa);
/// Table for a specific ISA; throws ConfigError when it is not available.
const KernelTable& table(Isa isa);
/// Table chosen at first use (CPU features, then the CCURV_ISA override).
const KernelTable& active();

/// Series data (threshold included) for an integrand, built once.
SeriesView series(Integrand f);

/// Convenience wrappers over the active table with the built-in series.
double evaluate(Integrand f, double tau);
void evaluate(Integrand f, const double* tau, double* out, std::size_t n);
SupResult sup_abs(Integrand f, double lo, double hi, std::size_t n);

}  // namespace ccurv::kernels
