#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace ccurv {

enum class Provenance { closed_form, supremum_search, composite };

std::string_view to_string(Provenance p);

struct ConstantEntry {
  std::string key;  ///< "B.j.k.a", "c.i" or "C.i"
  double value = 0.0;
  Provenance provenance = Provenance::closed_form;
  double tau = 0.0;          ///< maximizer, supremum-search entries only
  double uncertainty = 0.0;  ///< half grid spacing in tau, supremum-search entries only
};

/// Universal constants: B_{jka}, c_1..c_17, C_1..C_4.
struct ConstantsTable {
  std::array<double, 18> B{};     ///< index via b_index(j, k, a)
  std::array<double, 18> c{};     ///< c[1] .. c[17]; c[0] unused
  std::array<double, 18> c_tau{}; ///< maximizers of the supremum constants
  double grid_spacing_2pi = 0.0;  ///< grid spacing on [0, 2 pi] (c6..c10)
  double grid_spacing_half = 0.0; ///< grid spacing on [0, pi/2] (c11..c17)
  std::array<double, 5> C{};      ///< C[1] .. C[4]; C[0] unused
  /// C1 from the max exactly as printed (without B_{2ka}); reported only.
  double C1_printed = 0.0;

  static constexpr std::size_t b_index(int j, int k, int a) {
    return static_cast<std::size_t>((j - 1) * 6 + k * 2 + a);
  }
  double b(int j, int k, int a) const { return B[b_index(j, k, a)]; }

  /// B_120 + 1.5 B_121 + 2 B_110 B_111 + 36 / (5 pi^2)
  double pinch() const;
  /// Flattened view in a fixed order (B, then c, then C).
  std::vector<ConstantEntry> entries() const;
};

/// Fills B_{jka} and c_1..c_5 (closed forms) in dependency order.
ConstantsTable b_constants();

struct SupOptions {
  std::size_t n_grid = 1'000'001;
  double refine_tol = 1e-10;
};

/// Grid scan plus golden-section refinement of c_6..c_17; writes into `table`.
void sup_constants(ConstantsTable& table, const SupOptions& opts = {});

/// C_1..C_4 from a table with B and c filled.
void composite_constants(ConstantsTable& table);

ConstantsTable compute_constants(const SupOptions& opts = {});
/// Table with default options, computed once per process.
const ConstantsTable& default_constants();

struct Threshold {
  std::string id;         ///< e.g. "epsdel7"
  std::string parameter;  ///< what `value` bounds, e.g. "eps/2+delta (eps=2 delta)"
  double value = 0.0;
};

/// Published "we may take" choices; each chosen value is a directed rounding
/// of the corresponding raw threshold.
struct ChosenValues {
  double eta1 = 0, delta1 = 0, sigma1 = 0;
  double eta2 = 0, delta2 = 0, sigma2 = 0;
  double eta3 = 0, sigma3 = 0;
  double beta = 0, gamma = 0, C = 0;
  double eta = 0, sigma = 0;
};

struct ThresholdReport {
  std::vector<Threshold> conditions;
  ChosenValues raw;     ///< unrounded
  ChosenValues chosen;  ///< directed roundings
  double eps_C2 = 0.0;  ///< largest eps * C2 admitted by condition 11 at delta2
  double beta_roots[2] = {0, 0};
  std::string binding_near_conjugacy;  ///< condition giving the smallest threshold in 1..8
};

/// Solves every printed smallness condition for its maximal admissible
/// parameter. Throws NumericalError for a non-monotone condition or a
/// non-positive threshold.
ThresholdReport smallness_thresholds(const ConstantsTable& table);

/// Rounds x to `digits` significant digits toward -inf / +inf.
double round_down_sig(double x, int digits);
double round_up_sig(double x, int digits);

struct PaperCheck {
  std::string id;
  double computed = 0.0;
  double published = 0.0;
  std::string tolerance;  ///< human-readable rule
  bool pass = false;
};

/// Published values with their documented tolerances.
std::vector<PaperCheck> check_against_paper(const ConstantsTable& table,
                                            const ThresholdReport& report);

}  // namespace ccurv
