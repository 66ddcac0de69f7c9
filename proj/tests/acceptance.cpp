// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ccurv/ccurv.hpp"
#include "ccurv/constants.hpp"
#include "ccurv/kernels.hpp"
#include "ccurv/ode.hpp"
#include "ccurv/verify.hpp"
#include "gen.hpp"

using namespace ccurv;

namespace {

constexpr double kPi = std::numbers::pi;

// pinned tolerances
constexpr double kSphereRelTol = 1e-7;
constexpr double kOracleRelTol = 1e-4;
constexpr double kBoundaryTol = 1e-6;
constexpr double kRankOneTol = 1e-8;
constexpr double kResidualZeroTol = 1e-9;
constexpr double kNearZeroTol = 1e-5;
constexpr double kContractionSlack = 1e-9;
constexpr double kTrigSlack = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) o.require(secs <= budget_s, "runtime " + num(secs) + " s > " + num(budget_s) + " s");
  std::printf("%s  %d  %-44s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", id, title, secs,
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

// Amplitude of `family` giving a measured C2 norm close to `target`.
CurvatureField field_with_epsilon(Family family, double target, const FieldParams& p = {}) {
  const double probe_amp = 1e-3;
  const double eps = c2_norm(make_field(family, 1.0, probe_amp, p));
  return make_field(family, 1.0, probe_amp * target / eps, p);
}

FieldParams wave_params() {
  FieldParams p;
  p.wave1 = 1.5;
  p.wave2 = 0.8;
  p.phase = 0.3;
  p.phase2 = 1.1;
  return p;
}

bool within_rel(double x, double ref, double rel) { return std::abs(x - ref) <= rel * std::abs(ref); }

struct PiecewisePoly {
  std::vector<double> breaks;
  std::vector<std::array<double, 4>> coeffs;
  double operator()(double t) const {
    std::size_t i = 0;
    while (i + 1 < breaks.size() && t >= breaks[i + 1]) ++i;
    const auto& c = coeffs[i];
    const double u = t - breaks[i];
    return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
  }
};

}  // namespace

int main() {
  std::printf("acceptance run, kernels: %s\n", kernels::active().isa);

  criterion(1, "constant-curvature equivalence", 10.0, [] {
    Outcome o;
    const double angles[12][2] = {{kPi / 2, kPi / 2}, {kPi / 2, 0.0}, {0.0, kPi / 2}, {1.0, 2.0},
                                  {0.3, 0.3},         {2.5, 4.0},     {5.9, 0.1},     {0.7, 1.9},
                                  {3.0, 0.2},         {4.4, 5.5},     {1.2, 1.2 + kPi}, {0.1, 6.0}};
    double worst = 0.0;
    for (double kappa : {1.0, 1.1}) {
      const CurvatureField f = make_field(Family::constant, kappa, 0.0);
      for (int i = 0; i < 30; ++i) {
        const double rbar = 0.1 + 2.9 * i / 29.0;
        for (const auto& a : angles) {
          const double ref = c_curvature_sphere(kappa, rbar, a[0], a[1]);
          const double got = c_curvature(f, {rbar / std::sqrt(kappa), a[0], a[1]}).value;
          // relative, floored at 1e-3 for values near zero
          worst = std::max(worst, std::abs(got - ref) / std::max(std::abs(ref), 1e-3));
        }
      }
    }
    o.require(worst <= kSphereRelTol, "max rel err " + num(worst));
    o.detail = o.detail.empty() ? "max rel err " + num(worst) : o.detail;
    return o;
  });

  criterion(2, "oracle equivalence", 60.0, [] {
    Outcome o;
    const CurvatureField fields[2] = {field_with_epsilon(Family::cosine_bump, 1e-3),
                                      field_with_epsilon(Family::product_wave, 1e-3, wave_params())};
    testgen::Rng rng(2002);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
      const CurvatureField& f = fields[n % 2];
      const ProbeConfig p = rng.probe(0.2, 2.8);
      const double v = c_curvature(f, p).value;
      const double fd = c_curvature_fd_oracle(f, p);
      worst = std::max(worst, std::abs(v - fd) / std::max(std::abs(v), 1e-3));
    }
    o.require(worst <= kOracleRelTol, "max rel gap " + num(worst));
    o.detail = o.detail.empty() ? "max rel gap " + num(worst) + ", eps " + num(c2_norm(fields[0])) +
                                      " / " + num(c2_norm(fields[1]))
                                : o.detail;
    return o;
  });

  criterion(3, "published-constant reproduction", 30.0, [] {
    Outcome o;
    const ConstantsTable& t = default_constants();
    const ThresholdReport r = smallness_thresholds(t);
    const ChosenValues& c = r.chosen;
    o.require(std::abs(kPi * t.b(1, 1, 1) - 39.05) <= 0.01, "pi B111 = " + num(kPi * t.b(1, 1, 1)));
    o.require(within_rel(c.beta, 4.5e-10, 0.05), "beta " + num(c.beta));
    o.require(within_rel(c.gamma, 1.1e-7, 0.05), "gamma " + num(c.gamma));
    o.require(within_rel(c.C, 7.4e7, 0.05), "C " + num(c.C));
    o.require(within_rel(c.eta1, 2.96e-15, 0.01), "eta1 " + num(c.eta1));
    o.require(within_rel(c.delta1, 1.48e-15, 0.01), "delta1 " + num(c.delta1));
    const bool c2_ok = t.C[2] <= 1.4e18;
    o.require(c2_ok, "C2 " + num(t.C[2]) + " > 1.4e18");
    o.require(within_rel(r.eps_C2, 1.214e-3, 0.05), "eps*C2 " + num(r.eps_C2) + " vs 1.214e-3");
    o.require(c2_ok && within_rel(c.eta2, 8.6e-22, 0.10), "eta2 " + num(c.eta2) + " vs 8.6e-22");
    o.require(within_rel(c.eta3, 1.8e-69, 0.10), "eta3 " + num(c.eta3));
    o.require(c.sigma1 == 1 / (4 * kPi * kPi), "sigma1 " + num(c.sigma1));
    o.require(c.sigma2 == 1.0 / 396.0, "sigma2 " + num(c.sigma2));
    o.require(c.eta == c.eta3 && c.eta == std::min({c.eta1, c.eta2, c.eta3}), "eta is not eta3");
    o.require(c.sigma == c.sigma3 && c.sigma == std::min({c.sigma1, c.sigma2, c.sigma3}),
              "sigma is not sigma3");
    return o;
  });

  criterion(4, "pinching constant", 0.0, [] {
    Outcome o;
    const double p = default_constants().pinch();
    o.require(p >= 1438.0 && p <= 1441.0, "pinch " + num(p));
    const bool paper = p >= 1439.0 && p <= 1440.0;
    o.detail = "computed " + std::to_string(p) + (paper ? ", inside" : ", outside") +
               " the published [1439, 1440]" + (o.pass ? "" : "; " + o.detail);
    return o;
  });

  criterion(5, "NoConj boundary curvature", 20.0, [] {
    Outcome o;
    const ThresholdReport r = smallness_thresholds(default_constants());
    const double k1 = noconj_boundary_curvature(make_field(Family::constant, 1.0, 0.0)).k;
    o.require(std::abs(k1 - 1 / (kPi * kPi)) <= kBoundaryTol,
              "k(K=1) = " + num(k1) + " vs 1/pi^2 = " + num(1 / (kPi * kPi)));
    for (const CurvatureField& f :
         {field_with_epsilon(Family::cosine_bump, 1e-4),
          field_with_epsilon(Family::product_wave, 1e-4, wave_params()),
          field_with_epsilon(Family::cosine_bump, 1e-5)}) {
      const double eps = c2_norm(f);
      const double k = noconj_boundary_curvature(f).k;
      o.require(eps <= 1e-4 * (1 + 1e-2), "eps " + num(eps) + " above 1e-4");
      o.require(k >= r.chosen.gamma && k <= r.chosen.C, "k " + num(k) + " outside [gamma, C]");
    }
    return o;
  });

  criterion(6, "sphere APCC scan", 60.0, [] {
    Outcome o;
    const double sigma = smallness_thresholds(default_constants()).chosen.sigma3;
    const ScanReport s = scan_apcc(make_field(Family::constant, 1.0, 0.0), {16, 16, 16}, sigma, 1e-3);
    o.require(s.violations.empty(), std::to_string(s.violations.size()) + " violations");
    o.require(s.failures.empty(), std::to_string(s.failures.size()) + " failures");
    o.require(s.rank_one_count > 0 && s.rank_one_max <= kRankOneTol,
              "rank-1 max |C| " + num(s.rank_one_max));
    if (o.pass)
      o.detail = std::to_string(s.samples.size()) + " probes, min ratio " + num(s.min_ratio) +
                 ", rank-1 max |C| " + num(s.rank_one_max);
    return o;
  });

  const std::vector<double> r0_grid{0.5, 1.5, 2.5}, phi_grid{0.0, kPi / 3, kPi / 2};

  criterion(7, "perturbation lemma suite", 0.0, [&] {
    Outcome o;
    for (const CurvatureField& f :
         {make_field(Family::constant, 1.0, 0.0), field_with_epsilon(Family::cosine_bump, 1e-4)}) {
      const BoundCheckReport r = verify_lemma_bounds(f, r0_grid, phi_grid);
      std::size_t families = 0, polar = 0;
      for (const BoundCheck& c : r.checks) {
        if (c.id.starts_with("B.")) ++families;
        if (c.id.starts_with("D12")) ++polar;
        o.require(c.pass, c.id + " at eps " + num(r.epsilon));
      }
      o.require(families == 18 && polar == 4, "incomplete family list");
    }
    return o;
  });

  criterion(8, "Maclaurin residual", 0.0, [] {
    Outcome o;
    testgen::Rng rng(808);
    std::vector<ProbeConfig> probes;
    for (int n = 0; n < 20; ++n) probes.push_back(rng.probe(0.1, 2.8));
    const BoundCheckReport r = verify_corollary(field_with_epsilon(Family::cosine_bump, 1e-4), probes);
    o.require(r.all_pass(), "residual above bound");
    const BoundCheckReport z = verify_corollary(make_field(Family::constant, 1.0, 0.0), probes);
    o.require(z.checks.front().lhs <= kResidualZeroTol,
              "eps = 0 residual " + num(z.checks.front().lhs));
    return o;
  });

  criterion(9, "property suites", 0.0, [&] {
    Outcome o;
    testgen::Rng rng(909);
    // solution map contraction
    for (int n = 0; n < 100; ++n) {
      const double omega = rng.uniform(1e-3, 2 * kPi);
      PiecewisePoly f;
      const int pieces = 1 + rng.index(4);
      f.breaks.push_back(0.0);
      for (int i = 1; i < pieces; ++i) f.breaks.push_back(rng.uniform(0.05, 0.95));
      std::sort(f.breaks.begin(), f.breaks.end());
      for (int i = 0; i < pieces; ++i)
        f.coeffs.push_back({rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-3, 3),
                            rng.uniform(-3, 3)});
      double sup_f = 0.0, sup_u = 0.0;
      for (int i = 0; i <= 400; ++i) sup_f = std::max(sup_f, std::abs(f(i / 400.0)));
      for (int i = 0; i <= 40; ++i)
        sup_u = std::max(sup_u, std::abs(ode::solution_map({omega, f}, i / 40.0, 1e-11)));
      if (sup_u > 0.5 * sup_f + kContractionSlack) {
        o.require(false, "contraction at omega " + num(omega));
        break;
      }
    }
    // trigonometric inequalities
    std::vector<double> r(10'000), th(r.size()), ph(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = rng.uniform(0.0, kPi);
      th[i] = rng.angle();
      ph[i] = rng.angle();
    }
    const kernels::TrigMargins m = kernels::active().trig_margins(r.data(), th.data(), ph.data(), r.size());
    o.require(m.area_weight >= -kTrigSlack && m.cos_split >= -kTrigSlack && m.cross >= -kTrigSlack,
              "trigonometric inequality");
    // Sturm pinching on the acceptance fields
    for (const CurvatureField& f :
         {make_field(Family::constant, 1.0, 0.0), field_with_epsilon(Family::cosine_bump, 1e-4),
          field_with_epsilon(Family::cosine_bump, 1e-3),
          field_with_epsilon(Family::product_wave, 1e-3, wave_params())})
      o.require(sturm_and_pinch_suite(f, r0_grid).all_pass(), "Sturm on " + f.describe());
    o.require(hfunction_checks().all_pass(), "h-function checks");
    const ChosenValues& c = smallness_thresholds(default_constants()).chosen;
    o.require(mu1_minorant_check(c.delta1, c.delta2).all_pass(), "mu1 minorants");
    // near-zero limit
    const std::vector<double> rs = default_r_sequence();
    for (double kappa : {1.0, 1.1})
      for (const auto& a : {std::array<double, 2>{kPi / 2, 0.0}, std::array<double, 2>{1.2, 1.2},
                            std::array<double, 2>{0.4, 2.0}}) {
        const NearZeroLimit z = near_zero_limit(make_field(Family::constant, kappa, 0.0), a[0], a[1], rs);
        o.require(std::abs(z.value - z.expected) <= kNearZeroTol, "near-zero limit " + num(z.value));
      }
    return o;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
