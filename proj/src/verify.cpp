#include "ccurv/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

#include "ccurv/error.hpp"
#include "ccurv/kernels.hpp"

namespace ccurv {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_epsilon(const CurvatureField& field, std::optional<double> epsilon) {
  const double eps = epsilon ? *epsilon : c2_norm(field);
  if (eps > 1.0 / (kPi * kPi))
    throw ConfigError("field violates the lemma hypothesis |K - 1|_C2 <= 1/pi^2");
  return eps;
}

// Runs task(i) for i in [0, n) on the worker pool; the caller owns ordering.
template <class Task>
void parallel_for(std::size_t n, Task&& task) {
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  for (auto& th : pool) th.join();
}

constexpr std::size_t kValueSlot[3] = {kF0, kFp0, kFpp0};

double sample_time(int i) { return static_cast<double>(i) / (kSupSamples - 1); }

}  // namespace

double bound_slack(double rhs) { return 1e-9 * std::max(1.0, std::abs(rhs)); }

bool BoundCheckReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

const BoundCheck* BoundCheckReport::worst() const {
  const BoundCheck* w = nullptr;
  for (const BoundCheck& c : checks)
    if (!w || c.margin < w->margin) w = &c;
  return w;
}

void record(BoundCheckReport& report, const std::string& id, double lhs, double rhs,
            const ProbeConfig& at, double slack) {
  const double tol = slack < 0.0 ? bound_slack(rhs) : slack;
  const bool ok = lhs <= rhs + tol;
  const double margin = rhs - lhs;
  for (BoundCheck& c : report.checks) {
    if (c.id != id) continue;
    c.pass = c.pass && ok;
    if (margin < c.margin) {
      c.lhs = lhs;
      c.rhs = rhs;
      c.margin = margin;
      c.worst = at;
    }
    return;
  }
  report.checks.push_back({id, lhs, rhs, margin, ok, at});
}

unsigned worker_count() {
  if (const char* env = std::getenv("CCURV_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

BoundCheckReport verify_lemma_bounds(const CurvatureField& field, std::span<const double> r0_grid,
                                     std::span<const double> phi_grid,
                                     std::optional<double> epsilon) {
  BoundCheckReport rep;
  rep.epsilon = checked_epsilon(field, epsilon);
  const double eps = rep.epsilon;
  const ConstantsTable& tab = default_constants();
  const double kappa = field.kappa0();
  const CurvatureField bar = make_field(Family::constant, kappa, 0.0);

  // per r0: the three directions needed for polarization
  struct Pair {
    JacobiBundle f, fbar;
  };
  auto solve_pair = [&](double r0, double phi) {
    const ProbeConfig p{r0, 0.0, phi};
    return Pair{solve_bundle(field, p), solve_bundle(bar, p)};
  };

  for (double r0 : r0_grid) {
    const double omega = std::sqrt(kappa) * r0;
    // S_{omega}(t^{a+1}) on the sample grid
    std::vector<double> s_lin(kSupSamples), s_sq(kSupSamples);
    for (int i = 0; i < kSupSamples; ++i) {
      const double t = sample_time(i);
      s_lin[i] = ode::solution_map({omega, [](double u) { return u; }}, t);
      s_sq[i] = ode::solution_map({omega, [](double u) { return u * u; }}, t);
    }
    for (double phi : phi_grid) {
      const ProbeConfig at{r0, 0.0, phi};
      const Pair b = solve_pair(r0, phi);
      const MaclaurinData md = maclaurin_data(field, phi);
      const double psi[3] = {md.psi0, md.psi1, md.psi2};
      for (int k = 0; k <= 2; ++k) {
        for (int a = 0; a <= 1; ++a) {
          const std::size_t slot = kValueSlot[k] + 2 * static_cast<std::size_t>(a);
          const std::vector<double>& s = a == 0 ? s_lin : s_sq;
          const double scale3 = std::pow(r0, 3 - k) * psi[k];
          double sup1 = 0, sup2 = 0, sup3 = 0;
          for (int i = 0; i < kSupSamples; ++i) {
            const double t = sample_time(i);
            const double v = b.f.traj.interpolate(t, slot);
            const double diff = v - b.fbar.traj.interpolate(t, slot);
            sup1 = std::max(sup1, std::abs(v));
            sup2 = std::max(sup2, std::abs(diff));
            sup3 = std::max(sup3, std::abs(diff + scale3 * s[static_cast<std::size_t>(i)]));
          }
          const std::string tail = "." + std::to_string(k) + "." + std::to_string(a);
          record(rep, "B.1" + tail, sup1, tab.b(1, k, a), at);
          record(rep, "B.2" + tail, sup2, tab.b(2, k, a) * eps * std::pow(r0, 2 - k), at);
          record(rep, "B.3" + tail, sup3, tab.b(3, k, a) * eps * std::pow(r0, 4 - k), at);
        }
      }
    }
    // D12 f_a = D_nn f_a (diagonal) - (D11 f_a + D22 f_a) / 2
    const Pair d1 = solve_pair(r0, kPi / 2), d2 = solve_pair(r0, 0.0), dg = solve_pair(r0, kPi / 4);
    for (int a = 0; a <= 1; ++a) {
      const std::size_t slot = kFpp0 + 2 * static_cast<std::size_t>(a);
      double sup = 0, sup_diff = 0;
      for (int i = 0; i < kSupSamples; ++i) {
        const double t = sample_time(i);
        auto mixed = [&](const JacobiBundle& x1, const JacobiBundle& x2, const JacobiBundle& xg) {
          return xg.traj.interpolate(t, slot) -
                 0.5 * (x1.traj.interpolate(t, slot) + x2.traj.interpolate(t, slot));
        };
        const double m = mixed(d1.f, d2.f, dg.f);
        const double mb = mixed(d1.fbar, d2.fbar, dg.fbar);
        sup = std::max(sup, std::abs(m));
        sup_diff = std::max(sup_diff, std::abs(m - mb));
      }
      const ProbeConfig at{r0, 0.0, kPi / 4};
      record(rep, "D12." + std::to_string(a), sup, 2.0 * tab.b(1, 2, a), at);
      record(rep, "D12bar." + std::to_string(a), sup_diff, 2.0 * tab.b(2, 2, a) * eps, at);
    }
  }
  return rep;
}

BoundCheckReport verify_corollary(const CurvatureField& field, std::span<const ProbeConfig> probes,
                                  std::optional<double> epsilon) {
  BoundCheckReport rep;
  rep.epsilon = checked_epsilon(field, epsilon);
  for (const ProbeConfig& p : probes) {
    const MaclaurinResidual m = maclaurin_residual(field, p, rep.epsilon);
    record(rep, "corollary", m.residual, m.bound, p);
  }
  return rep;
}

ScanReport scan_apcc(const CurvatureField& field, const ScanGrid& grid, double sigma,
                     double conj_margin, std::optional<double> epsilon,
                     const ode::Tolerance& tol) {
  if (grid.nr < 8 || grid.ntheta < 8 || grid.nphi < 8)
    throw ConfigError("scan grid needs at least 8 nodes per axis");
  if (!(conj_margin >= 1e-6 && conj_margin <= 0.1))
    throw ConfigError("conj margin must lie in [1e-6, 0.1]");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");

  ScanReport rep;
  rep.grid = grid;
  rep.field_id = field.describe();
  rep.sigma_used = sigma;
  rep.conj_margin = conj_margin;
  rep.epsilon_used = epsilon ? *epsilon : c2_norm(field);
  rep.ell0 = conjugate_distance(field);
  rep.exploratory =
      rep.epsilon_used > smallness_thresholds(default_constants()).chosen.eta;

  const double r_max = std::min((1.0 - conj_margin) * rep.ell0, kPi);
  for (int i = 0; i < grid.nr; ++i) rep.r0_nodes.push_back(r_max * (i + 1) / grid.nr);
  for (int i = 0; i < grid.ntheta; ++i) rep.theta_nodes.push_back(2.0 * kPi * i / grid.ntheta);
  for (int i = 0; i < grid.nphi; ++i) rep.phi_nodes.push_back(2.0 * kPi * i / grid.nphi);

  const std::size_t nth = rep.theta_nodes.size();
  const std::size_t tasks = rep.r0_nodes.size() * rep.phi_nodes.size();
  std::vector<std::vector<CCurvSample>> out(tasks);
  std::vector<std::string> errors(tasks);
  parallel_for(tasks, [&](std::size_t task) {
    const double r0 = rep.r0_nodes[task / rep.phi_nodes.size()];
    const double phi = rep.phi_nodes[task % rep.phi_nodes.size()];
    try {
      const BundleState y = solve_bundle(field, {r0, 0.0, phi}, tol).final_state();
      out[task].reserve(nth);
      for (double theta : rep.theta_nodes) out[task].push_back(c_curvature_at(y, {r0, theta, phi}));
    } catch (const Error& e) {
      out[task].clear();
      errors[task] = e.what();
    }
  });

  // ordered gather
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t task = 0; task < tasks; ++task) {
    if (!errors[task].empty()) {
      const double r0 = rep.r0_nodes[task / rep.phi_nodes.size()];
      const double phi = rep.phi_nodes[task % rep.phi_nodes.size()];
      rep.failures.push_back({{r0, 0.0, phi}, errors[task]});
      continue;
    }
    for (const CCurvSample& s : out[task]) {
      if (s.rank_one) {
        ++rep.rank_one_count;
        rep.rank_one_max = std::max(rep.rank_one_max, std::abs(s.value));
      } else if (*s.ratio < rep.min_ratio) {
        rep.min_ratio = *s.ratio;
        rep.argmin = s.probe;
      }
      const double target = sigma * s.a2;
      if (s.value < target - violation_slack(target)) rep.violations.push_back(s.probe);
      rep.samples.push_back(s);
    }
  }
  return rep;
}

BoundaryCurvature noconj_boundary_curvature(const CurvatureField& field) {
  BoundaryCurvature out;
  out.ell0 = conjugate_distance(field);
  if (out.ell0 > kPi * (1.0 + 1e-9))
    throw ConfigError("boundary curvature needs l0 <= pi (min K >= 1)");
  const double r0 = std::min(out.ell0, kPi);
  auto at = [&](double phi) { return solve_bundle(field, {r0, 0.0, phi}).final_state(); };
  const BundleState across = at(kPi / 2), along = at(0.0), diag = at(kPi / 4);
  out.d1 = across[kFp1];
  out.d11 = across[kFpp1];
  out.d2 = along[kFp1];
  out.d22 = along[kFpp1];
  out.d12 = diag[kFpp1] - 0.5 * out.d11 - 0.5 * out.d22;
  const double grad2 = out.d1 * out.d1 + out.d2 * out.d2;
  if (std::sqrt(grad2) < 1e-6) throw NumericalError("boundary curvature: |D f1| below 1e-6");
  out.k = -(out.d11 * out.d2 * out.d2 - 2.0 * out.d12 * out.d1 * out.d2 + out.d22 * out.d1 * out.d1) /
          std::pow(grad2, 1.5);
  return out;
}

BoundCheckReport mu1_minorant_check(double delta1, double delta2, std::size_t n_grid) {
  if (n_grid < 2) throw ConfigError("mu1 check needs at least two grid points");
  BoundCheckReport rep;
  using kernels::Integrand;
  auto min_mu1 = [&](double lo, double hi, ProbeConfig& where) {
    std::vector<double> tau(n_grid), out(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i)
      tau[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_grid - 1);
    std::vector<double> mu(n_grid, std::numeric_limits<double>::infinity());
    for (Integrand f : {Integrand::mu1_first, Integrand::mu1_second, Integrand::mu1_third}) {
      kernels::evaluate(f, tau.data(), out.data(), n_grid);
      for (std::size_t i = 0; i < n_grid; ++i) mu[i] = std::min(mu[i], out[i]);
    }
    const auto it = std::min_element(mu.begin(), mu.end());
    where = {tau[static_cast<std::size_t>(it - mu.begin())], 0.0, 0.0};
    return *it;
  };
  ProbeConfig where;
  const double first = min_mu1(0.49 * delta2, 1.0, where);
  record(rep, "mu1.first-case", 4.38e-3 * delta2 * delta2, first, where);
  const double second = min_mu1(1.0, (1.0 - delta1 / 4.0) * kPi, where);
  record(rep, "mu1.second-case", 2.6e-4, second, where);
  record(rep, "h1(1)/pi^2", 3.9e-3, kernels::evaluate(Integrand::h1, 1.0) / (kPi * kPi));
  record(rep, "3.2/pi^3*h2(1/2)", 2.6e-4,
         3.2 / (kPi * kPi * kPi) * kernels::evaluate(Integrand::h2, 0.5));
  return rep;
}

BoundCheckReport sturm_and_pinch_suite(const CurvatureField& field,
                                       std::span<const double> r0_grid,
                                       std::optional<double> epsilon) {
  BoundCheckReport rep;
  rep.epsilon = checked_epsilon(field, epsilon);
  const double eps = rep.epsilon;
  const double kmin = field.min_K(), kmax = field.max_K();
  auto model = [](double k, double r0, double t) {
    const double w = std::sqrt(k) * r0;
    return std::sin(w * t) / w;
  };
  for (double r0 : r0_grid) {
    const JacobiBundle b = solve_bundle(field, {r0, 0.0, 0.0});
    const ProbeConfig at{r0, 0.0, 0.0};
    for (int i = 1; i < kSupSamples; ++i) {
      const double t = sample_time(i);
      const double f1 = b.traj.interpolate(t, kF1);
      if (!(f1 > 0.0)) break;
      // comparison functions only while their argument stays within [0, pi]
      if (std::sqrt(kmax) * r0 * t <= kPi) record(rep, "sturm.lower", model(kmax, r0, t), f1, at);
      if (std::sqrt(kmin) * r0 * t <= kPi) record(rep, "sturm.upper", f1, model(kmin, r0, t), at);
    }
  }
  const double ell0 = conjugate_distance(field);
  const ProbeConfig at{ell0, 0.0, 0.0};
  record(rep, "ell0.lower", kPi / std::sqrt(1.0 + eps), ell0, at);
  record(rep, "ell0.upper", ell0, kPi, at);
  record(rep, "ell0.sturm-lower", kPi / std::sqrt(kmax), ell0, at);
  record(rep, "ell0.sturm-upper", ell0, kPi / std::sqrt(kmin), at);
  const double rbar = std::sqrt(field.kappa0()) * ell0;
  record(rep, "rbar0.lower", kPi * (1.0 - eps / 2.0), rbar, at);
  record(rep, "rbar0.upper", rbar, kPi * (1.0 + eps / 2.0), at);
  return rep;
}

BoundCheckReport hfunction_checks(std::size_t n_grid) {
  if (n_grid < 3) throw ConfigError("hfunction checks need at least three grid points");
  BoundCheckReport rep;
  using kernels::Integrand;
  auto rel = [](double v) { return 1e-12 * std::abs(v); };
  auto monotone = [&](const char* id, Integrand f, double hi) {
    double prev = kernels::evaluate(f, 0.0);
    for (std::size_t i = 1; i < n_grid; ++i) {
      const double tau = hi * static_cast<double>(i) / static_cast<double>(n_grid - 1);
      const double v = kernels::evaluate(f, tau);
      record(rep, id, prev, v, {tau, 0.0, 0.0}, 1e-12);
      prev = v;
    }
  };
  monotone("h1.increasing", Integrand::h1, kPi);
  monotone("h2.increasing", Integrand::h2, kPi / 2);
  for (std::size_t i = 1; i < n_grid; ++i) {
    const double tau = static_cast<double>(i) / static_cast<double>(n_grid - 1);
    const double t2 = tau * tau, t6 = t2 * t2 * t2;
    const ProbeConfig at{tau, 0.0, 0.0};
    const HMuValues h = h_mu_functions(tau);
    record(rep, "h1.minorant", 2.0 / 315.0 * t6 * (7.0 - t2), h.h1, at, rel(h.h1));
    record(rep, "h2.minorant", 0.8 * t6 * (2.0 / 9.0 - t2 / 21.0), h.h2, at, rel(h.h2));
    record(rep, "mu1.minorant", t2 / 45.0 * (1.0 - 5.0 / 28.0 * t2), h.mu1, at, rel(h.mu1));
  }
  return rep;
}

}  // namespace ccurv
