#include "ccurv/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "ccurv/error.hpp"
#include "ccurv/kernels.hpp"

namespace ccurv {

namespace {

using ld = long double;
constexpr ld kPi = std::numbers::pi_v<long double>;
constexpr ld kSqrt2 = std::numbers::sqrt2_v<long double>;

struct SupSpec {
  int index;
  kernels::Integrand f;
  double hi;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

constexpr SupSpec kSups[] = {
    {6, kernels::Integrand::c6, kTwoPi},    {7, kernels::Integrand::c7, kTwoPi},
    {8, kernels::Integrand::c8, kTwoPi},    {9, kernels::Integrand::c9, kTwoPi},
    {10, kernels::Integrand::c10, kTwoPi},  {11, kernels::Integrand::c11, kHalfPi},
    {12, kernels::Integrand::c12, kHalfPi}, {13, kernels::Integrand::c13, kHalfPi},
    {14, kernels::Integrand::c14, kHalfPi}, {15, kernels::Integrand::c15, kHalfPi},
    {16, kernels::Integrand::c16, kHalfPi}, {17, kernels::Integrand::c17, kHalfPi},
};

// Golden-section maximization of |f| on [a, b]; returns the best point seen.
std::pair<double, double> golden_max(kernels::Integrand f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto g = [f](double t) { return std::abs(kernels::evaluate(f, t)); };
  double best_t = a, best_v = g(a);
  auto see = [&](double t, double v) {
    if (v > best_v) best_t = t, best_v = v;
  };
  see(b, g(b));
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  see(x1, f1);
  see(x2, f2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = g(x2);
      see(x2, f2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = g(x1);
      see(x1, f1);
    }
  }
  return {best_t, best_v};
}

// Largest s in [lo, hi] with margin(s) >= 0, for margin decreasing in s.
double solve_max(const std::string& id, const std::function<ld(ld)>& margin, double lo, double hi) {
  // monotonicity check on a log-spaced sample
  constexpr int kSamples = 64;
  ld prev = margin(lo);
  for (int i = 1; i <= kSamples; ++i) {
    const double s = lo * std::pow(hi / lo, static_cast<double>(i) / kSamples);
    const ld m = margin(s);
    if (m > prev + 1e-12L * std::max<ld>(1.0L, std::abs(prev)))
      throw NumericalError("condition " + id + " is not monotone on the search range");
    prev = m;
  }
  if (margin(lo) < 0) throw NumericalError("condition " + id + " has no positive threshold");
  if (margin(hi) >= 0) return hi;
  double a = lo, b = hi;
  while ((b - a) > 1e-12 * b) {
    // geometric midpoint while the bracket spans orders of magnitude
    const double mid = b / a > 4.0 ? std::sqrt(a * b) : 0.5 * (a + b);
    if (margin(mid) >= 0)
      a = mid;
    else
      b = mid;
  }
  return a;
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form:
      return "closed-form";
    case Provenance::supremum_search:
      return "supremum-search";
    case Provenance::composite:
      return "composite";
  }
  return "?";
}

double ConstantsTable::pinch() const {
  return b(1, 2, 0) + 1.5 * b(1, 2, 1) + 2.0 * b(1, 1, 0) * b(1, 1, 1) +
         36.0 / (5.0 * std::numbers::pi * std::numbers::pi);
}

std::vector<ConstantEntry> ConstantsTable::entries() const {
  std::vector<ConstantEntry> out;
  for (int j = 1; j <= 3; ++j)
    for (int k = 0; k <= 2; ++k)
      for (int a = 0; a <= 1; ++a)
        out.push_back({"B." + std::to_string(j) + "." + std::to_string(k) + "." + std::to_string(a),
                       b(j, k, a), Provenance::closed_form, 0.0, 0.0});
  for (int i = 1; i <= 17; ++i) {
    ConstantEntry e{"c." + std::to_string(i), c[static_cast<std::size_t>(i)],
                    Provenance::closed_form, 0.0, 0.0};
    if (i >= 6) {
      e.provenance = Provenance::supremum_search;
      e.tau = c_tau[static_cast<std::size_t>(i)];
      e.uncertainty = 0.5 * (i <= 10 ? grid_spacing_2pi : grid_spacing_half);
    }
    out.push_back(e);
  }
  for (int i = 1; i <= 4; ++i)
    out.push_back({"C." + std::to_string(i), C[static_cast<std::size_t>(i)], Provenance::composite,
                   0.0, 0.0});
  return out;
}

ConstantsTable b_constants() {
  ConstantsTable t;
  const ld pi = kPi, pi2 = pi * pi;
  const ld c1 = pi + 1 / pi;
  const ld c2 = 4 * (3 / (4 * pi) + 1 / pi2 + 1);
  const ld c3 = 1 / (2 * pi) + 2 * (1 + 1 / pi2) * (2 + pi2);
  const ld c4 = 11.0L / 2 + 10 * pi + 8 / pi + 2 * pi2 * pi;
  const ld c5 = 1 + 1 / pi2 + 2 * c1 * c1;
  t.c[1] = static_cast<double>(c1);
  t.c[2] = static_cast<double>(c2);
  t.c[3] = static_cast<double>(c3);
  t.c[4] = static_cast<double>(c4);
  t.c[5] = static_cast<double>(c5);

  for (int a = 0; a <= 1; ++a) {
    const ld b10 = a == 0 ? 2 : 1;
    const ld b20 = a == 0 ? 1 : 0.5L;
    const ld b21 = 1 + pi2 + 2 * b20 * (1 + pi2) + b10 * (2 + pi * kSqrt2);
    const ld b11 = pi + (1 + b21) / pi;
    const ld b22 = 6 + pi2 * (4 + c5) + (4 * kSqrt2 + pi * c4) * pi * b10 +
                   2 * kSqrt2 * pi2 * b11 + 2 * (1 + pi2) * (b20 + 2 * b21);
    const ld b12 = c5 + b22 / pi2;
    const ld b30 = b10 / 4 + (pi / 2) * (1 + 1 / pi2);
    const ld b31 = b10 * (2 + pi + 1 / pi) / 2 + b20 * (1 + 1 / pi2) + b21 / (2 * pi2) +
                   ((3 * pi + 1) / 2) * (1 + 1 / pi2);
    const ld b32 = 3 * c1 + (5 + 4 * c1 + c4) * b10 / 2 + (kSqrt2 + 2) * b11 + b12 / 2 +
                   (1 + 1 / pi2) * (b20 + 2 * b21);
    auto set = [&](int j, int k, ld v) { t.B[ConstantsTable::b_index(j, k, a)] = static_cast<double>(v); };
    set(1, 0, b10);
    set(1, 1, b11);
    set(1, 2, b12);
    set(2, 0, b20);
    set(2, 1, b21);
    set(2, 2, b22);
    set(3, 0, b30);
    set(3, 1, b31);
    set(3, 2, b32);
  }
  return t;
}

void sup_constants(ConstantsTable& t, const SupOptions& opts) {
  if (opts.n_grid < 100'000) throw ConfigError("sup_constants: n_grid must be at least 1e5");
  if (!(opts.refine_tol > 0)) throw ConfigError("sup_constants: refine_tol must be positive");
  t.grid_spacing_2pi = kTwoPi / static_cast<double>(opts.n_grid - 1);
  t.grid_spacing_half = kHalfPi / static_cast<double>(opts.n_grid - 1);
  for (const SupSpec& s : kSups) {
    const kernels::SupResult grid = kernels::sup_abs(s.f, 0.0, s.hi, opts.n_grid);
    const double step = s.hi / static_cast<double>(opts.n_grid - 1);
    const double a = std::max(0.0, grid.tau - step);
    const double b = std::min(s.hi, grid.tau + step);
    auto [tau, value] = golden_max(s.f, a, b, opts.refine_tol);
    if (grid.value > value) tau = grid.tau, value = grid.value;
    t.c[static_cast<std::size_t>(s.index)] = value;
    t.c_tau[static_cast<std::size_t>(s.index)] = tau;
  }
}

void composite_constants(ConstantsTable& t) {
  const ld pi = kPi;
  auto cc = [&](int i) { return static_cast<ld>(t.c[static_cast<std::size_t>(i)]); };
  ld max_b13 = 0, max_b2 = 0;
  for (int k = 0; k <= 2; ++k)
    for (int a = 0; a <= 1; ++a) {
      max_b13 = std::max<ld>({max_b13, t.b(1, k, a), t.b(3, k, a)});
      max_b2 = std::max<ld>(max_b2, t.b(2, k, a));
    }
  const ld others = std::max<ld>({8 * cc(6), 8 * cc(7), cc(8) * 19 / 18, cc(9) * 10 / 9, cc(10)});
  const ld printed = std::max(max_b13, others);
  const ld c1 = std::max(printed, max_b2);
  t.C1_printed = static_cast<double>(printed);
  const ld c1cube = c1 * c1 * c1;
  const ld mix = cc(15) * cc(6) + cc(16) * cc(7);
  const ld c67 = (cc(6) + cc(7)) * cc(15);
  t.C[1] = static_cast<double>(c1);
  t.C[2] = static_cast<double>(338 * c1cube * std::pow(pi, 11) / 8 + 2.06L * (8 * mix + c67));
  t.C[3] = static_cast<double>(268 * c1cube * std::pow(pi, 11) / 8 + 4.11L * (2 * mix + c67));
  t.C[4] = static_cast<double>(338 * std::pow(pi, 10) * c1cube + 20 * pi * (cc(6) + cc(7)));
}

ConstantsTable compute_constants(const SupOptions& opts) {
  ConstantsTable t = b_constants();
  sup_constants(t, opts);
  composite_constants(t);
  return t;
}

const ConstantsTable& default_constants() {
  static const ConstantsTable t = compute_constants();
  return t;
}

double round_down_sig(double x, int digits) {
  if (x == 0.0) return 0.0;
  const double e = std::floor(std::log10(std::abs(x))) - (digits - 1);
  const double scale = std::pow(10.0, e);
  // guard against representation noise pushing an exact value one unit down
  return std::floor(x / scale * (1 + 1e-12)) * scale;
}

double round_up_sig(double x, int digits) {
  if (x == 0.0) return 0.0;
  const double e = std::floor(std::log10(std::abs(x))) - (digits - 1);
  const double scale = std::pow(10.0, e);
  return std::ceil(x / scale * (1 - 1e-12)) * scale;
}

ThresholdReport smallness_thresholds(const ConstantsTable& t) {
  const ld pi = kPi, pi2 = pi * pi;
  const ld B111 = t.b(1, 1, 1), B120 = t.b(1, 2, 0), B121 = t.b(1, 2, 1);
  const ld B200 = t.b(2, 0, 0), B210 = t.b(2, 1, 0), B211 = t.b(2, 1, 1), B221 = t.b(2, 2, 1);
  const ld pinch = t.pinch();
  auto cc = [&](int i) { return static_cast<ld>(t.c[static_cast<std::size_t>(i)]); };
  const ld C2 = t.C[2], C3 = t.C[3], C4 = t.C[4];
  constexpr ld k15408 = 15408;

  ThresholdReport rep;
  // Near conjugacy: every condition is solved along eps = s, delta = s / 2,
  // i.e. eps/2 + delta = s, the line on which the published (eta1, delta1) sit.
  const std::string ray = "eps/2+delta (eps = 2 delta)";
  auto R1 = [&](ld e, ld s) {
    const ld q = s / (1 - s);
    return e * (B221 + B200 / 8) + s * s / 16 + 2 * pi * B111 * (s * (1 + e / 2) + e * B210) +
           q * (B120 + 2 / (pi2 * (1 - s) * (1 - s)) * (1 + e * pi2 * B200 + q));
  };
  struct Cond {
    std::string id;
    std::function<ld(ld)> margin;
  };
  const std::vector<Cond> conj = {
      {"epsdel1",
       [&](ld s) {
         const ld e = s, cphi = 1.0L / 7704;
         return (cphi / pi) * (1 - (e / 2) / (1 - s) - (pi2 / 2) * s * s) - e * pi * B211;
       }},
      {"epsdel2",
       [&](ld s) {
         const ld e = s;
         return 0.5L - (2 * e / (1 - s) + 2 * pi2 * s * s + (e * pi2 / 2) * (1 + e / 2) +
                        3 * s / (1 - s));
       }},
      {"epsdel3", [&](ld s) { return 1 / (24 * pi2) - R1(s, s); }},
      {"epsdel3bis",
       [&](ld s) { return 1 / (16 * std::sqrt(3.0L) * (pi2 + 5)) - std::sqrt(s / (1 - s)); }},
      {"epsdel4",
       [&](ld s) {
         const ld e = s;
         return 1 / (24 * pi2) - (R1(e, s) + 8 * B111 * (s * (1 + e / 2) * pi + e * pi * B210));
       }},
      {"epsdel4bis",
       [&](ld s) {
         return (1 / (pi2 * B211)) * (1 / (pi * std::sqrt(192.0L)) - 1.0L / 3852) - s;
       }},
      {"epsdel5",
       [&](ld s) {
         const ld e = s;
         return 1 / (k15408 * pi) -
                (e * pi * B211 + (e / 2) / (pi * (1 - s)) + s * s * pi / 2);
       }},
      {"epsdel6",
       [&](ld s) { return 1 / (2 * pi2 * k15408 * k15408) - s / (1 - s) * pinch; }},
      {"epsdel7",
       [&](ld s) { return 1 / (100 * pi2 * k15408 * k15408) - s / (1 - s) * pinch; }},
      {"epsdel8",
       [&](ld s) {
         const ld e = s, u = 1 - s;
         return std::sqrt(3.0L) / (8 * pi2) -
                (s / (u * u * u * pi2) * (6.0L / 5 + (1 + e / 2) * (1 + e / 2) * pi2) +
                 e * (B221 + 16.0L / 5 * B211) + 7 * pi * B111 * (s * (1 + e / 2) + e * B210) +
                 s / u * (B120 + 36 / (5 * pi2)));
       }},
  };
  double s_min = 1.0;
  for (const Cond& c : conj) {
    const double v = solve_max(c.id, c.margin, 1e-30, 0.25);
    rep.conditions.push_back({c.id, c.id == "epsdel4bis" ? "eps" : ray, v});
    if (v < s_min) s_min = v, rep.binding_near_conjugacy = c.id;
  }
  const double s7 = std::find_if(rep.conditions.begin(), rep.conditions.end(), [](auto& c) {
                      return c.id == "epsdel7";
                    })->value;
  rep.raw.eta1 = s7;
  rep.raw.delta1 = s7 / 2;
  rep.raw.sigma1 = static_cast<double>(1 / (4 * pi2));
  rep.chosen.eta1 = round_down_sig(s7, 3);
  rep.chosen.delta1 = rep.chosen.eta1 / 2;
  rep.chosen.sigma1 = rep.raw.sigma1;

  // Near the origin: delta2 = 0.01 is the published choice.
  const ld delta2 = 0.01L;
  rep.raw.delta2 = rep.chosen.delta2 = static_cast<double>(delta2);
  auto ineq11 = [&](ld e, ld d) {
    return 1.0L / 180 - (e * (C2 + 19 * cc(17) * d) + 1.15L * d * (cc(11) + cc(12) + cc(14) / 2));
  };
  auto ineq12 = [&](ld e, ld d) {
    return 1.0L / 180 - (e * (C3 + 13 * cc(17) * d) + 1.15L * d * (cc(13) + cc(14) / 2));
  };
  const double e11 = solve_max("epsdel11", [&](ld e) { return ineq11(e, delta2); }, 1e-40, 1.0);
  const double e12 = solve_max("epsdel12", [&](ld e) { return ineq12(e, delta2); }, 1e-40, 1.0);
  rep.conditions.push_back({"epsdel11", "eps (delta2 = 0.01)", e11});
  rep.conditions.push_back({"epsdel12", "eps (delta2 = 0.01)", e12});
  rep.conditions.push_back(
      {"epsdel11.delta", "delta (eps = 0)",
       solve_max("epsdel11.delta", [&](ld d) { return ineq11(0, d); }, 1e-12, 1.0)});
  rep.conditions.push_back(
      {"epsdel12.delta", "delta (eps = 0)",
       solve_max("epsdel12.delta", [&](ld d) { return ineq12(0, d); }, 1e-12, 1.0)});
  rep.eps_C2 = static_cast<double>(e11 * C2);
  rep.raw.eta2 = std::min(e11, e12);
  rep.chosen.eta2 = round_down_sig(rep.raw.eta2, 2);
  rep.raw.sigma2 = rep.chosen.sigma2 = 1.0 / 396.0;
  {
    const ld e = rep.chosen.eta2;
    rep.conditions.push_back(
        {"epsdel9", "delta (eps = eta2)",
         solve_max("epsdel9", [&](ld d) { return pi / 2 - (1 + e / 2) * d; }, 1e-12, 10.0)});
    rep.conditions.push_back(
        {"epsdel10", "delta (eps = eta2)",
         solve_max("epsdel10", [&](ld d) { return 2 / std::sqrt(5.0L) - (1 + e / 2) * d; }, 1e-12,
                   10.0)});
  }

  // Elsewhere, with delta1 and delta2 as chosen.
  const ld d1 = rep.chosen.delta1;
  const double else1 = static_cast<double>(2.19e-3L * std::pow(std::sin(1.0L), 3) / C4 * delta2 *
                                           delta2);
  const double else2 = solve_max(
      "else2",
      [&](ld e) {
        return 6.0L / 5 - (1 + e / 2) * (1 + 2 * e / (d1 * (1 - d1 * d1 * pi2 / 96)));
      },
      1e-40, 1.0);
  const double else3 =
      static_cast<double>(1.3e-4L / (pi2 * pi * C4) * std::pow(std::sin(pi * d1 / 4), 3));
  rep.conditions.push_back({"else1", "eps (delta2 = 0.01)", else1});
  rep.conditions.push_back({"else2", "eps (delta1)", else2});
  rep.conditions.push_back({"else3", "eps (delta1)", else3});
  rep.raw.eta3 = std::min({else1, else2, else3});
  rep.chosen.eta3 = round_down_sig(rep.raw.eta3, 2);
  rep.raw.sigma3 = static_cast<double>(1 / (4 * pi2) * std::pow(5.0L / 6, 3) * 2.19e-3L * delta2 *
                                       delta2);
  rep.chosen.sigma3 = round_down_sig(rep.raw.sigma3, 3);

  // NoConj boundary: beta is the smaller positive root of the two quadratics.
  auto pos_root = [](ld a, ld b, ld c) {
    // a x^2 + b x + c = 0 with a > 0, c < 0; stable form of the positive root
    return static_cast<double>(2 * (-c) / (b + std::sqrt(b * b - 4 * a * c)));
  };
  rep.beta_roots[0] = pos_root(pi2 / 8, 0.5L + B221 * pi2, -0.5L);
  rep.beta_roots[1] = pos_root(pi2 * B121 * B211 * B211, 4 * pi * B111 * B121 * B211,
                               -1 / (16 * pi2 * pi2));
  rep.raw.beta = std::min(rep.beta_roots[0], rep.beta_roots[1]);
  rep.raw.gamma = static_cast<double>(1 / (32 * pi2 * pi2 * kSqrt2 * B111 * B111 * B111));
  rep.raw.C = static_cast<double>(8 * pi2 * pi * 6 * B121 * B111 * B111);
  rep.chosen.beta = round_down_sig(rep.raw.beta, 2);
  rep.chosen.gamma = round_down_sig(rep.raw.gamma, 2);
  rep.chosen.C = round_up_sig(rep.raw.C, 2);

  for (ChosenValues* v : {&rep.raw, &rep.chosen}) {
    v->eta = std::min({v->eta1, v->eta2, v->eta3});
    v->sigma = std::min({v->sigma1, v->sigma2, v->sigma3});
  }
  for (const Threshold& th : rep.conditions)
    if (!(th.value > 0)) throw NumericalError("non-positive threshold for " + th.id);
  return rep;
}

std::vector<PaperCheck> check_against_paper(const ConstantsTable& t, const ThresholdReport& r) {
  std::vector<PaperCheck> out;
  const double pi = std::numbers::pi;
  auto rel = [&](const std::string& id, double computed, double published, double tol) {
    const bool ok = std::abs(computed - published) <= tol * std::abs(published);
    char buf[64];
    std::snprintf(buf, sizeof buf, "within %g%%", tol * 100);
    out.push_back({id, computed, published, buf, ok});
  };
  auto absol = [&](const std::string& id, double computed, double published, double tol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "within +-%g", tol);
    out.push_back({id, computed, published, buf, std::abs(computed - published) <= tol});
  };
  absol("pi*B.1.1.1", pi * t.b(1, 1, 1), 39.05, 0.01);
  out.push_back({"pinch", t.pinch(), 1439.5, "in [1438, 1441]; published [1439, 1440]",
                 t.pinch() >= 1438 && t.pinch() <= 1441});
  rel("beta", r.chosen.beta, 4.5e-10, 0.05);
  rel("gamma", r.chosen.gamma, 1.1e-7, 0.05);
  rel("C", r.chosen.C, 7.4e7, 0.05);
  rel("eta1", r.chosen.eta1, 2.96e-15, 0.01);
  rel("delta1", r.chosen.delta1, 1.48e-15, 0.01);
  out.push_back({"C.2", t.C[2], 1.4e18, "<= 1.4e18", t.C[2] <= 1.4e18});
  out.push_back({"C.3<C.2", t.C[3], t.C[2], "C3 < C2", t.C[3] < t.C[2]});
  out.push_back({"C.4", t.C[4], 3.6e18, "<= 3.6e18", t.C[4] <= 3.6e18});
  rel("eps*C2", r.eps_C2, 1.214e-3, 0.05);
  rel("eta2", r.chosen.eta2, 8.6e-22, 0.10);
  absol("delta2", r.chosen.delta2, 0.01, 0.0);
  rel("eta3", r.chosen.eta3, 1.8e-69, 0.10);
  absol("sigma1", r.chosen.sigma1, 1.0 / (4 * pi * pi), 0.0);
  absol("sigma2", r.chosen.sigma2, 1.0 / 396, 0.0);
  rel("sigma3", r.chosen.sigma3, 3.21e-9, 0.01);
  out.push_back({"eta=eta3", r.chosen.eta, r.chosen.eta3, "min(eta1, eta2, eta3) = eta3",
                 r.chosen.eta == r.chosen.eta3});
  out.push_back({"sigma=sigma3", r.chosen.sigma, r.chosen.sigma3,
                 "min(sigma1, sigma2, sigma3) = sigma3", r.chosen.sigma == r.chosen.sigma3});
  return out;
}

}  // namespace ccurv
