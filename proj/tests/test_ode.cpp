#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "ccurv/error.hpp"
#include "ccurv/ode.hpp"
#include "gen.hpp"

using namespace ccurv;
using ode::Trajectory;

namespace {

constexpr double kPi = std::numbers::pi;

ode::VectorField oscillator(double omega) {
  return [omega](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -omega * omega * y[0];
  };
}

double cosine_error(double rel) {
  ode::IntegratorOptions o;
  o.tol = {rel, rel * 1e-2};
  const std::vector<double> y0{1.0, 0.0};
  const Trajectory tr = ode::integrate_ivp(oscillator(1.0), y0, 3.0, o);
  return std::abs(tr.final_state()[0] - std::cos(3.0));
}

// Random piecewise polynomial on [0, 1]: up to four pieces of degree <= 3.
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

PiecewisePoly random_forcing(testgen::Rng& rng) {
  PiecewisePoly p;
  const int pieces = 1 + rng.index(4);
  p.breaks.push_back(0.0);
  for (int i = 1; i < pieces; ++i) p.breaks.push_back(rng.uniform(0.05, 0.95));
  std::sort(p.breaks.begin(), p.breaks.end());
  for (int i = 0; i < pieces; ++i)
    p.coeffs.push_back({rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-3, 3),
                        rng.uniform(-3, 3)});
  return p;
}

}  // namespace

TEST_SUITE("ode") {

TEST_CASE("constant solution stays put") {
  const std::vector<double> y0{1.0};
  const Trajectory tr = ode::integrate_ivp(
      [](double, std::span<const double>, std::span<double> dy) { dy[0] = 0.0; }, y0, 1.0);
  CHECK(tr.final_state()[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tr.t_end() == 1.0);
}

TEST_CASE("harmonic oscillator matches cos and sin closed forms") {
  ode::IntegratorOptions o;
  const std::vector<double> y0{1.0, 0.0};
  const Trajectory tr = ode::integrate_ivp(oscillator(1.0), y0, 1.0, o);
  CHECK(std::abs(tr.final_state()[0] - std::cos(1.0)) <= 10 * o.tol.rel);

  const std::vector<double> z0{0.0, 1.0};
  const Trajectory s = ode::integrate_ivp(oscillator(kPi), z0, 1.0, o);
  CHECK(std::abs(s.final_state()[0]) <= 10 * o.tol.rel);
}

TEST_CASE("dense output follows the solution between nodes") {
  const std::vector<double> y0{1.0, 0.0};
  const Trajectory tr = ode::integrate_ivp(oscillator(2.0), y0, 2.0);
  for (double t = 0.0; t <= 2.0; t += 0.0371) {
    CHECK(tr.interpolate(t, 0) == doctest::Approx(std::cos(2 * t)).epsilon(1e-5));
    CHECK(tr.refine(t)[0] == doctest::Approx(std::cos(2 * t)).epsilon(1e-8));
  }
}

TEST_CASE("tighter tolerance reduces the error") {
  double prev = cosine_error(1e-4);
  for (double rel : {1e-6, 1e-8, 1e-10}) {
    const double err = cosine_error(rel);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("fixed-step mode is fifth order") {
  const std::vector<double> y0{1.0, 0.0};
  const double e1 = std::abs(ode::integrate_fixed(oscillator(1.0), y0, 1.0, 20)[0] - std::cos(1.0));
  const double e2 = std::abs(ode::integrate_fixed(oscillator(1.0), y0, 1.0, 40)[0] - std::cos(1.0));
  CHECK(e1 / e2 > 20.0);
  CHECK(e2 < 1e-9);
}

TEST_CASE("invalid tolerance and blow-up are reported") {
  const std::vector<double> y0{1.0};
  ode::IntegratorOptions o;
  o.tol = {-1.0, 1e-12};
  auto zero = [](double, std::span<const double>, std::span<double> dy) { dy[0] = 0.0; };
  CHECK_THROWS_AS(ode::integrate_ivp(zero, y0, 1.0, o), ConfigError);
  auto blow = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; };
  CHECK_THROWS_AS(ode::integrate_ivp(blow, y0, 2.0), NumericalError);
}

TEST_CASE("solution map closed forms") {
  CHECK(ode::solution_map({1.0, [](double) { return 0.0; }}, 1.0) == 0.0);
  CHECK(ode::solution_map({1.0, [](double t) { return t; }}, 1.0) ==
        doctest::Approx(1.0 - std::sin(1.0)).epsilon(1e-12));
  CHECK(ode::solution_map({2.0, [](double t) { return t * t; }}, 1.0) ==
        doctest::Approx((4.0 + 2.0 * std::cos(2.0) - 2.0) / 16.0).epsilon(1e-12));
}

TEST_CASE("solution map agrees with direct integration") {
  testgen::Rng rng(11);
  ode::IntegratorOptions o;
  for (int n = 0; n < 10; ++n) {
    const double omega = rng.uniform(0.1, 2 * kPi);
    const PiecewisePoly f = random_forcing(rng);
    ode::VectorField rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[1];
      dy[1] = f(t) - omega * omega * y[0];
    };
    o.max_step = 0.01;  // steps must resolve the breaks
    const std::vector<double> y0{0.0, 0.0};
    const double direct = ode::integrate_ivp(rhs, y0, 1.0, o).final_state()[0];
    const double mapped = ode::solution_map({omega, f}, 1.0);
    double scale = 0.0;
    for (int i = 0; i <= 200; ++i) scale = std::max(scale, std::abs(f(i / 200.0)));
    CHECK(std::abs(direct - mapped) <= 10 * o.tol.rel * std::max(1.0, scale) + 1e-9);
  }
}

TEST_CASE("solution map contracts sup norms by one half") {
  testgen::Rng rng(2024);
  for (int n = 0; n < 100; ++n) {
    const double omega = rng.uniform(1e-3, 2 * kPi);
    const PiecewisePoly f = random_forcing(rng);
    double sup_f = 0.0, sup_u = 0.0;
    for (int i = 0; i <= 400; ++i) sup_f = std::max(sup_f, std::abs(f(i / 400.0)));
    for (int i = 0; i <= 40; ++i)
      sup_u = std::max(sup_u, std::abs(ode::solution_map({omega, f}, i / 40.0, 1e-11)));
    CAPTURE(omega);
    CHECK(sup_u <= 0.5 * sup_f + 1e-9);
  }
}

TEST_CASE("first zero of sampled functions") {
  {
    const std::vector<double> y0{0.0, kPi};
    const Trajectory tr = ode::integrate_ivp(oscillator(kPi), y0, 1.5);
    const auto z = ode::first_zero(tr, 0);
    REQUIRE(z);
    CHECK(std::abs(*z - 1.0) <= 1e-10);
  }
  {
    const std::vector<double> y0{1.0};
    const Trajectory tr = ode::integrate_ivp(
        [](double, std::span<const double>, std::span<double> dy) { dy[0] = 1.0; }, y0, 1.0);
    CHECK_FALSE(ode::first_zero(tr, 0));
  }
  {
    const std::vector<double> y0{1.0, 0.0};
    const Trajectory tr = ode::integrate_ivp(oscillator(1.0), y0, 3.0);
    const auto z = ode::first_zero(tr, 0);
    REQUIRE(z);
    CHECK(*z == doctest::Approx(kPi / 2).epsilon(1e-10));
  }
}

TEST_CASE("quadrature") {
  CHECK(ode::integrate([](double x) { return std::sin(x); }, 0.0, kPi) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(ode::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

}  // TEST_SUITE
