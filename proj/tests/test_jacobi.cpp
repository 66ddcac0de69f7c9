#include <cmath>
#include <numbers>

#include "doctest.h"

#include "ccurv/error.hpp"
#include "ccurv/jacobi.hpp"
#include "gen.hpp"

using namespace ccurv;

namespace {

constexpr double kPi = std::numbers::pi;

CurvatureField unit_sphere() { return make_field(Family::constant, 1.0, 0.0); }

// Fields used by the acceptance runs.
std::vector<CurvatureField> acceptance_fields() {
  FieldParams wave;
  wave.wave1 = 1.5;
  wave.wave2 = 0.8;
  wave.phase = 0.3;
  return {unit_sphere(), make_field(Family::constant, 1.1, 0.0),
          make_field(Family::cosine_bump, 1.0, 1.35e-5), make_field(Family::cosine_bump, 1.0, 1e-3),
          make_field(Family::product_wave, 1.0, 1e-3, wave)};
}

}  // namespace

TEST_SUITE("jacobi") {

TEST_CASE("unit sphere closed forms at t = 1") {
  for (double phi : {0.0, 0.7, kPi / 2, 4.0}) {
    const BundleState y = solve_bundle(unit_sphere(), {1.0, 0.0, phi}).final_state();
    CHECK(std::abs(y[kF0] - std::cos(1.0)) <= 1e-9);
    CHECK(std::abs(y[kF1] - std::sin(1.0)) <= 1e-9);
  }
  // D_nu f1 along the axis: (cos r - sin r / r) cos phi at r = 1
  const BundleState y = solve_bundle(unit_sphere(), {1.0, 0.0, 0.0}).final_state();
  CHECK(std::abs(y[kFp1] - (std::cos(1.0) - std::sin(1.0))) <= 1e-9);
}

TEST_CASE("initial state of the bundle") {
  const JacobiBundle b = solve_bundle(make_field(Family::cosine_bump, 1.0, 1e-3), {2.0, 0.0, 1.0});
  const BundleState y = b.at_node(0);
  CHECK(y[kF0] == 1.0);
  CHECK(y[kF1] == 0.0);
  for (std::size_t s = kFp0; s < kBundleDim; ++s) CHECK(y[s] == 0.0);
}

TEST_CASE("probe validation") {
  CHECK_THROWS_AS(validate({0.0, 0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(validate({3.5, 0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(validate({1.0, 7.0, 0.0}), ConfigError);
  CHECK_NOTHROW(validate({kPi, 0.0, 6.0}));
}

TEST_CASE("conjugate distance") {
  CHECK(conjugate_distance(unit_sphere()) == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(conjugate_distance(make_field(Family::constant, 4.0, 0.0)) ==
        doctest::Approx(kPi / 2).epsilon(1e-10));
  const double l = conjugate_distance(make_field(Family::cosine_bump, 1.0, 1e-3));
  CHECK(l >= kPi / std::sqrt(1.001));
  CHECK(l <= kPi);
}

TEST_CASE("geodesics in the Fermi chart") {
  const CurvatureField bump = make_field(Family::cosine_bump, 1.0, 1e-3);
  const auto axis = geodesic_shoot(bump, 0.0, 1.0).at(1.0);
  CHECK(std::abs(axis[0]) <= 1e-9);
  CHECK(std::abs(axis[1] - 1.0) <= 1e-9);

  const GeodesicPath across = geodesic_shoot(unit_sphere(), 0.3, 0.0);
  for (double t : {0.25, 0.5, 1.0}) {
    const auto x = across.at(t);
    CHECK(std::abs(x[0] - 0.3 * t) <= 1e-9);
    CHECK(std::abs(x[1]) <= 1e-9);
  }

  const GeodesicPath slant = geodesic_shoot(unit_sphere(), 0.1, 1.0);
  const double e0 = slant.energy(unit_sphere(), 0.0);
  for (double t : {0.3, 0.6, 1.0}) CHECK(std::abs(slant.energy(unit_sphere(), t) - e0) <= 1e-8);
}

TEST_CASE("off-axis Jacobi fields on constant curvature") {
  const OffAxisJacobi a = jacobi_off_axis(unit_sphere(), 0.0, 1.0);
  CHECK(a.f0 == doctest::Approx(std::cos(1.0)).epsilon(1e-9));
  CHECK(a.f1 == doctest::Approx(std::sin(1.0)).epsilon(1e-9));
  const OffAxisJacobi b = jacobi_off_axis(unit_sphere(), 0.6, 0.8);
  CHECK(b.f0 == doctest::Approx(std::cos(1.0)).epsilon(1e-9));
  CHECK(b.f1 == doctest::Approx(std::sin(1.0)).epsilon(1e-9));
  // K = 4, |v| = 0.5: rbar = 1, f1 = sin(rbar t) / rbar in the t normalization
  const OffAxisJacobi c = jacobi_off_axis(make_field(Family::constant, 4.0, 0.0), 0.0, 0.5);
  CHECK(c.f0 == doctest::Approx(std::cos(1.0)).epsilon(1e-9));
  CHECK(c.f1 == doctest::Approx(std::sin(1.0)).epsilon(1e-9));
}

TEST_CASE("f1 rescales linearly in t") {
  testgen::Rng rng(77);
  const auto fields = acceptance_fields();
  for (int n = 0; n < 20; ++n) {
    const CurvatureField& f = fields[static_cast<std::size_t>(rng.index(static_cast<int>(fields.size())))];
    const double r0 = rng.uniform(0.2, 3.0);
    const double t = rng.uniform(0.1, 1.0);
    const JacobiBundle full = solve_bundle(f, {r0, 0.0, 0.0});
    const double f1_t = full.traj.refine(t)[kF1];
    const double rescaled = solve_bundle(f, {t * r0, 0.0, 0.0}).final_state()[kF1];
    CAPTURE(r0);
    CAPTURE(t);
    CHECK(std::abs(f1_t - t * rescaled) <= 1e-8);
  }
}

TEST_CASE("variations agree with differences of off-axis fields") {
  const CurvatureField f = make_field(Family::cosine_bump, 1.0, 1e-3);
  OffAxisOptions o;
  o.fixed_steps = 2000;
  for (const ProbeConfig p : {ProbeConfig{1.0, 0.0, 0.4}, ProbeConfig{2.2, 0.0, 2.0}}) {
    const BundleState y = solve_bundle(f, p).final_state();
    const double h = 1e-4;
    const double s = std::sin(p.phi), c = std::cos(p.phi);
    const OffAxisJacobi plus = jacobi_off_axis(f, h * s, p.r0 + h * c, o);
    const OffAxisJacobi mid = jacobi_off_axis(f, 0.0, p.r0, o);
    const OffAxisJacobi minus = jacobi_off_axis(f, -h * s, p.r0 - h * c, o);
    CHECK(std::abs(y[kFp0] - (plus.f0 - minus.f0) / (2 * h)) <= 5e-7);
    CHECK(std::abs(y[kFp1] - (plus.f1 - minus.f1) / (2 * h)) <= 5e-7);
    const double h2 = 1e-2;
    const OffAxisJacobi pp = jacobi_off_axis(f, h2 * s, p.r0 + h2 * c, o);
    const OffAxisJacobi mm = jacobi_off_axis(f, -h2 * s, p.r0 - h2 * c, o);
    CHECK(std::abs(y[kFpp0] - (pp.f0 - 2 * mid.f0 + mm.f0) / (h2 * h2)) <= 5e-4);
    CHECK(std::abs(y[kFpp1] - (pp.f1 - 2 * mid.f1 + mm.f1) / (h2 * h2)) <= 5e-4);
  }
}

TEST_CASE("f1 stays positive before conjugacy") {
  for (const CurvatureField& f : acceptance_fields()) {
    const double r0 = 0.999 * std::min(conjugate_distance(f), kPi);
    const JacobiBundle b = solve_bundle(f, {r0, 0.0, 1.0});
    for (std::size_t i = 1; i < b.traj.size(); ++i) CHECK(b.traj.value(i, kF1) > 0.0);
  }
}

TEST_CASE("Sturm pinching at every stored node") {
  for (const CurvatureField& f : acceptance_fields()) {
    const double lo = std::sqrt(f.min_K()), hi = std::sqrt(f.max_K());
    for (double frac : {0.3, 0.7, 0.95}) {
      const double r0 = frac * std::min(conjugate_distance(f), kPi);
      const JacobiBundle b = solve_bundle(f, {r0, 0.0, 0.0});
      for (std::size_t i = 1; i < b.traj.size(); ++i) {
        const double t = b.traj.times()[i];
        const double f1 = b.traj.value(i, kF1);
        // sin(sqrt(maxK) r0 t)/(sqrt(maxK) r0) <= f1 <= sin(sqrt(minK) r0 t)/(sqrt(minK) r0)
        CHECK(f1 >= std::sin(hi * r0 * t) / (hi * r0) - 1e-10);
        CHECK(f1 <= std::sin(lo * r0 * t) / (lo * r0) + 1e-10);
      }
    }
  }
}

}  // TEST_SUITE
