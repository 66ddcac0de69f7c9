#include <cmath>
#include <numbers>

#include "doctest.h"

#include "ccurv/config.hpp"
#include "ccurv/error.hpp"
#include "ccurv/field.hpp"

using namespace ccurv;

namespace {

// Sampled C2 norms of the 1e-3 cosine bump from an independent solver
// (DOP853 metric lines, central differences across x2), 65 x 65 grid.
constexpr double kBumpNormFullPatch = 7.460993241e-3;
constexpr double kBumpNormInnerPatch = 2.547826354e-3;  // |x1| <= 0.6

}  // namespace

TEST_SUITE("field") {

TEST_CASE("constant and bump values") {
  const CurvatureField one = make_field(Family::constant, 1.0, 0.0);
  const CurvatureJet j = one.jet(0.3, 1.7);
  CHECK(j.k == 1.0);
  CHECK(j.k1 == 0.0);
  CHECK(j.k2 == 0.0);
  CHECK(j.k11 == 0.0);
  CHECK(j.k12 == 0.0);
  CHECK(j.k22 == 0.0);
  CHECK(make_field(Family::constant, 1.1, 0.0).K(-0.5, 2.0) == 1.1);

  const CurvatureField bump = make_field(Family::cosine_bump, 1.0, 1e-3);
  CHECK(bump.K(0.0, 0.0) == doctest::Approx(1.001).epsilon(1e-15));
  CHECK(bump.kappa0() == doctest::Approx(1.001).epsilon(1e-15));
  CHECK(bump.min_K() >= 1.0);
}

TEST_CASE("jets match finite differences") {
  FieldParams p;
  p.wave1 = 1.3;
  p.wave2 = 0.7;
  p.phase = 0.4;
  p.phase2 = -0.2;
  for (Family fam : {Family::cosine_bump, Family::product_wave}) {
    const CurvatureField f = make_field(fam, 1.0, 0.05, p);
    const double h = 1e-5, x1 = 0.31, x2 = 1.9;
    const CurvatureJet j = f.jet(x1, x2);
    CHECK(j.k1 == doctest::Approx((f.K(x1 + h, x2) - f.K(x1 - h, x2)) / (2 * h)).epsilon(1e-7));
    CHECK(j.k2 == doctest::Approx((f.K(x1, x2 + h) - f.K(x1, x2 - h)) / (2 * h)).epsilon(1e-7));
    CHECK(j.k12 == doctest::Approx((f.jet(x1, x2 + h).k1 - f.jet(x1, x2 - h).k1) / (2 * h))
                       .epsilon(1e-6));
  }
}

TEST_CASE("invalid fields are rejected") {
  CHECK_THROWS_AS(make_field(Family::constant, 0.5, 0.0), ConfigError);
  CHECK_THROWS_AS(make_field(Family::cosine_bump, 1.0, -1e-3), ConfigError);
  CHECK_THROWS_AS(parse_family("sphere"), ConfigError);
}

TEST_CASE("metric on constant fields is cos(sqrt(kappa) x1)") {
  for (double kappa : {1.0, 1.1, 1.5}) {
    const CurvatureField f = make_field(Family::constant, kappa, 0.0);
    for (double x1 = -1.2; x1 <= 1.2 + 1e-12; x1 += 0.1) {
      const FermiMetricSample m = reconstruct_metric(f, 0.7, x1);
      CHECK(std::abs(m.w - std::cos(std::sqrt(kappa) * x1)) <= 1e-9);
    }
  }
  const FermiMetricSample m = reconstruct_metric(make_field(Family::constant, 1.0, 0.0), 0.0, 0.5);
  CHECK(m.w == doctest::Approx(0.8775825618903728).epsilon(1e-10));
}

TEST_CASE("metric is Fermi normalized on the axis") {
  const CurvatureField f = make_field(Family::product_wave, 1.0, 0.1);
  const FermiMetricSample m = reconstruct_metric(f, 1.3, 0.0);
  CHECK(m.w == 1.0);
  CHECK(m.dw_dx1 == 0.0);
}

TEST_CASE("flat validation field") {
  FieldParams p;
  p.allow_flat = true;
  const CurvatureField flat = make_field(Family::constant, 0.0, 0.0, p);
  CHECK(flat.is_flat());
  CHECK(reconstruct_metric(flat, 0.0, 0.7).w == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("x2 variation matches central differences") {
  const CurvatureField f = make_field(Family::cosine_bump, 1.0, 0.05);
  const double h = 1e-4;
  for (double x1 : {-1.0, 0.4, 1.1}) {
    const double x2 = 1.2;
    const FermiMetricSample m = reconstruct_metric(f, x2, x1, {1e-12, 1e-14});
    const double fd = (reconstruct_metric(f, x2 + h, x1, {1e-12, 1e-14}).w -
                       reconstruct_metric(f, x2 - h, x1, {1e-12, 1e-14}).w) /
                      (2 * h);
    CHECK(std::abs(m.dw_dx2 - fd) <= 1e-6);
    const FermiMetricSample s = metric_smooth(f, x1, x2);
    CHECK(s.w == doctest::Approx(m.w).epsilon(1e-9));
  }
}

TEST_CASE("metric outside the patch") {
  const CurvatureField f = make_field(Family::constant, 1.0, 0.0);
  CHECK_THROWS_AS(reconstruct_metric(f, 0.0, 1.5), ConfigError);
}

TEST_CASE("C2 norm of constant fields is |kappa - 1|") {
  CHECK(c2_norm(make_field(Family::constant, 1.0, 0.0)) == 0.0);
  CHECK(c2_norm(make_field(Family::constant, 1.05, 0.0)) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(c2_norm(make_field(Family::constant, 1.3, 0.0)) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("C2 norm of the cosine bump") {
  const CurvatureField f = make_field(Family::cosine_bump, 1.0, 1e-3);
  CHECK(c2_norm(f) == doctest::Approx(kBumpNormFullPatch).epsilon(1e-7));
  Patch inner;
  inner.x1_max = 0.6;
  const double eps = c2_norm_estimate(f, inner, 65, 65).value;
  CHECK(eps == doctest::Approx(kBumpNormInnerPatch).epsilon(1e-7));
  CHECK(eps >= 1e-3);
  CHECK(eps <= 6e-3);
  CHECK_THROWS_AS(c2_norm_estimate(f, inner, 16, 65), ConfigError);
}

TEST_CASE("C2 norm scales with amplitude") {
  const double a = c2_norm(make_field(Family::cosine_bump, 1.0, 1e-5));
  const double b = c2_norm(make_field(Family::cosine_bump, 1.0, 1e-4));
  CHECK(b / a == doctest::Approx(10.0).epsilon(1e-3));
}

TEST_CASE("user table field interpolates its samples") {
  CurvatureTable t;
  t.n1 = 9;
  t.n2 = 9;
  t.x1_min = -1.2;
  t.x1_max = 1.2;
  t.x2_min = -0.2;
  t.x2_max = std::numbers::pi + 0.2;
  for (int j = 0; j < t.n2; ++j)
    for (int i = 0; i < t.n1; ++i) t.values.push_back(1.02);
  FieldParams p;
  p.table = t;
  const CurvatureField f = make_field(Family::user_table, 1.0, 0.0, p);
  CHECK(f.K(0.13, 2.2) == doctest::Approx(1.02).epsilon(1e-12));
  CHECK(std::abs(f.jet(0.13, 2.2).k1) <= 1e-12);
}

}  // TEST_SUITE

TEST_SUITE("config") {

TEST_CASE("parse a full config") {
  const FieldConfig c = parse_field_config(
      "# bump\nfamily = cosine-bump\nkappa0=1\namplitude=1e-3\nwave1=2\nwave2=0.5\nphase=0.25\n");
  CHECK(c.family == Family::cosine_bump);
  CHECK(c.amplitude == 1e-3);
  CHECK(c.params.wave1 == 2.0);
  CHECK(c.params.wave2 == 0.5);
  CHECK(c.params.phase == 0.25);
  CHECK(build_field(c).K(0, 0) == doctest::Approx(1.0 + 1e-3 * (1 + std::cos(0.25)) / 2));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_field_config("kappa0=1\n"), ConfigError);
  CHECK_THROWS_AS(parse_field_config("family=constant\nfamily=constant\n"), ConfigError);
  CHECK_THROWS_AS(parse_field_config("family=constant\nradius=2\n"), ConfigError);
  CHECK_THROWS_AS(parse_field_config("family=constant\nkappa0=1.0x\n"), ConfigError);
  CHECK_THROWS_AS(parse_field_config("family=constant\nkappa0\n"), ConfigError);
  CHECK_THROWS_AS(parse_field_config("family=constant\nkappa0=inf\n"), ConfigError);
  CHECK_THROWS_AS(parse_field_config("family=user-table\n"), ConfigError);
  CHECK_THROWS_AS(load_field_config("/nonexistent/field.cfg"), ConfigError);
}

TEST_CASE("hash ignores formatting and comments") {
  const FieldConfig a = parse_field_config("family=constant\nkappa0=1.0\n");
  const FieldConfig b = parse_field_config("# note\n  kappa0 = 1\nfamily=constant\n\n");
  const FieldConfig c = parse_field_config("family=constant\nkappa0=1.1\n");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

}  // TEST_SUITE
