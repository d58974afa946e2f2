#include "specwave/spectral_model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specwave/rng.hpp"

using namespace specwave;

namespace {
SpectralModel unit_power_law(double h) { return SpectralModel::power_law(h); }
}  // namespace

TEST_CASE("power-law density matches |xi|^-(1+2H)") {
  auto m = unit_power_law(0.2);
  CHECK(m.density(2.0) == doctest::Approx(std::pow(2.0, -1.4)).epsilon(1e-12));
  CHECK(m.density(2.0) == doctest::Approx(0.378929).epsilon(1e-5));
  CHECK_THROWS_AS(m.density(0.0), std::domain_error);
}

TEST_CASE("band-limited-constant density") {
  auto m = SpectralModel::band_limited_constant(3.0, 1.0, 4.0);
  CHECK(m.density(2.0) == 3.0);
  CHECK(m.density(5.0) == 0.0);
  CHECK(m.density(-2.0) == 3.0);
  CHECK(m.density(0.0) == 0.0);
}

TEST_CASE("piecewise model enforces continuity at interior edges") {
  // f = |xi|^-2 on [0.1,1), |xi|^-3 past 1 (H = 0.5, 1.0).
  auto m = SpectralModel::piecewise_power_law({{0.1, 0.5}, {1.0, 1.0}}, 1.0);
  CHECK(m.density(1.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.density(1.0 + 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.density(0.5) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(m.density(2.0) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(m.density(0.05) == 0.0);
}

TEST_CASE("density derivatives") {
  auto m = unit_power_law(0.2);
  CHECK(m.density_derivative(1.0) == doctest::Approx(-1.4).epsilon(1e-12));

  auto bl = SpectralModel::band_limited_constant(3.0, 1.0, 4.0);
  CHECK(bl.density_derivative(2.0) == 0.0);
  CHECK_THROWS_WITH_AS(bl.density_derivative(4.0),
                       doctest::Contains("non-differentiable"),
                       std::domain_error);

  auto pw = SpectralModel::piecewise_power_law({{0.1, 0.5}, {1.0, 1.0}}, 1.0);
  CHECK(pw.density_derivative(0.5) == doctest::Approx(-16.0).epsilon(1e-12));
  // Central difference cross-check, step 1e-6.
  const double h = 1e-6;
  const double fd = (pw.density(0.5 + h) - pw.density(0.5 - h)) / (2.0 * h);
  CHECK(std::abs(pw.density_derivative(0.5) - fd) /
            (1.0 + std::abs(fd)) < 1e-6);
}

TEST_CASE("derivative matches central differences away from edges") {
  auto pw = SpectralModel::piecewise_power_law({{0.2, 0.3}, {2.0, 0.8}}, 0.7);
  RandomStream rs(99, 0);
  for (int i = 0; i < 200; ++i) {
    double xi = 0.25 + 5.0 * rs.uniform01();
    if (std::abs(xi - 2.0) < 1e-3) continue;
    const double h = 1e-6 * std::max(1.0, xi);
    const double fd = (pw.density(xi + h) - pw.density(xi - h)) / (2.0 * h);
    const double an = pw.density_derivative(xi);
    CHECK(std::abs(an - fd) / (1.0 + std::abs(an)) < 1e-5);
  }
}

TEST_CASE("fbm scale constant") {
  CHECK(fbm_scale_constant(0.5) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  const double expected02 =
      std::numbers::pi /
      (0.2 * std::tgamma(0.4) * std::sin(0.2 * std::numbers::pi));
  CHECK(fbm_scale_constant(0.2) == doctest::Approx(expected02).epsilon(1e-14));
  for (double h = 0.05; h < 0.96; h += 0.05) {
    const double s = fbm_scale_constant(h);
    CHECK(s > 0.0);
    CHECK(std::isfinite(s));
  }
  CHECK_THROWS_AS(fbm_scale_constant(0.0), std::domain_error);
  CHECK_THROWS_AS(fbm_scale_constant(1.0), std::domain_error);
  CHECK_THROWS_AS(fbm_scale_constant(-0.3), std::domain_error);
}

TEST_CASE("increment variance: fBm self-similarity and closed form") {
  auto m = unit_power_law(0.2);
  CHECK(m.increment_variance(0.0) == 0.0);
  const double sigma2 = fbm_scale_constant(0.2);
  double ratio0 = 0.0;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const double vq = m.increment_variance_quadrature(t);
    const double r = vq / std::pow(t, 0.4);
    if (ratio0 == 0.0) ratio0 = r;
    CHECK(r == doctest::Approx(ratio0).epsilon(1e-4));
    // Quadrature route against the Gamma-function closed form.
    CHECK(vq == doctest::Approx(sigma2 * std::pow(t, 0.4)).epsilon(1e-6));
    CHECK(m.increment_variance(t) ==
          doctest::Approx(sigma2 * std::pow(t, 0.4)).epsilon(1e-12));
  }
}

TEST_CASE("increment variance: band-limited closed form") {
  const double c = 3.0, w0 = 1.0, w1 = 4.0;
  auto m = SpectralModel::band_limited_constant(c, w0, w1);
  for (double t : {0.3, 1.0, 2.7, 10.0}) {
    const double closed =
        4.0 * c * ((w1 - w0) - (std::sin(t * w1) - std::sin(t * w0)) / t);
    CHECK(m.increment_variance(t) == doctest::Approx(closed).epsilon(1e-8));
  }
  CHECK(m.increment_variance(0.0) == 0.0);
}

TEST_CASE("increment variance handles rough and long horizons") {
  auto m = unit_power_law(0.35);
  const double sigma2 = fbm_scale_constant(0.35);
  for (double t : {1e-4, 1e-2, 50.0, 2000.0}) {
    CHECK(m.increment_variance_quadrature(t) ==
          doctest::Approx(sigma2 * std::pow(t, 0.7)).epsilon(1e-6));
  }
}

TEST_CASE("piecewise increment variance is finite, increasing at small t") {
  auto pw = SpectralModel::piecewise_power_law({{0.1, 0.5}, {1.0, 1.0}}, 1.0);
  double prev = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    const double v = pw.increment_variance(t);
    CHECK(std::isfinite(v));
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("evenness over random frequencies") {
  auto pw = SpectralModel::piecewise_power_law({{0.0, 0.3}, {1.5, 0.7}}, 2.0);
  RandomStream rs(3, 1);
  for (int i = 0; i < 1000; ++i) {
    const double xi = -10.0 + 20.0 * rs.uniform01();
    if (xi == 0.0) continue;
    CHECK(pw.density(xi) == pw.density(-xi));
  }
}

TEST_CASE("constructor rejections") {
  CHECK_THROWS_AS(SpectralModel::power_law(-0.1), std::domain_error);
  CHECK_THROWS_AS(SpectralModel::power_law(0.0), std::domain_error);
  CHECK_THROWS_AS(SpectralModel::power_law(1.2), std::domain_error);
  // Band touching 0 with H >= 1 violates (F1).
  CHECK_THROWS_AS((SpectralModel::piecewise_power_law({{0.0, 1.2}}, 1.0)),
                  std::domain_error);
  CHECK_THROWS_AS(
      (SpectralModel::piecewise_power_law({{1.0, 0.5}, {0.5, 0.7}}, 1.0)),
      std::domain_error);
  CHECK_THROWS_AS(SpectralModel::band_limited_constant(1.0, 4.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS((SpectralModel::tabulated({1.0, 0.5}, {1.0, 1.0})),
                  std::domain_error);
}

TEST_CASE("H > 1 allowed on bands bounded away from zero") {
  auto m = SpectralModel::piecewise_power_law({{0.5, 1.3}}, 2.0);
  CHECK(m.validation().f1_ok);
  CHECK(m.density(1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isfinite(m.increment_variance(1.0)));
}

TEST_CASE("(F1)/(F2) report populated") {
  auto m = unit_power_law(0.3);
  CHECK(m.validation().f1_ok);
  CHECK(m.validation().f2_ok);
  CHECK(m.validation().tail_c0 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("json round trip") {
  auto m = SpectralModel::piecewise_power_law({{0.1, 0.5}, {1.0, 1.0}}, 1.0);
  auto m2 = SpectralModel::from_json_text(m.to_json_text());
  for (double xi : {0.15, 0.5, 0.9999, 1.0001, 3.0, 20.0}) {
    CHECK(m2.density(xi) == doctest::Approx(m.density(xi)).epsilon(1e-14));
  }
  auto bl = SpectralModel::from_json_text(
      R"({"kind":"band-limited-constant","value":2.0,"band":[1,4]})");
  CHECK(bl.density(3.0) == 2.0);
  auto pl = SpectralModel::from_json_text(R"({"kind":"power-law","H":0.2})");
  CHECK(pl.density(2.0) == doctest::Approx(std::pow(2.0, -1.4)).epsilon(1e-12));
}

TEST_CASE("tabulated model evaluates by interpolation") {
  auto m = SpectralModel::tabulated({1.0, 2.0, 4.0}, {1.0, 3.0, 1.0});
  CHECK(m.density(1.5) == doctest::Approx(2.0));
  CHECK(m.density(3.0) == doctest::Approx(2.0));
  CHECK(m.density(0.5) == 0.0);
  CHECK(m.density(5.0) == 0.0);
  CHECK(m.density_derivative(1.5) == doctest::Approx(2.0));
  CHECK(std::isfinite(m.increment_variance(2.0)));
}
