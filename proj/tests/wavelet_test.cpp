#include "specwave/wavelet.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "specwave/rng.hpp"

using namespace specwave;

namespace {
const MotherWavelet& bump() {
  static MotherWavelet w = MotherWavelet::build(WaveletShape::SmoothBump, 1.0);
  return w;
}
}  // namespace

TEST_CASE("bump transform endpoints") {
  CHECK(bump().eval_freq(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(bump().eval_freq(1.0) == 0.0);
  CHECK(bump().eval_freq(-1.0) == 0.0);
  CHECK(bump().eval_freq(1.7) == 0.0);
}

TEST_CASE("psi is real and even") {
  for (double t : {0.3, 1.7, 5.0, 20.0, 111.0}) {
    CHECK(bump().eval_time(t) ==
          doctest::Approx(bump().eval_time(-t)).epsilon(1e-9));
  }
  CHECK(std::abs(bump().eval_time(0.0)) > 0.01);
}

TEST_CASE("norms agree with a brute-force trapezoid oracle at 10x resolution") {
  const auto& w = bump();
  const int n = 200000;
  double l2 = 0.0, l4 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double xi = -1.0 + 2.0 * i / n;
    const double v = std::exp(-1.0 / (1.0 - xi * xi * (std::abs(xi) < 1.0)));
    const double vv = std::abs(xi) < 1.0 ? v : 0.0;
    const double wgt = (i == 0 || i == n) ? 0.5 : 1.0;
    l2 += wgt * vv * vv;
    l4 += wgt * vv * vv * vv * vv;
  }
  l2 *= 2.0 / n;
  l4 *= 2.0 / n;
  CHECK(w.norms().l2_freq == doctest::Approx(l2).epsilon(1e-8));
  CHECK(w.norms().l4_freq == doctest::Approx(l4).epsilon(1e-8));
}

TEST_CASE("parseval residual below 1e-6") {
  CHECK(bump().norms().parseval_residual < 1e-6);
  CHECK(bump().norms().l2_time ==
        doctest::Approx(bump().norms().l2_freq / (2.0 * std::numbers::pi))
            .epsilon(1e-6));
}

TEST_CASE("spline matches the analytic transform via direct quadrature") {
  // psi(t) = (1/pi) int_0^1 psi_hat(u) cos(t u) du for the even bump.
  for (double t : {0.0, 0.7, 3.1, 12.4, 40.0}) {
    double s = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
      const double u = static_cast<double>(i) / n;
      const double v = u < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
      s += ((i == 0 || i == n) ? 0.5 : 1.0) * v * std::cos(t * u);
    }
    s /= std::numbers::pi * n;
    CHECK(bump().eval_time(t) == doctest::Approx(s).epsilon(1e-7));
  }
}

TEST_CASE("modulated wavelet pointwise identities") {
  ModulatedWavelet mod(bump(), 8.0);
  CHECK(std::abs(mod.eval(0.0) -
                 std::complex<double>(bump().eval_time(0.0) / std::sqrt(8.0)))
        < 1e-14);
  RandomStream rs(21, 0);
  for (int i = 0; i < 50; ++i) {
    const double t = -30.0 + 60.0 * rs.uniform01();
    CHECK(std::abs(mod.eval(t)) ==
          doctest::Approx(std::abs(bump().eval_time(t / 8.0)) / std::sqrt(8.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("modulated transform identity against a discrete transform") {
  const double lambda = 4.0;
  ModulatedWavelet mod(bump(), lambda);
  // Discrete transform of the tabulated psi_lambda over its support.
  const double half = mod.support_halfwidth();
  const double dt = 0.05;
  const long n = static_cast<long>(half / dt);
  RandomStream rs(5, 0);
  double max_err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double xi = 0.5 + 1.0 * rs.uniform01();  // inside [1-L/l, 1+L/l] pad
    std::complex<double> acc{0.0, 0.0};
    for (long j = -n; j <= n; ++j) {
      const double t = static_cast<double>(j) * dt;
      acc += mod.eval(t) * std::exp(std::complex<double>(0.0, -xi * t));
    }
    acc *= dt;
    max_err = std::max(max_err, std::abs(acc - mod.freq(xi)));
  }
  CHECK(max_err < 1e-6);
}

TEST_CASE("modulated family has vanishing moments for lambda > Lambda") {
  auto rep = bump().verify_hypotheses(1, 4.0, 0.5, 2.0);
  CHECK(rep.modulated_transform_at_zero < 1e-10);
  CHECK(rep.modulated_transform_deriv_at_zero < 1e-10);
  // The base bump does not integrate to zero; the report flags it.
  CHECK(!rep.base_has_zero_mean);
  CHECK(rep.moments[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(rep.moments[1] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(rep.c_psi > 0.0);
  CHECK(std::isfinite(rep.c_psi));
  CHECK(std::isfinite(rep.c_psi_freq));
}

TEST_CASE("transform energy outside [1 - L/l, 1 + L/l] is negligible") {
  const double lambda = 4.0;
  ModulatedWavelet mod(bump(), lambda);
  const double half = mod.support_halfwidth();
  const double dt = 0.05;
  const long n = static_cast<long>(half / dt);
  // Total energy and the share outside the support band, by direct
  // quadrature of the transform on a frequency grid.
  double inside = 0.0, outside = 0.0;
  for (int k = -400; k <= 400; ++k) {
    const double xi = k * 0.01;
    std::complex<double> acc{0.0, 0.0};
    for (long j = -n; j <= n; ++j) {
      const double t = static_cast<double>(j) * dt;
      acc += mod.eval(t) * std::exp(std::complex<double>(0.0, -xi * t));
    }
    const double e = std::norm(acc * dt);
    if (xi >= 1.0 - 1.0 / lambda - 1e-9 && xi <= 1.0 + 1.0 / lambda + 1e-9)
      inside += e;
    else
      outside += e;
  }
  CHECK(outside < 1e-10 * (inside + outside));
}

TEST_CASE("norm scaling: modulated L2 norm is lambda-invariant") {
  for (double lambda : {2.0, 8.0, 32.0}) {
    ModulatedWavelet mod(bump(), lambda);
    const double half = mod.support_halfwidth();
    const double dt = 0.02 * lambda;
    const long n = static_cast<long>(half / dt);
    double e = 0.0;
    for (long j = -n; j <= n; ++j) e += std::norm(mod.eval(j * dt));
    e *= dt;
    CHECK(e == doctest::Approx(bump().norms().l2_time).epsilon(1e-8));
  }
}

TEST_CASE("meyer-like window builds and verifies") {
  auto w = MotherWavelet::build(WaveletShape::MeyerLike, 1.0);
  CHECK(w.eval_freq(0.0) == 1.0);
  CHECK(w.eval_freq(0.4) == 1.0);
  CHECK(w.eval_freq(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.norms().parseval_residual < 1e-6);
  auto rep = w.verify_hypotheses(1, 4.0, 0.5, 2.0);
  CHECK(rep.modulated_transform_at_zero < 1e-10);
  CHECK(std::isfinite(rep.c_psi));
}

TEST_CASE("construction rejections") {
  CHECK_THROWS_AS(MotherWavelet::build(WaveletShape::SmoothBump, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(MotherWavelet::build(WaveletShape::SmoothBump, 1.0, 1000),
                  std::invalid_argument);
}

TEST_CASE("inspect json mentions norms and moments") {
  const auto text = bump().inspect_json();
  CHECK(text.find("l2_freq") != std::string::npos);
  CHECK(text.find("moments") != std::string::npos);
  CHECK(text.find("parseval_residual") != std::string::npos);
}
