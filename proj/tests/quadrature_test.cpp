#include "specwave/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace specwave;

TEST_CASE("polynomials integrate exactly") {
  auto r = adaptive_integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  r = adaptive_integrate([](double x) { return 3.0 * x * x - 2.0 * x; }, -1.0,
                         2.0);
  CHECK(r.value == doctest::Approx(9.0 - 3.0).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand meets tolerance") {
  const double b = 40.0 * std::numbers::pi;
  QuadOptions opts;
  for (double x = 1.0; x < b; x += std::numbers::pi)
    opts.breakpoints.push_back(x);
  auto r = adaptive_integrate([](double x) { return std::cos(7.0 * x); }, 0.0,
                              b, opts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::sin(7.0 * b) / 7.0).epsilon(1e-10));
}

TEST_CASE("exp decay on a wide interval") {
  auto r = adaptive_integrate([](double x) { return std::exp(-x); }, 0.0, 60.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gauss-legendre rules integrate degree 2n-1 exactly") {
  for (int n : {2, 3, 5, 8, 16, 32, 64}) {
    const auto& rule = gauss_legendre(n);
    REQUIRE(static_cast<int>(rule.nodes.size()) == n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // Highest exactly-integrated monomial: x^(2n-1) is odd (zero); check
    // x^(2n-2) against the closed form 2/(2n-1).
    const int d = 2 * n - 2;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += rule.weights[i] * std::pow(rule.nodes[i], d);
    CHECK(s == doctest::Approx(2.0 / (d + 1)).epsilon(1e-12));
  }
}

TEST_CASE("integrate_gl matches adaptive on smooth integrand") {
  auto f = [](double x) { return std::sin(x) * std::exp(-0.3 * x); };
  const double a = 0.2, b = 4.0;
  const double v1 = integrate_gl(f, a, b, 24);
  const double v2 = integrate_or_throw(f, a, b);
  CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));
}

TEST_CASE("pairwise_sum equals naive sum") {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(std::sin(i) * 1e-3);
  double naive = 0.0;
  for (double x : xs) naive += x;
  CHECK(pairwise_sum(xs) == doctest::Approx(naive).epsilon(1e-12));
}
