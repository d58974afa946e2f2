#include "specwave/simulate.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "specwave/sampling.hpp"

using namespace specwave;

namespace {

double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Empirical covariance of X(s)X(t) over replicates against covariance(),
// relative 4/sqrt(R) bands. Pairs should be correlated enough that the
// product estimator's standard error stays inside the band.
void check_empirical_covariance(const SpectralModel& model,
                                const std::vector<double>& times,
                                const std::vector<std::pair<double, double>>& pairs,
                                SimMethod method, int reps, std::uint64_t seed) {
  SimulateOptions opts;
  opts.method = method;
  auto index_of = [&](double t) {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (std::abs(times[i] - t) < 1e-12) return i;
    REQUIRE(false);
    return std::size_t{0};
  };
  std::vector<std::vector<double>> prods(pairs.size());
  for (int r = 0; r < reps; ++r) {
    auto p = simulate_path(model, times, seed + r, opts);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double xs = p.values[index_of(pairs[k].first)];
      const double xt = p.values[index_of(pairs[k].second)];
      prods[k].push_back(xs * xt);
    }
  }
  const double band = 4.0 / std::sqrt(static_cast<double>(reps));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double expected = covariance(model, pairs[k].first, pairs[k].second);
    const double got = sample_mean(prods[k]);
    INFO("pair (", pairs[k].first, ",", pairs[k].second, ") method ",
         static_cast<int>(method));
    CHECK(std::abs(got - expected) <= band * std::abs(expected));
  }
}

}  // namespace

TEST_CASE("covariance identities") {
  auto m = SpectralModel::power_law(0.5);  // f = |xi|^-2, v(t) = 2 pi |t|
  CHECK(covariance(m, 0.0, 3.0) == 0.0);
  CHECK(covariance(m, 1.0, 2.0) ==
        doctest::Approx(0.5 * m.increment_variance(2.0)).epsilon(1e-12));
  // Brownian: cov(s,t) = v(1) * min(s,t).
  const double v1 = m.increment_variance(1.0);
  for (auto [s, t] : std::vector<std::pair<double, double>>{{1, 2}, {2, 4}, {1, 3}}) {
    CHECK(covariance(m, s, t) / std::min(s, t) ==
          doctest::Approx(v1).epsilon(1e-10));
  }
  CHECK(v1 == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("single observation at t=0") {
  auto m = SpectralModel::power_law(0.3);
  auto p = simulate_path(m, {0.0}, 42);
  REQUIRE(p.values.size() == 1);
  CHECK(p.values[0] == 0.0);
}

TEST_CASE("brownian increments on a regular grid have variance v(1)") {
  auto m = SpectralModel::power_law(0.5);
  auto times = draw_times(SamplingScheme::deterministic(1.0), 10000, 1);
  auto p = simulate_path(m, times, 9);  // circulant fast path
  double s2 = 0.0;
  for (std::size_t i = 1; i < p.values.size(); ++i) {
    const double d = p.values[i] - p.values[i - 1];
    s2 += d * d;
  }
  s2 /= static_cast<double>(p.values.size() - 1);
  CHECK(s2 == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.05));
}

TEST_CASE("reproducibility and seed sensitivity") {
  auto m = SpectralModel::power_law(0.2);
  auto times = draw_times(SamplingScheme::exponential(0.1), 1000, 3);
  auto a = simulate_path(m, times, 5);
  auto b = simulate_path(m, times, 5);
  auto c = simulate_path(m, times, 6);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("dense path matches covariance empirically") {
  auto m = SpectralModel::power_law(0.3);
  auto times = draw_times(SamplingScheme::exponential(0.25), 40, 17);
  std::vector<std::pair<double, double>> pairs = {
      {times[10], times[10]}, {times[10], times[12]}, {times[20], times[22]},
      {times[30], times[30]}, {times[5], times[8]}};
  check_empirical_covariance(m, times, pairs, SimMethod::Dense, 500, 1000);
}

TEST_CASE("circulant path matches covariance empirically") {
  auto m = SpectralModel::power_law(0.7);
  auto times = draw_times(SamplingScheme::deterministic(0.5), 128, 0);
  std::vector<std::pair<double, double>> pairs = {
      {times[16], times[16]}, {times[16], times[18]}, {times[40], times[44]},
      {times[64], times[64]}, {times[100], times[101]}};
  check_empirical_covariance(m, times, pairs, SimMethod::CirculantRegular, 500,
                             2000);
}

TEST_CASE("band-limited fast path matches covariance empirically") {
  auto m = SpectralModel::band_limited_constant(2.0, 1.0, 4.0);
  auto times = draw_times(SamplingScheme::exponential(0.05), 400, 23);
  std::vector<std::pair<double, double>> pairs = {
      {times[50], times[50]}, {times[50], times[52]}, {times[100], times[103]},
      {times[200], times[200]}, {times[300], times[301]}};
  check_empirical_covariance(m, times, pairs, SimMethod::BandLimited, 500, 3000);
}

TEST_CASE("fine-grid bridge matches covariance empirically") {
  auto m = SpectralModel::power_law(0.3);
  auto times = draw_times(SamplingScheme::exponential(0.2), 200, 31);
  SimulateOptions opts;
  opts.method = SimMethod::FineGridBridge;
  std::vector<std::pair<double, double>> pairs = {
      {times[40], times[40]}, {times[40], times[42]}, {times[80], times[83]},
      {times[120], times[120]}, {times[160], times[161]}};
  check_empirical_covariance(m, times, pairs, SimMethod::FineGridBridge, 500,
                             4000);
}

TEST_CASE("increments are stationary (matched h, different t)") {
  auto m = SpectralModel::power_law(0.4);
  auto times = draw_times(SamplingScheme::deterministic(0.5), 64, 0);
  const int reps = 600;
  double v_early = 0.0, v_late = 0.0;
  for (int r = 0; r < reps; ++r) {
    auto p = simulate_path(m, times, 7000 + r);
    const double d1 = p.values[12] - p.values[8];   // h = 2 at t = 4
    const double d2 = p.values[52] - p.values[48];  // h = 2 at t = 24
    v_early += d1 * d1;
    v_late += d2 * d2;
  }
  v_early /= reps;
  v_late /= reps;
  const double band = 4.0 * std::sqrt(2.0 / reps);
  CHECK(std::abs(v_early - v_late) <= band * 0.5 * (v_early + v_late));
  CHECK(v_early ==
        doctest::Approx(m.increment_variance(2.0)).epsilon(4.0 * band));
}

TEST_CASE("near-degenerate spacing still factorizes (jitter escalation)") {
  auto m = SpectralModel::power_law(0.5);
  std::vector<double> times{0.0, 1.0, 1.0 + 1e-11, 2.0, 2.0 + 1e-11, 3.0};
  SimulateOptions opts;
  opts.method = SimMethod::Dense;
  auto p = simulate_path(m, times, 77, opts);
  for (double x : p.values) CHECK(std::isfinite(x));
}

TEST_CASE("dense size limit error advises the fast path") {
  auto m = SpectralModel::power_law(0.5);
  auto times = draw_times(SamplingScheme::exponential(1.0), 100, 1);
  SimulateOptions opts;
  opts.method = SimMethod::Dense;
  opts.dense_limit = 50;
  CHECK_THROWS_WITH_AS(simulate_path(m, times, 1, opts),
                       doctest::Contains("fast path"), std::runtime_error);
}

TEST_CASE("covariance matrices are PSD (eigenvalues >= -1e-8 trace)") {
  for (auto& m :
       {SpectralModel::power_law(0.2),
        SpectralModel::piecewise_power_law({{0.1, 0.5}, {1.0, 1.0}}, 1.0),
        SpectralModel::band_limited_constant(2.0, 1.0, 4.0)}) {
    auto times = draw_times(SamplingScheme::exponential(0.3), 40, 5);
    const std::size_t n = times.size() - 1;
    Eigen::MatrixXd c(n, n);
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j)
        c(i - 1, j - 1) = covariance(m, times[i], times[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * c.trace());
  }
}
