#include "specwave/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "specwave/fft.hpp"
#include "specwave/quadrature.hpp"

namespace specwave {

namespace {

// Meyer auxiliary polynomial: nu(0)=0, nu(1)=1, three vanishing derivatives
// at both ends.
double meyer_nu(double x) {
  return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}
double meyer_nu_prime(double x) {
  return x * x * x *
         (140.0 - 420.0 * x + 420.0 * x * x - 140.0 * x * x * x);
}

double shape_freq(WaveletShape shape, double lambda_cap, double xi) {
  const double u = std::abs(xi) / lambda_cap;
  if (u >= 1.0) return 0.0;
  switch (shape) {
    case WaveletShape::SmoothBump:
      return std::exp(-1.0 / (1.0 - u * u));
    case WaveletShape::MeyerLike: {
      if (u <= 0.5) return 1.0;
      return std::cos(0.5 * std::numbers::pi * meyer_nu(2.0 * u - 1.0));
    }
  }
  return 0.0;
}

double shape_freq_derivative(WaveletShape shape, double lambda_cap, double xi) {
  const double sign = xi < 0.0 ? -1.0 : 1.0;
  const double u = std::abs(xi) / lambda_cap;
  if (u >= 1.0) return 0.0;
  switch (shape) {
    case WaveletShape::SmoothBump: {
      const double d = 1.0 - u * u;
      return sign * std::exp(-1.0 / d) * (-2.0 * u / (d * d)) / lambda_cap;
    }
    case WaveletShape::MeyerLike: {
      if (u <= 0.5) return 0.0;
      const double w = 2.0 * u - 1.0;
      return sign * (-0.5 * std::numbers::pi) *
             std::sin(0.5 * std::numbers::pi * meyer_nu(w)) *
             meyer_nu_prime(w) * 2.0 / lambda_cap;
    }
  }
  return 0.0;
}

// Natural cubic spline second derivatives on a uniform grid (Thomas solve).
std::vector<double> spline_second_derivatives(const std::vector<double>& y,
                                              double h) {
  const std::size_t n = y.size();
  std::vector<double> d2(n, 0.0), c(n, 0.0), rhs(n, 0.0);
  if (n < 3) return d2;
  // Interior equations: d2[i-1] + 4 d2[i] + d2[i+1] = 6 (y[i-1]-2y[i]+y[i+1])/h^2
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    rhs[i] = 6.0 * (y[i - 1] - 2.0 * y[i] + y[i + 1]) / (h * h);
  cp[1] = 1.0 / 4.0;
  dp[1] = rhs[1] / 4.0;
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double m = 4.0 - cp[i - 1];
    cp[i] = 1.0 / m;
    dp[i] = (rhs[i] - dp[i - 1]) / m;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    d2[i] = dp[i] - cp[i] * d2[i + 1];
    if (i == 1) break;
  }
  return d2;
}

double simpson_fixed(const std::function<double(double)>& f, double a, double b,
                     int panels) {
  const double h = (b - a) / (2.0 * panels);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i)
    s += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

MotherWavelet MotherWavelet::build(WaveletShape shape, double lambda_cap,
                                   std::size_t freq_resolution) {
  if (!(lambda_cap > 0.0))
    throw std::invalid_argument("wavelet: Lambda must be positive");
  if (freq_resolution < (std::size_t{1} << 12) ||
      !is_power_of_two(freq_resolution))
    throw std::invalid_argument(
        "wavelet: frequency resolution must be a power of two >= 4096");

  MotherWavelet w;
  w.shape_ = shape;
  w.lambda_cap_ = lambda_cap;
  w.freq_resolution_ = freq_resolution;

  // Time step pi/(32 Lambda): 32x oversampling of the band limit, so the
  // cubic spline error sits near 1e-9 of the peak. The implied frequency
  // span is 64 Lambda, the tabulation half-width N pi / (64 Lambda).
  const std::size_t n = freq_resolution;
  const double dxi = 64.0 * lambda_cap / static_cast<double>(n);
  const double dt = 2.0 * std::numbers::pi / (static_cast<double>(n) * dxi);
  w.dt_ = dt;
  w.tab_half_ = 0.5 * static_cast<double>(n) * dt;

  std::vector<std::complex<double>> a(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xi = (static_cast<double>(j) - static_cast<double>(n) / 2) * dxi;
    const double v = shape_freq(shape, lambda_cap, xi);
    a[j] = (j % 2 == 0) ? v : -v;
  }
  fft_inplace(a, true);
  w.samples_.resize(n);
  const double scale = dxi / (2.0 * std::numbers::pi);
  double max_imag = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    w.samples_[m] = sgn * scale * a[m].real();
    max_imag = std::max(max_imag, std::abs(a[m].imag()) * scale);
  }
  w.psi_max_ = 0.0;
  for (double s : w.samples_) w.psi_max_ = std::max(w.psi_max_, std::abs(s));
  if (max_imag > 1e-10 * w.psi_max_)
    throw std::runtime_error(
        "wavelet: inverse transform has a non-real residue " +
        std::to_string(max_imag));

  w.spline_d2_ = spline_second_derivatives(w.samples_, dt);

  // Norms by two independent rules: adaptive Gauss-Kronrod on the analytic
  // transform against fixed-step Simpson; they must agree to 1e-8.
  auto f2 = [&](double xi) {
    const double v = shape_freq(shape, lambda_cap, xi);
    return v * v;
  };
  auto f4 = [&](double xi) {
    const double v = shape_freq(shape, lambda_cap, xi);
    return v * v * v * v;
  };
  QuadOptions qo;
  qo.abs_tol = 1e-13;
  qo.rel_tol = 1e-11;
  const double l2a = integrate_or_throw(f2, -lambda_cap, lambda_cap, qo);
  const double l2b = simpson_fixed(f2, -lambda_cap, lambda_cap, 4000);
  const double l4a = integrate_or_throw(f4, -lambda_cap, lambda_cap, qo);
  const double l4b = simpson_fixed(f4, -lambda_cap, lambda_cap, 4000);
  if (std::abs(l2a - l2b) > 1e-8 * l2a || std::abs(l4a - l4b) > 1e-8 * l4a)
    throw std::runtime_error(
        "wavelet: independent norm quadratures disagree beyond 1e-8");
  w.norms_.l2_freq = l2a;
  w.norms_.l4_freq = l4a;
  w.norms_.mu1 = integrate_or_throw(
      [&](double u) { return u * f2(u); }, -lambda_cap, lambda_cap, qo);
  w.norms_.mu2 = integrate_or_throw(
      [&](double u) { return u * u * f2(u); }, -lambda_cap, lambda_cap, qo);

  double l2t = 0.0;  // trapezoid over the tabulation; tails are ~1e-28
  for (std::size_t m = 0; m < n; ++m) {
    const double v = w.samples_[m] * w.samples_[m];
    l2t += (m == 0 || m + 1 == n) ? 0.5 * v : v;
  }
  l2t *= dt;
  w.norms_.l2_time = l2t;
  w.norms_.parseval_residual =
      std::abs(l2t - l2a / (2.0 * std::numbers::pi)) / l2t;
  if (w.norms_.parseval_residual > 1e-6)
    throw std::runtime_error(
        "wavelet: resolution too coarse, Parseval residual = " +
        std::to_string(w.norms_.parseval_residual));
  return w;
}

double MotherWavelet::eval_time(double t) const {
  const double u = (t + tab_half_) / dt_;
  if (u <= 0.0 || u >= static_cast<double>(samples_.size() - 1)) return 0.0;
  const std::size_t i = static_cast<std::size_t>(u);
  const double x = u - static_cast<double>(i);
  const double a = 1.0 - x;
  // Cubic spline segment evaluation.
  return a * samples_[i] + x * samples_[i + 1] +
         ((a * a * a - a) * spline_d2_[i] + (x * x * x - x) * spline_d2_[i + 1]) *
             dt_ * dt_ / 6.0;
}

double MotherWavelet::eval_freq(double xi) const {
  return shape_freq(shape_, lambda_cap_, xi);
}

double MotherWavelet::eval_freq_derivative(double xi) const {
  return shape_freq_derivative(shape_, lambda_cap_, xi);
}

double MotherWavelet::envelope_tail_l1(double u) const {
  double s = 0.0;
  for (std::size_t m = 0; m < samples_.size(); ++m) {
    const double t = -tab_half_ + static_cast<double>(m) * dt_;
    if (std::abs(t) > u) s += std::abs(samples_[m]) * dt_;
  }
  return s;
}

double MotherWavelet::support_cut(double cut_rel) const {
  const double thresh = cut_rel * psi_max_;
  for (std::size_t k = samples_.size(); k-- > 0;) {
    const double t = -tab_half_ + static_cast<double>(k) * dt_;
    if (t < 0.0) break;
    if (std::abs(samples_[k]) >= thresh ||
        std::abs(eval_time(-t)) >= thresh)
      return t;
  }
  return 0.0;
}

HypothesisReport MotherWavelet::verify_hypotheses(int m, double q, double r,
                                                  double check_lambda) const {
  HypothesisReport rep;
  rep.m = m;
  rep.q = q;
  rep.r = r;
  const std::size_t n = samples_.size();
  for (int k = 0; k <= m; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = -tab_half_ + static_cast<double>(j) * dt_;
      const double v = std::pow(t, k) * samples_[j];
      s += (j == 0 || j + 1 == n) ? 0.5 * v : v;
    }
    rep.moments.push_back(s * dt_);
    rep.moment_ok.push_back(std::abs(rep.moments.back()) < 1e-6);
  }
  rep.base_has_zero_mean = rep.moment_ok[0];
  if (!rep.base_has_zero_mean)
    rep.notes +=
        "base wavelet has nonzero mean (psi_hat(0) = " +
        std::to_string(eval_freq(0.0)) +
        "); the modulated family with lambda > Lambda carries the vanishing "
        "moments; ";

  if (check_lambda <= 0.0) check_lambda = 2.0 * lambda_cap_;
  ModulatedWavelet mod(*this, check_lambda);
  rep.modulated_transform_at_zero = std::abs(mod.freq(0.0));
  rep.modulated_transform_deriv_at_zero =
      std::abs(std::pow(check_lambda, 1.5) *
               eval_freq_derivative(-check_lambda));

  double cpsi = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = -tab_half_ + static_cast<double>(j) * dt_;
    cpsi = std::max(cpsi, std::pow(1.0 + std::abs(t), q) * std::abs(samples_[j]));
  }
  rep.c_psi = cpsi;
  double cfreq = 0.0;
  for (int j = 0; j <= 4000; ++j) {
    const double xi = -lambda_cap_ + 2.0 * lambda_cap_ * j / 4000.0;
    cfreq = std::max(cfreq, std::pow(1.0 + std::abs(xi), r) *
                                (std::abs(eval_freq(xi)) +
                                 std::abs(eval_freq_derivative(xi))));
  }
  rep.c_psi_freq = cfreq;
  return rep;
}

std::string MotherWavelet::inspect_json() const {
  nlohmann::json j;
  j["shape"] = shape_ == WaveletShape::SmoothBump ? "bump" : "meyer-like";
  j["lambda_cap"] = lambda_cap_;
  j["freq_resolution"] = freq_resolution_;
  j["tabulation"] = {{"halfwidth", tab_half_},
                     {"step", dt_},
                     {"samples", samples_.size()},
                     {"peak", psi_max_}};
  j["norms"] = {{"l2_time", norms_.l2_time},
                {"l2_freq", norms_.l2_freq},
                {"l4_freq", norms_.l4_freq},
                {"mu1", norms_.mu1},
                {"mu2", norms_.mu2},
                {"parseval_residual", norms_.parseval_residual}};
  auto rep = verify_hypotheses(1, 4.0, 0.5);
  j["hypotheses"] = {{"moments", rep.moments},
                     {"moment_ok", rep.moment_ok},
                     {"modulated_zero", rep.modulated_transform_at_zero},
                     {"modulated_zero_deriv",
                      rep.modulated_transform_deriv_at_zero},
                     {"C_psi_q4", rep.c_psi},
                     {"C_psi_freq_r05", rep.c_psi_freq},
                     {"notes", rep.notes}};
  return j.dump(2);
}

ModulatedWavelet::ModulatedWavelet(const MotherWavelet& base, double lambda,
                                   Kernel kernel)
    : base_(&base), lambda_(lambda), kernel_(kernel) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("modulated wavelet: lambda must be positive");
}

std::complex<double> ModulatedWavelet::eval(double t) const {
  const double envelope = base_->eval_time(t / lambda_) / std::sqrt(lambda_);
  if (kernel_ == Kernel::Cosine) return {std::cos(t) * envelope, 0.0};
  return {std::cos(t) * envelope, std::sin(t) * envelope};
}

std::complex<double> ModulatedWavelet::freq(double nu) const {
  const double root = std::sqrt(lambda_);
  if (kernel_ == Kernel::Cosine) {
    return {0.5 * root *
                (base_->eval_freq(lambda_ * (nu - 1.0)) +
                 base_->eval_freq(lambda_ * (nu + 1.0))),
            0.0};
  }
  return {root * base_->eval_freq(lambda_ * (nu - 1.0)), 0.0};
}

double ModulatedWavelet::support_halfwidth() const {
  return lambda_ * base_->tab_halfwidth();
}

double ModulatedWavelet::support_cut(double cut_rel) const {
  return lambda_ * base_->support_cut(cut_rel);
}

}  // namespace specwave
