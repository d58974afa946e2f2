#include "specwave/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specwave/quadrature.hpp"

namespace specwave {

ShiftGrid ShiftGrid::build(double horizon, double rho, std::size_t count) {
  if (count < 2) throw std::invalid_argument("shift grid: need N >= 2");
  if (!(rho > 0.75 && rho < 1.0))
    throw std::invalid_argument("shift grid: rho must lie in (3/4, 1)");
  const double margin = std::pow(horizon, rho);
  const double tau = horizon - 2.0 * margin;
  if (!(tau > 0.0)) {
    const double min_t = std::pow(2.0, 1.0 / (1.0 - rho));
    throw std::invalid_argument(
        "shift grid: horizon too short for rho = " + std::to_string(rho) +
        "; need T > " + std::to_string(min_t));
  }
  ShiftGrid g;
  g.tau = tau;
  g.shifts.resize(count);
  for (std::size_t k = 0; k < count; ++k)
    g.shifts[k] = margin + static_cast<double>(k) /
                               static_cast<double>(count - 1) * tau;
  return g;
}

namespace {

struct SupportWindow {
  std::size_t first{0}, last{0};  // interval index range [first, last)
  bool empty{true};
};

// Observation intervals [t_i, t_{i+1}) that intersect the kernel support
// |t - b| <= a * s_half.
SupportWindow support_window(const std::vector<double>& times, double a,
                             double b, double s_half) {
  SupportWindow w;
  const double lo = b - a * s_half;
  const double hi = b + a * s_half;
  if (times.size() < 2) return w;
  auto it_lo = std::upper_bound(times.begin(), times.end(), lo);
  std::size_t first =
      it_lo == times.begin() ? 0 : (it_lo - times.begin()) - 1;
  auto it_hi = std::lower_bound(times.begin(), times.end(), hi);
  std::size_t last = std::min<std::size_t>(it_hi - times.begin() + 1,
                                           times.size() - 1);
  if (first >= last) return w;
  w.first = first;
  w.last = last;
  w.empty = false;
  return w;
}

double max_abs(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

// Kernel mass treated as zero: everything outside the intersection of the
// cut support and the observed span, in base-wavelet units.
double truncation_mass(const ModulatedWavelet& w, double a, double b,
                       double t0, double tn, double s_half) {
  const double lam = w.lambda();
  const MotherWavelet& base = w.base();
  const double u_lo = std::max((t0 - b) / (a * lam), -s_half / lam);
  const double u_hi = std::min((tn - b) / (a * lam), s_half / lam);
  const double total = base.envelope_tail_l1(0.0);
  double inside = 0.0;
  if (u_hi > u_lo) {
    // envelope_tail_l1 integrates |psi| beyond |t| > u; reconstruct the
    // asymmetric inside-mass from the symmetric tails.
    auto tail = [&](double u) { return base.envelope_tail_l1(std::abs(u)); };
    if (u_lo >= 0.0)
      inside = 0.5 * (tail(u_lo) - tail(u_hi));
    else if (u_hi <= 0.0)
      inside = 0.5 * (tail(u_hi) - tail(u_lo));
    else
      inside = total - 0.5 * (tail(u_lo) + tail(u_hi));
  }
  const double outside = std::max(total - inside, 0.0);
  // L1 in t units of psi_lambda((t-b)/a): a * sqrt(lambda) * du-mass.
  return a * std::sqrt(lam) * outside;
}

}  // namespace

CoeffResult coeff_discrete(const SampledPath& path, const ModulatedWavelet& w,
                           double scale_a, double shift_b,
                           const CoeffOptions& opts) {
  if (!(scale_a > 0.0))
    throw std::invalid_argument("coefficient: scale must be positive");
  const auto& t = path.times;
  const auto& x = path.values;
  const double s_half = w.support_cut(opts.support_cut);
  CoeffResult res;
  auto win = support_window(t, scale_a, shift_b, s_half);
  res.truncation_bound =
      truncation_mass(w, scale_a, shift_b, t.front(), t.back(), s_half) *
      max_abs(x) / std::sqrt(scale_a);
  if (win.empty) return res;

  std::complex<double> acc{0.0, 0.0};
  double qbound = 0.0;
  for (std::size_t i = win.first; i < win.last; ++i) {
    // G_i = int_{t_i}^{t_i+1} psi_lambda((t-b)/a) dt = a int psi_lambda(s) ds.
    const double s0 = (t[i] - shift_b) / scale_a;
    const double s1 = (t[i + 1] - shift_b) / scale_a;
    const double phase = s1 - s0;
    const int panels = 1 + static_cast<int>(phase / 48.0);
    std::complex<double> g{0.0, 0.0};
    for (int p = 0; p < panels; ++p) {
      const double pa = s0 + phase * p / panels;
      const double pb = s0 + phase * (p + 1) / panels;
      const int nodes = std::clamp(2 + static_cast<int>(pb - pa), 2,
                                   opts.max_nodes);
      const auto& rule = gauss_legendre(nodes);
      const double mid = 0.5 * (pa + pb);
      const double half = 0.5 * (pb - pa);
      std::complex<double> sum{0.0, 0.0};
      for (int k = 0; k < nodes; ++k)
        sum += rule.weights[k] * w.eval(mid + half * rule.nodes[k]);
      g += sum * half;
    }
    g *= scale_a;
    acc += g * x[i];
    const int nodes_used = std::clamp(2 + static_cast<int>(phase), 2,
                                      opts.max_nodes);
    qbound += std::abs(g) * std::abs(x[i]) *
              std::pow(0.25 * phase / nodes_used, 2 * nodes_used);
  }
  res.value = acc / std::sqrt(scale_a);
  res.quadrature_bound = qbound / std::sqrt(scale_a);
  return res;
}

CoeffResult coeff_continuous(const SampledPath& path, const ModulatedWavelet& w,
                             double scale_a, double shift_b,
                             const CoeffOptions& opts) {
  if (!(scale_a > 0.0))
    throw std::invalid_argument("coefficient: scale must be positive");
  if (!path.is_regular(1e-6))
    throw std::invalid_argument(
        "coeff_continuous: requires a dense regular path");
  const double delta = path.mean_spacing();
  if (delta / scale_a >= std::numbers::pi / 4.0)
    throw std::invalid_argument(
        "coeff_continuous: grid too coarse; need delta < " +
        std::to_string(scale_a * std::numbers::pi / 4.0));

  const auto& t = path.times;
  const auto& x = path.values;
  const double s_half = w.support_cut(opts.support_cut);
  CoeffResult res;
  auto win = support_window(t, scale_a, shift_b, s_half);
  res.truncation_bound =
      truncation_mass(w, scale_a, shift_b, t.front(), t.back(), s_half) *
      max_abs(x) / std::sqrt(scale_a);
  if (win.empty) return res;

  const auto& rule = gauss_legendre(6);
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = win.first; i < win.last; ++i) {
    const double mid = 0.5 * (t[i] + t[i + 1]);
    const double half = 0.5 * (t[i + 1] - t[i]);
    std::complex<double> sum{0.0, 0.0};
    for (int k = 0; k < 6; ++k) {
      const double tt = mid + half * rule.nodes[k];
      const double frac = (tt - t[i]) / (t[i + 1] - t[i]);
      const double xv = x[i] + frac * (x[i + 1] - x[i]);
      sum += rule.weights[k] * w.eval((tt - shift_b) / scale_a) * xv;
    }
    acc += sum * half;
  }
  res.value = acc / std::sqrt(scale_a);
  return res;
}

double scale_variance(const SampledPath& path, const ModulatedWavelet& w,
                      double scale_a, const ShiftGrid& grid, CoeffMode mode,
                      const CoeffOptions& opts) {
  std::vector<double> sq(grid.shifts.size());
  for (std::size_t k = 0; k < grid.shifts.size(); ++k) {
    const auto c = mode == CoeffMode::Continuous
                       ? coeff_continuous(path, w, scale_a, grid.shifts[k], opts)
                       : coeff_discrete(path, w, scale_a, grid.shifts[k], opts);
    sq[k] = std::norm(c.value);
  }
  return pairwise_sum(sq) / static_cast<double>(sq.size());
}

namespace {

// Integral over the positive-side window of g(xi) * f(xi), with f's band
// edges as breakpoints.
double window_integral(const SpectralModel& model, const ModulatedWavelet& w,
                       double scale_a,
                       const std::function<double(double)>& g) {
  const double lam = w.lambda();
  const double cap = w.base().lambda_cap();
  const double lo = (1.0 - cap / lam) / scale_a;
  const double hi = (1.0 + cap / lam) / scale_a;
  if (!(lo > 0.0))
    throw std::invalid_argument(
        "window integral: lambda must exceed Lambda so the window stays off "
        "zero frequency");
  QuadOptions qo;
  qo.abs_tol = 1e-14;
  qo.rel_tol = 1e-10;
  qo.breakpoints = model.breakpoints();
  return integrate_or_throw(g, lo, hi, qo);
}

}  // namespace

double theoretical_coeff_variance(const SpectralModel& model,
                                  const ModulatedWavelet& w, double scale_a) {
  // E|d|^2 = a int |what(a xi)|^2 f(xi) dxi; the complex kernel lives on the
  // positive window only, the cosine kernel splits evenly over both signs.
  const double sym = w.kernel() == ModulatedWavelet::Kernel::Cosine ? 2.0 : 1.0;
  auto g = [&](double xi) {
    return std::norm(w.freq(scale_a * xi)) * model.density(xi);
  };
  return sym * scale_a * window_integral(model, w, scale_a, g);
}

double asymptotic_scale_variance(const SpectralModel& model,
                                 const ModulatedWavelet& w, double scale_a) {
  const bool cosine = w.kernel() == ModulatedWavelet::Kernel::Cosine;
  const double constant =
      (cosine ? 4.0 : 2.0) * std::numbers::pi * (cosine ? 2.0 : 1.0);
  auto g = [&](double xi) {
    const double w2 = std::norm(w.freq(scale_a * xi));
    const double f = model.density(xi);
    return w2 * w2 * f * f;
  };
  return constant * scale_a * scale_a *
         window_integral(model, w, scale_a, g);
}

void EstimatorConfig::validate() const {
  if (!(alpha > 1.0 / 3.0 && alpha < 1.0))
    throw std::invalid_argument("estimator: alpha must lie in (1/3, 1)");
  if (!(rho > 0.75 && rho < 1.0))
    throw std::invalid_argument("estimator: rho must lie in (3/4, 1)");
  if (frequencies.empty())
    throw std::invalid_argument("estimator: no frequencies given");
  for (double f : frequencies)
    if (!(f > 0.0))
      throw std::invalid_argument("estimator: frequencies must be positive");
  if (!(kappa > 0.0))
    throw std::invalid_argument("estimator: kappa must be positive");
  if (shifts && *shifts < 2)
    throw std::invalid_argument("estimator: need at least 2 shifts");
}

DensityEstimate estimate_density(const SampledPath& path,
                                 const MotherWavelet& mother,
                                 const EstimatorConfig& config) {
  config.validate();
  path.validate();
  const double horizon = path.horizon();
  const double margin = std::pow(horizon, config.rho);
  const double tau = horizon - 2.0 * margin;
  if (!(tau > 0.0))
    throw std::invalid_argument(
        "estimator: horizon too short for rho; need T > " +
        std::to_string(std::pow(2.0, 1.0 / (1.0 - config.rho))));
  const double lambda = std::pow(tau, config.alpha);
  if (lambda <= mother.lambda_cap())
    throw std::invalid_argument(
        "estimator: bandwidth too small (lambda = " + std::to_string(lambda) +
        " <= Lambda); need tau > " +
        std::to_string(std::pow(mother.lambda_cap(), 1.0 / config.alpha)));
  const std::size_t n_shifts = config.shifts.value_or(static_cast<std::size_t>(
      std::ceil(tau * std::max(1.0, std::log(tau)))));
  auto grid = ShiftGrid::build(horizon, config.rho, n_shifts);

  ModulatedWavelet w(mother, lambda, config.kernel);
  const double mu0 = mother.norms().l2_freq;
  const double r_psi = mother.norms().l4_freq / (mu0 * mu0);
  const double kappa_eff =
      config.kappa *
      (config.kernel == ModulatedWavelet::Kernel::Cosine ? 2.0 : 1.0);

  DensityEstimate out;
  out.tau = tau;
  out.lambda = lambda;
  out.shifts = n_shifts;
  out.mode = config.mode;
  out.resolvable_lo = 20.0 * std::numbers::pi / tau;
  out.resolvable_hi =
      std::numbers::pi / (4.0 * path.mean_spacing());

  CoeffOptions copts;
  copts.support_cut = config.support_cut;
  for (double xi : config.frequencies) {
    const double a = 1.0 / xi;
    std::vector<double> sq(grid.shifts.size());
    double trunc = 0.0;
    for (std::size_t k = 0; k < grid.shifts.size(); ++k) {
      const auto c =
          config.mode == CoeffMode::Continuous
              ? coeff_continuous(path, w, a, grid.shifts[k], copts)
              : coeff_discrete(path, w, a, grid.shifts[k], copts);
      sq[k] = std::norm(c.value);
      trunc = std::max(trunc, c.truncation_bound);
    }
    const double i_n = pairwise_sum(sq) / static_cast<double>(sq.size());
    DensityEstimateRow row;
    row.xi = xi;
    row.fhat = kappa_eff * i_n / mu0;
    row.ci_halfwidth =
        1.96 * row.fhat *
        std::sqrt(2.0 * std::numbers::pi * lambda * r_psi / (xi * tau));
    row.in_resolvable_band =
        xi >= out.resolvable_lo && xi <= out.resolvable_hi;
    row.truncation_bound = trunc;
    out.rows.push_back(row);
  }
  return out;
}

MiseExpansion mise_expansion(const SpectralModel& model,
                             const MotherWavelet& mother, double w0, double w1,
                             double tau, double alpha) {
  if (!(w0 > 0.0))
    throw std::domain_error(
        "mise expansion: w0 must be positive (low-frequency blowup)");
  if (!(w1 > w0) || !std::isfinite(w1))
    throw std::domain_error("mise expansion: need w0 < w1 < inf");
  if (!(tau > 0.0) || !(alpha > 1.0 / 3.0 && alpha < 1.0))
    throw std::domain_error("mise expansion: bad tau or alpha");

  const double mu0 = mother.norms().l2_freq;
  const double r_psi = mother.norms().l4_freq / (mu0 * mu0);
  QuadOptions qo;
  qo.breakpoints = model.breakpoints();
  const double var_int = integrate_or_throw(
      [&](double xi) {
        const double f = model.density(xi);
        return f * f / xi;
      },
      w0, w1, qo);
  // f' is undefined at band edges; integrate piecewise between them.
  std::vector<double> cuts{w0, w1};
  for (double e : model.breakpoints())
    if (e > w0 && e < w1) cuts.push_back(e);
  std::sort(cuts.begin(), cuts.end());
  double bias_int = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double eps = 1e-9 * (cuts[i + 1] - cuts[i]);
    bias_int += integrate_or_throw(
        [&](double xi) {
          const double d = model.density_derivative(xi);
          return xi * xi * d * d;
        },
        cuts[i] + eps, cuts[i + 1] - eps);
  }

  MiseExpansion m;
  m.variance_term = 2.0 * std::numbers::pi / std::pow(tau, 1.0 - alpha) *
                    r_psi * var_int;
  m.bias_term = std::pow(tau, -2.0 * alpha) * bias_int;
  m.total = m.variance_term + m.bias_term;
  return m;
}

RateConditionReport check_rate_conditions(double n, double delta, double tau,
                                          double hurst, double s, double alpha,
                                          double small_threshold) {
  if (!(n > 0.0) || !(delta > 0.0) || !(tau > 0.0) || !(hurst > 0.0))
    throw std::invalid_argument("rate conditions: arguments must be positive");
  RateConditionReport rep;
  rep.small_threshold = small_threshold;
  auto verdict = [&](double v) {
    if (v < small_threshold) return std::string("small");
    if (v > 1.0 / small_threshold) return std::string("large");
    return std::string("marginal");
  };
  auto add = [&](const std::string& name, double v) {
    rep.conditions.push_back({name, v, verdict(v)});
  };
  if (std::isinf(s)) {
    add("n * delta^(2+H)", n * std::pow(delta, 2.0 + hurst));
    add("tau * n^(-(1+H)/(2+H))",
        tau * std::pow(n, -(1.0 + hurst) / (2.0 + hurst)));
  } else {
    const double e1 = 2.0 + hurst - (hurst + 1.0) * (hurst + 1.0) / (hurst + s);
    add("n * delta^(2+H-(H+1)^2/(H+s))", n * std::pow(delta, e1));
    const double e2 = (s * (hurst + 1.0) + 2.0 * alpha) /
                      (s * (hurst + 2.0) - 1.0 + alpha * (1.0 - hurst));
    add("tau * n^(-(s(H+1)+2a)/(s(H+2)-1+a(1-H)))", tau * std::pow(n, -e2));
  }
  rep.moment_threshold =
      3.0 + std::max({2.0 * hurst - 1.0, 1.0 / (2.0 * hurst) - 1.5, 0.0});
  rep.moment_ok = s >= rep.moment_threshold;
  return rep;
}

double window_expansion_residual(const SpectralModel& model,
                                 const MotherWavelet& mother, double lambda,
                                 double scale_a) {
  ModulatedWavelet w(mother, lambda);
  const double mu0 = mother.norms().l2_freq;
  const double i_val = theoretical_coeff_variance(model, w, scale_a) / mu0;
  const double x0 = 1.0 / scale_a;
  const double first_order = (mother.norms().mu1 / mu0) *
                             model.density_derivative(x0) /
                             (scale_a * lambda);
  return std::abs(i_val - model.density(x0) - first_order);
}

}  // namespace specwave
