#include "specwave/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "specwave/quadrature.hpp"

namespace specwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Oscillatory integrals switch to the boundary asymptotic series once
// t * xi exceeds this.
constexpr double kOscCut = 200.0 * std::numbers::pi;

double powc(double x, double p) { return std::exp(p * std::log(x)); }

// Integral over (0, eps] of (2 - 2cos(t xi)) c xi^-p via the cosine series;
// requires t*eps <= ~1 and p < 3.
double pole_series(double c, double p, double t, double eps) {
  double sum = 0.0;
  double t2k = 1.0;     // t^{2k}
  double fact = 1.0;    // (2k)!
  for (int k = 1; k <= 60; ++k) {
    t2k *= t * t;
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double expo = 2.0 * k + 1.0 - p;
    const double term = ((k % 2 == 1) ? 1.0 : -1.0) * t2k *
                        powc(eps, expo) / (fact * expo);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return 2.0 * c * sum;
}

// Integral over [x, inf) of cos(t xi) xi^-p, p > 0, valid for t*x >> 1.
// Repeated integration by parts; remainder bounded by |g^(K-1)(x)| / t^K.
double asym_cos_tail(double p, double t, double x) {
  const double s = std::sin(t * x);
  const double co = std::cos(t * x);
  double gk = powc(x, -p);  // g^(k)(x), updated in the loop
  double sum = 0.0;
  double tpow = t;
  double prev_g_abs = 0.0;
  for (int k = 0; k < 16; ++k) {
    const int m = k % 4;
    const double sign = (m == 0 || m == 1) ? -1.0 : 1.0;
    const double trig = (k % 2 == 0) ? s : co;
    sum += sign * gk * trig / tpow;
    prev_g_abs = std::abs(gk);
    gk *= -(p + k) / x;
    tpow *= t;
    if (prev_g_abs / tpow < 1e-17 * (1.0 + std::abs(sum))) break;
  }
  (void)prev_g_abs;
  return sum;
}

std::vector<double> osc_breakpoints(double t, double a, double b) {
  std::vector<double> pts;
  if (t <= 0.0) return pts;
  const double step = std::numbers::pi / t;
  if ((b - a) / step > 4096) return pts;  // caller handles via asymptotics
  for (double x = a + step; x < b; x += step) pts.push_back(x);
  return pts;
}

}  // namespace

double fbm_scale_constant(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::domain_error("fbm_scale_constant: H must lie in (0,1), got " +
                            std::to_string(hurst));
  return std::numbers::pi /
         (hurst * std::tgamma(2.0 * hurst) * std::sin(std::numbers::pi * hurst));
}

SpectralModel SpectralModel::power_law(double hurst,
                                       std::optional<double> sigma2) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::domain_error("power_law: H must lie in (0,1), got " +
                            std::to_string(hurst));
  const double s2 = sigma2.value_or(fbm_scale_constant(hurst));
  if (!(s2 > 0.0) || !std::isfinite(s2))
    throw std::domain_error("power_law: sigma2 must be positive");
  SpectralModel m;
  m.kind_ = ModelKind::PowerLaw;
  m.bands_.push_back({0.0, hurst, s2 / fbm_scale_constant(hurst)});
  m.validate_and_finalize();
  return m;
}

SpectralModel SpectralModel::band_limited_constant(double value, double w0,
                                                   double w1) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::domain_error("band_limited_constant: value must be positive");
  if (!(0.0 <= w0 && w0 < w1) || !std::isfinite(w1))
    throw std::domain_error("band_limited_constant: need 0 <= w0 < w1");
  SpectralModel m;
  m.kind_ = ModelKind::BandLimitedConstant;
  m.bl_value_ = value;
  m.bl_lo_ = w0;
  m.bl_hi_ = w1;
  m.validate_and_finalize();
  return m;
}

SpectralModel SpectralModel::piecewise_power_law(
    const std::vector<std::pair<double, double>>& edge_hurst,
    double first_multiplier) {
  if (edge_hurst.empty())
    throw std::domain_error("piecewise_power_law: at least one band required");
  if (!(first_multiplier > 0.0) || !std::isfinite(first_multiplier))
    throw std::domain_error("piecewise_power_law: multiplier must be positive");
  SpectralModel m;
  m.kind_ = ModelKind::PiecewisePowerLaw;
  double c = first_multiplier;
  for (size_t i = 0; i < edge_hurst.size(); ++i) {
    const auto [edge, hurst] = edge_hurst[i];
    if (!(edge >= 0.0) || !std::isfinite(edge))
      throw std::domain_error("piecewise_power_law: edges must be finite, >= 0");
    if (i > 0) {
      if (!(edge > edge_hurst[i - 1].first))
        throw std::domain_error(
            "piecewise_power_law: edges must be strictly increasing");
      // Continuity at the interior edge: c_i e^{-(2H_i+1)} = c_{i+1} e^{-(2H_{i+1}+1)}.
      c *= powc(edge, 2.0 * (hurst - edge_hurst[i - 1].second));
    }
    if (!(hurst > 0.0) || !std::isfinite(hurst))
      throw std::domain_error("piecewise_power_law: band H must be positive");
    m.bands_.push_back({edge, hurst, c});
  }
  if (m.bands_.front().edge == 0.0 && !(m.bands_.front().hurst < 1.0))
    throw std::domain_error(
        "piecewise_power_law: the band touching 0 needs H < 1 for (F1)");
  m.validate_and_finalize();
  return m;
}

SpectralModel SpectralModel::tabulated(std::vector<double> xi,
                                       std::vector<double> f) {
  if (xi.size() != f.size() || xi.size() < 2)
    throw std::domain_error("tabulated: need matching grids of size >= 2");
  if (!(xi.front() > 0.0))
    throw std::domain_error("tabulated: grid must start at xi > 0");
  for (size_t i = 0; i < xi.size(); ++i) {
    if (i > 0 && !(xi[i] > xi[i - 1]))
      throw std::domain_error("tabulated: xi grid must be strictly increasing");
    if (!(f[i] >= 0.0) || !std::isfinite(f[i]))
      throw std::domain_error("tabulated: density values must be finite, >= 0");
  }
  SpectralModel m;
  m.kind_ = ModelKind::Tabulated;
  m.tab_xi_ = std::move(xi);
  m.tab_f_ = std::move(f);
  m.validate_and_finalize();
  return m;
}

bool SpectralModel::has_pole_at_zero() const {
  return (kind_ == ModelKind::PowerLaw ||
          kind_ == ModelKind::PiecewisePowerLaw) &&
         bands_.front().edge == 0.0;
}

bool SpectralModel::compact_support() const {
  return kind_ == ModelKind::BandLimitedConstant ||
         kind_ == ModelKind::Tabulated;
}

double SpectralModel::last_edge() const {
  switch (kind_) {
    case ModelKind::PowerLaw:
      return 0.0;
    case ModelKind::PiecewisePowerLaw:
      return bands_.back().edge;
    case ModelKind::BandLimitedConstant:
      return bl_hi_;
    case ModelKind::Tabulated:
      return tab_xi_.back();
  }
  return 0.0;
}

std::vector<double> SpectralModel::breakpoints() const {
  switch (kind_) {
    case ModelKind::PowerLaw:
      return {};
    case ModelKind::PiecewisePowerLaw: {
      std::vector<double> e;
      for (const auto& b : bands_)
        if (b.edge > 0.0) e.push_back(b.edge);
      return e;
    }
    case ModelKind::BandLimitedConstant:
      return {bl_lo_, bl_hi_};
    case ModelKind::Tabulated:
      return tab_xi_;
  }
  return {};
}

double SpectralModel::tail_hurst() const {
  switch (kind_) {
    case ModelKind::PowerLaw:
    case ModelKind::PiecewisePowerLaw:
      return bands_.back().hurst;
    default:
      // Compact support: any H > 0 bounds the (vanishing) tail.
      return 1.0;
  }
}

double SpectralModel::band_density(double axi) const {
  if (axi < bands_.front().edge) return 0.0;
  size_t i = bands_.size() - 1;
  while (i > 0 && axi < bands_[i].edge) --i;
  return bands_[i].multiplier * powc(axi, -(2.0 * bands_[i].hurst + 1.0));
}

double SpectralModel::density(double xi) const {
  const double axi = std::abs(xi);
  switch (kind_) {
    case ModelKind::PowerLaw:
    case ModelKind::PiecewisePowerLaw:
      if (axi == 0.0) {
        if (has_pole_at_zero())
          throw std::domain_error(
              "density: power-law model has a pole at xi = 0");
        return 0.0;
      }
      return band_density(axi);
    case ModelKind::BandLimitedConstant:
      return (axi >= bl_lo_ && axi <= bl_hi_) ? bl_value_ : 0.0;
    case ModelKind::Tabulated: {
      if (axi < tab_xi_.front() || axi > tab_xi_.back()) return 0.0;
      auto it = std::upper_bound(tab_xi_.begin(), tab_xi_.end(), axi);
      size_t hi = std::min<size_t>(it - tab_xi_.begin(), tab_xi_.size() - 1);
      size_t lo = hi - (hi > 0 ? 1 : 0);
      if (hi == lo) return tab_f_[lo];
      const double w = (axi - tab_xi_[lo]) / (tab_xi_[hi] - tab_xi_[lo]);
      return tab_f_[lo] + w * (tab_f_[hi] - tab_f_[lo]);
    }
  }
  return 0.0;
}

double SpectralModel::density_derivative(double xi) const {
  if (!(xi > 0.0))
    throw std::domain_error("density_derivative: xi must be positive");
  auto near = [xi](double edge) {
    return std::abs(xi - edge) <= 1e-12 * std::max(1.0, std::abs(edge));
  };
  for (double e : breakpoints())
    if (near(e))
      throw std::domain_error(
          "density_derivative: non-differentiable point at band edge " +
          std::to_string(e));
  switch (kind_) {
    case ModelKind::PowerLaw:
    case ModelKind::PiecewisePowerLaw: {
      if (xi < bands_.front().edge) return 0.0;
      size_t i = bands_.size() - 1;
      while (i > 0 && xi < bands_[i].edge) --i;
      const double p = 2.0 * bands_[i].hurst + 1.0;
      return -p * bands_[i].multiplier * powc(xi, -(p + 1.0));
    }
    case ModelKind::BandLimitedConstant:
      return 0.0;
    case ModelKind::Tabulated: {
      if (xi < tab_xi_.front() || xi > tab_xi_.back()) return 0.0;
      auto it = std::upper_bound(tab_xi_.begin(), tab_xi_.end(), xi);
      size_t hi = std::min<size_t>(it - tab_xi_.begin(), tab_xi_.size() - 1);
      size_t lo = hi - 1;
      return (tab_f_[hi] - tab_f_[lo]) / (tab_xi_[hi] - tab_xi_[lo]);
    }
  }
  return 0.0;
}

namespace {

// Integral over [a,b] (b may be +inf) of (2 - 2cos(t xi)) * c * xi^-p.
// a == 0 requires p < 3; splits into pole series / oscillation panels /
// closed-form and asymptotic tails.
double power_piece(double c, double p, double t, double a, double b) {
  if (t == 0.0 || c == 0.0) return 0.0;
  if (a == 0.0) {
    const double eps = std::min(b, 0.5 / t);
    double s = pole_series(c, p, t, eps);
    if (b > eps) s += power_piece(c, p, t, eps, b);
    return s;
  }
  auto integrand = [c, p, t](double x) {
    return (2.0 - 2.0 * std::cos(t * x)) * c * powc(x, -p);
  };
  if (b == kInf) {
    const double cut = std::max(a, kOscCut / t);
    double s = 0.0;
    if (cut > a) s += power_piece(c, p, t, a, cut);
    s += 2.0 * c * powc(cut, 1.0 - p) / (p - 1.0);
    s -= 2.0 * c * asym_cos_tail(p, t, cut);
    return s;
  }
  if (t * (b - a) <= 4096 * std::numbers::pi) {
    QuadOptions opts;
    opts.breakpoints = osc_breakpoints(t, a, b);
    return integrate_or_throw(integrand, a, b, opts);
  }
  // Long oscillatory stretch: numeric head, boundary asymptotics past it.
  const double mid = std::min(b, std::max(a, kOscCut / t));
  double s = 0.0;
  if (mid > a) {
    QuadOptions opts;
    opts.breakpoints = osc_breakpoints(t, a, mid);
    s += integrate_or_throw(integrand, a, mid, opts);
  }
  if (b > mid) {
    double dc;
    if (p == 1.0)
      dc = 2.0 * c * std::log(b / mid);
    else
      dc = 2.0 * c * (powc(mid, 1.0 - p) - powc(b, 1.0 - p)) / (p - 1.0);
    s += dc;
    if (p == 0.0)
      s -= 2.0 * c * (std::sin(t * b) - std::sin(t * mid)) / t;
    else
      s -= 2.0 * c * (asym_cos_tail(p, t, mid) - asym_cos_tail(p, t, b));
  }
  return s;
}

}  // namespace

double SpectralModel::increment_variance(double t) const {
  if (kind_ == ModelKind::PowerLaw) {
    const double h = bands_.front().hurst;
    const double sigma2 = bands_.front().multiplier * fbm_scale_constant(h);
    return t == 0.0 ? 0.0 : sigma2 * powc(std::abs(t), 2.0 * h);
  }
  return increment_variance_quadrature(t);
}

double SpectralModel::increment_variance_quadrature(double t) const {
  t = std::abs(t);
  if (t == 0.0) return 0.0;
  double w = 0.0;  // one-sided integral; v = 2w by evenness
  switch (kind_) {
    case ModelKind::PowerLaw:
    case ModelKind::PiecewisePowerLaw: {
      for (size_t i = 0; i < bands_.size(); ++i) {
        const double lo = bands_[i].edge;
        const double hi =
            (i + 1 < bands_.size()) ? bands_[i + 1].edge : kInf;
        w += power_piece(bands_[i].multiplier, 2.0 * bands_[i].hurst + 1.0, t,
                         lo, hi);
      }
      break;
    }
    case ModelKind::BandLimitedConstant:
      w += power_piece(bl_value_, 0.0, t, bl_lo_, bl_hi_);
      break;
    case ModelKind::Tabulated: {
      auto integrand = [this, t](double x) {
        return (2.0 - 2.0 * std::cos(t * x)) * density(x);
      };
      QuadOptions opts;
      opts.breakpoints = tab_xi_;
      auto extra = osc_breakpoints(t, tab_xi_.front(), tab_xi_.back());
      opts.breakpoints.insert(opts.breakpoints.end(), extra.begin(),
                              extra.end());
      w += integrate_or_throw(integrand, tab_xi_.front(), tab_xi_.back(), opts);
      break;
    }
  }
  return 2.0 * w;
}

void SpectralModel::validate_and_finalize() {
  ModelValidation v;
  // (F1): one-sided integral of (1 ^ xi^2) f; finiteness is what matters.
  // Power pieces in closed form, compact kinds numerically.
  auto power_f1 = [](double c, double p, double a, double b) {
    // integral over [a,b] of (1 ^ xi^2) c xi^-p with the kink at xi=1.
    double s = 0.0;
    const double lo2 = std::min(b, 1.0);
    if (a < lo2) {
      const double e = 3.0 - p;
      if (e <= 0.0 && a == 0.0) return kInf;
      s += (e == 0.0) ? c * std::log(lo2 / std::max(a, 1e-300))
                      : c * (powc(lo2, e) - (a > 0 ? powc(a, e) : 0.0)) / e;
    }
    const double hi1 = std::max(a, 1.0);
    if (b > hi1) {
      const double e = 1.0 - p;
      if (b == kInf) {
        if (e >= 0.0) return kInf;
        s += -c * powc(hi1, e) / e;
      } else {
        s += (e == 0.0) ? c * std::log(b / hi1)
                        : c * (powc(b, e) - powc(hi1, e)) / e;
      }
    }
    return s;
  };
  switch (kind_) {
    case ModelKind::PowerLaw:
    case ModelKind::PiecewisePowerLaw: {
      double f1 = 0.0, f2 = 0.0;
      for (size_t i = 0; i < bands_.size(); ++i) {
        const double lo = bands_[i].edge;
        const double hi = (i + 1 < bands_.size()) ? bands_[i + 1].edge : kInf;
        const double p = 2.0 * bands_[i].hurst + 1.0;
        f1 += power_f1(bands_[i].multiplier, p, lo, hi);
      }
      // (F2): integral of (1 ^ xi^3) |f'| with |f'| = p c xi^-(p+1).
      for (size_t i = 0; i < bands_.size() && std::isfinite(f2); ++i) {
        const double lo = bands_[i].edge;
        const double hi = (i + 1 < bands_.size()) ? bands_[i + 1].edge : kInf;
        const double p = 2.0 * bands_[i].hurst + 1.0;
        const double cd = p * bands_[i].multiplier;  // |f'| constant
        // integral of (1 ^ xi^3) cd xi^-(p+1): kink at 1.
        double s = 0.0;
        const double lo2 = std::min(hi, 1.0);
        if (lo < lo2) {
          const double e = 3.0 - p;  // xi^3 * xi^-(p+1) = xi^(2-p)
          if (e <= 0.0 && lo == 0.0) {
            s = kInf;
          } else {
            s += (e == 0.0)
                     ? cd * std::log(lo2 / std::max(lo, 1e-300))
                     : cd * (powc(lo2, e) - (lo > 0 ? powc(lo, e) : 0.0)) / e;
          }
        }
        const double hi1 = std::max(lo, 1.0);
        if (std::isfinite(s) && hi > hi1) {
          const double e = -p;  // xi^-(p+1) integrated
          if (hi == kInf)
            s += -cd * powc(hi1, e) / e;
          else
            s += cd * (powc(hi, e) - powc(hi1, e)) / e;
        }
        f2 += s;
      }
      v.f1_integral = f1;
      v.f2_deriv_integral = f2;
      break;
    }
    case ModelKind::BandLimitedConstant: {
      auto w = [this](double x) {
        return std::min(1.0, x * x) * bl_value_;
      };
      v.f1_integral = adaptive_integrate(w, bl_lo_, bl_hi_).value;
      v.f2_deriv_integral = 0.0;
      break;
    }
    case ModelKind::Tabulated: {
      auto w = [this](double x) { return std::min(1.0, x * x) * density(x); };
      QuadOptions opts;
      opts.breakpoints = tab_xi_;
      v.f1_integral =
          adaptive_integrate(w, tab_xi_.front(), tab_xi_.back(), opts).value;
      double d = 0.0;
      for (size_t i = 0; i + 1 < tab_xi_.size(); ++i) {
        const double mid = 0.5 * (tab_xi_[i] + tab_xi_[i + 1]);
        d += std::min(1.0, mid * mid * mid) *
             std::abs(tab_f_[i + 1] - tab_f_[i]);
      }
      v.f2_deriv_integral = d;
      break;
    }
  }
  v.f1_ok = std::isfinite(v.f1_integral);
  v.f2_ok = std::isfinite(v.f2_deriv_integral);
  if (!v.f1_ok)
    throw std::domain_error(
        "spectral model rejected: (F1) integral of (1^xi^2) f diverges");

  // (F2) high-frequency control, checked on a log-spaced grid.
  const double h = tail_hurst();
  const double start = std::max(last_edge(), 1e-3);
  double c0 = 0.0, c0p = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double xi = start * std::pow(10.0, 0.1 * k);
    const double fx = compact_support() && xi > last_edge() ? 0.0 : density(xi);
    c0 = std::max(c0, fx * powc(xi, 2.0 * h + 1.0));
    if (!compact_support()) {
      bool on_edge = false;
      for (double e : breakpoints())
        if (std::abs(xi - e) <= 1e-12 * std::max(1.0, e)) on_edge = true;
      if (!on_edge)
        c0p = std::max(c0p, std::abs(density_derivative(xi)) *
                                powc(xi, 2.0 * h + 2.0));
    }
  }
  v.tail_c0 = c0;
  v.tail_c0p = c0p;
  if (!v.f2_ok) v.notes += "(F2) derivative integral diverges; ";
  validation_ = v;
}

SpectralModel SpectralModel::from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power-law") {
    std::optional<double> s2;
    if (j.contains("sigma2")) s2 = j.at("sigma2").get<double>();
    return power_law(j.at("H").get<double>(), s2);
  }
  if (kind == "band-limited-constant") {
    const auto band = j.at("band");
    return band_limited_constant(j.at("value").get<double>(),
                                 band.at(0).get<double>(),
                                 band.at(1).get<double>());
  }
  if (kind == "piecewise-power-law") {
    std::vector<std::pair<double, double>> eh;
    double mult = 1.0;
    bool got_mult = false;
    for (const auto& b : j.at("bands")) {
      eh.emplace_back(b.at("edge").get<double>(), b.at("H").get<double>());
      if (!got_mult && b.contains("sigma2")) {
        mult = b.at("sigma2").get<double>();
        got_mult = true;
      }
    }
    return piecewise_power_law(eh, mult);
  }
  if (kind == "tabulated") {
    return tabulated(j.at("xi").get<std::vector<double>>(),
                     j.at("f").get<std::vector<double>>());
  }
  throw std::invalid_argument("unknown spectral model kind: " + kind);
}

SpectralModel SpectralModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string SpectralModel::to_json_text() const {
  nlohmann::json j;
  switch (kind_) {
    case ModelKind::PowerLaw:
      j["kind"] = "power-law";
      j["H"] = bands_.front().hurst;
      j["sigma2"] =
          bands_.front().multiplier * fbm_scale_constant(bands_.front().hurst);
      break;
    case ModelKind::PiecewisePowerLaw: {
      j["kind"] = "piecewise-power-law";
      auto arr = nlohmann::json::array();
      for (size_t i = 0; i < bands_.size(); ++i) {
        nlohmann::json b;
        b["edge"] = bands_[i].edge;
        b["H"] = bands_[i].hurst;
        if (i == 0) b["sigma2"] = bands_[i].multiplier;
        arr.push_back(b);
      }
      j["bands"] = arr;
      break;
    }
    case ModelKind::BandLimitedConstant:
      j["kind"] = "band-limited-constant";
      j["value"] = bl_value_;
      j["band"] = {bl_lo_, bl_hi_};
      break;
    case ModelKind::Tabulated:
      j["kind"] = "tabulated";
      j["xi"] = tab_xi_;
      j["f"] = tab_f_;
      break;
  }
  j["tail"] = {{"H", tail_hurst()},
               {"C0", validation_.tail_c0},
               {"C0_prime", validation_.tail_c0p}};
  return j.dump(2);
}

}  // namespace specwave
