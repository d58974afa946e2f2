#pragma once

#include <optional>
#include <string>
#include <vector>

namespace specwave {

enum class ModelKind { PowerLaw, PiecewisePowerLaw, BandLimitedConstant, Tabulated };

/// One power-law band [edge, next_edge) with density multiplier * |xi|^-(2H+1).
/// `multiplier` is the effective constant of the band; for piecewise models
/// all multipliers after the first are solved so f is continuous at interior
/// edges.
struct SpectralBand {
  double edge{0.0};
  double hurst{0.5};
  double multiplier{1.0};
};

/// sigma^2 = pi / (H Gamma(2H) sin(pi H)); the scale making the fBm spectral
/// density with parameters (H, sigma^2) equal exactly |xi|^-(1+2H), and
/// equivalently making E X(t)^2 = sigma^2 |t|^{2H} hold for that density.
double fbm_scale_constant(double hurst);

struct ModelValidation {
  double f1_integral{0.0};      // integral of (1 ^ xi^2) f
  bool f1_ok{false};
  double f2_deriv_integral{0.0};  // integral of (1 ^ xi^3) |f'|
  bool f2_ok{false};
  double tail_c0{0.0};   // sup f(xi) xi^(2H+1) on a log grid past the last edge
  double tail_c0p{0.0};  // same for |f'| with exponent 2H+2
  std::string notes;
};

/// Even, nonnegative spectral density with stationary-increment semantics.
/// Immutable after construction; all evaluations are pure.
class SpectralModel {
 public:
  /// f(xi) = (H Gamma(2H) sin(pi H) / pi) sigma2 |xi|^-(2H+1); H in (0,1).
  /// Omitting sigma2 picks fbm_scale_constant(H), i.e. f = |xi|^-(1+2H).
  static SpectralModel power_law(double hurst,
                                 std::optional<double> sigma2 = std::nullopt);
  /// f = value on [w0,w1] (and its mirror), 0 elsewhere.
  static SpectralModel band_limited_constant(double value, double w0, double w1);
  /// Bands given by strictly increasing left edges; the first band's
  /// multiplier is `first_multiplier`, later ones are solved for continuity.
  /// A first edge > 0 means f = 0 below it; the last band extends to
  /// infinity. Hurst exponents may exceed 1 only on bands bounded away
  /// from 0.
  static SpectralModel piecewise_power_law(
      const std::vector<std::pair<double, double>>& edge_hurst,
      double first_multiplier);
  /// Piecewise-linear nonnegative density on a strictly increasing grid,
  /// 0 outside the grid span.
  static SpectralModel tabulated(std::vector<double> xi, std::vector<double> f);

  /// JSON document, e.g. {"kind":"power-law","H":0.2} or
  /// {"kind":"band-limited-constant","value":2.0,"band":[1,4]}.
  static SpectralModel from_json_text(const std::string& text);
  static SpectralModel load(const std::string& path);
  std::string to_json_text() const;

  ModelKind kind() const { return kind_; }
  const std::vector<SpectralBand>& bands() const { return bands_; }
  bool has_pole_at_zero() const;
  bool compact_support() const;
  /// Largest structural frequency (last edge / support end); 0 for power-law.
  double last_edge() const;
  /// Frequencies where f is not C^1 (band edges, tabulation nodes).
  std::vector<double> breakpoints() const;
  /// Tail exponent H of the last band (condition (F2)).
  double tail_hurst() const;

  /// f(|xi|). Throws std::domain_error at xi = 0 when the model has a pole.
  double density(double xi) const;
  /// f'(xi) for xi > 0, away from band edges (throws otherwise).
  double density_derivative(double xi) const;
  /// v(t) = E X(t)^2 = integral of |e^{it xi}-1|^2 f(xi) dxi over R.
  /// Closed form for pure power-law models, adaptive quadrature otherwise.
  double increment_variance(double t) const;
  /// Always the quadrature engine (power-law tail handled in closed form);
  /// the cross-check route for the closed-form fast path.
  double increment_variance_quadrature(double t) const;

  const ModelValidation& validation() const { return validation_; }

 private:
  SpectralModel() = default;
  void validate_and_finalize();
  double band_density(double axi) const;

  ModelKind kind_{ModelKind::PowerLaw};
  std::vector<SpectralBand> bands_;   // power-law representation
  double bl_value_{0.0}, bl_lo_{0.0}, bl_hi_{0.0};  // band-limited-constant
  std::vector<double> tab_xi_, tab_f_;              // tabulated
  ModelValidation validation_;
};

}  // namespace specwave
