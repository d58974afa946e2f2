#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "specwave/path.hpp"
#include "specwave/spectral_model.hpp"
#include "specwave/wavelet.hpp"

namespace specwave {

/// Uniform shift family b_k = T^rho + (k-1)/(N-1) * tau inside
/// [T^rho, T - T^rho], tau = T - 2 T^rho.
struct ShiftGrid {
  std::vector<double> shifts;
  double tau{0.0};

  static ShiftGrid build(double horizon, double rho, std::size_t count);
};

struct CoeffOptions {
  /// Intervals where the kernel envelope falls below this relative level
  /// are skipped; the skipped mass enters the truncation bound.
  double support_cut{1e-6};
  int max_nodes{64};
};

struct CoeffResult {
  std::complex<double> value{0.0, 0.0};
  double truncation_bound{0.0};
  double quadrature_bound{0.0};
};

/// Continuous-quadrature wavelet coefficient
///   a^{-1/2} int psi_lambda((t-b)/a) X(t) dt
/// on a dense regular path (linear interpolation between samples); the
/// validation oracle for the discretized form. Throws when the grid
/// oscillation per gap exceeds pi/4.
CoeffResult coeff_continuous(const SampledPath& path, const ModulatedWavelet& w,
                             double scale_a, double shift_b,
                             const CoeffOptions& opts = {});

/// Discretized coefficient
///   a^{-1/2} sum_i (int_{t_i}^{t_{i+1}} psi_lambda((t-b)/a) dt) X(t_i)
/// with per-interval Gauss rules sized to the phase advance.
CoeffResult coeff_discrete(const SampledPath& path, const ModulatedWavelet& w,
                           double scale_a, double shift_b,
                           const CoeffOptions& opts = {});

enum class CoeffMode { Continuous, Discrete };

/// Empirical scale variance I_N(a): mean of squared coefficient moduli over
/// the shift family.
double scale_variance(const SampledPath& path, const ModulatedWavelet& w,
                      double scale_a, const ShiftGrid& grid, CoeffMode mode,
                      const CoeffOptions& opts = {});

/// E |d(a,.)|^2 = a int |what(a xi)|^2 f(xi) dxi by adaptive quadrature
/// (the frequency-representation oracle for coefficient variances).
double theoretical_coeff_variance(const SpectralModel& model,
                                  const ModulatedWavelet& w, double scale_a);

/// Limit of tau * Var I_N(a): C pi a^2 int |what(a x)|^4 f(x)^2 dx with
/// C = 4 for a real (cosine) kernel and C = 2 for the complex kernel, whose
/// coefficients are proper complex Gaussians.
double asymptotic_scale_variance(const SpectralModel& model,
                                 const ModulatedWavelet& w, double scale_a);

struct EstimatorConfig {
  double alpha{0.6};  // bandwidth exponent, lambda = tau^alpha, in (1/3,1)
  double rho{0.8};    // edge-margin exponent of the shift family, in (3/4,1)
  std::optional<std::size_t> shifts;  // N; default ceil(tau log tau)
  std::vector<double> frequencies;
  ModulatedWavelet::Kernel kernel{ModulatedWavelet::Kernel::ComplexExp};
  CoeffMode mode{CoeffMode::Discrete};
  /// Calibrated normalization: fhat = kappa * I_N / ||psihat||^2 (doubled
  /// for the cosine kernel, which carries half the quadratic energy).
  double kappa{1.0};
  double support_cut{1e-6};

  void validate() const;
};

struct DensityEstimateRow {
  double xi{0.0};
  double fhat{0.0};
  double ci_halfwidth{0.0};
  bool in_resolvable_band{true};
  double truncation_bound{0.0};
};

struct DensityEstimate {
  std::vector<DensityEstimateRow> rows;
  double tau{0.0};
  double lambda{0.0};
  std::size_t shifts{0};
  double resolvable_lo{0.0}, resolvable_hi{0.0};
  CoeffMode mode{CoeffMode::Discrete};
};

/// Pointwise spectral density estimate over config.frequencies.
DensityEstimate estimate_density(const SampledPath& path,
                                 const MotherWavelet& mother,
                                 const EstimatorConfig& config);

struct MiseExpansion {
  double variance_term{0.0};
  double bias_term{0.0};
  double total{0.0};
};

/// Leading MISE terms over [w0, w1]:
///   variance = (2 pi / tau^(1-alpha)) (l4/l2^2) int f^2(xi)/xi dxi,
///   bias     = tau^(-2 alpha) int xi^2 f'(xi)^2 dxi.
MiseExpansion mise_expansion(const SpectralModel& model,
                             const MotherWavelet& mother, double w0, double w1,
                             double tau, double alpha);

struct RateCondition {
  std::string name;
  double value{0.0};
  std::string verdict;  // small | marginal | large
};

struct RateConditionReport {
  std::vector<RateCondition> conditions;
  double moment_threshold{0.0};  // minimal s required by the moment bound
  bool moment_ok{false};
  double small_threshold{0.1};
};

/// Finite-sample proxies for the discretization-rate conditions; s may be
/// infinity. Diagnostic only.
RateConditionReport check_rate_conditions(double n, double delta, double tau,
                                          double hurst, double s, double alpha,
                                          double small_threshold = 0.1);

/// Window-expansion residual
///   | I(a)/||psihat||^2 - f(1/a) - (mu1/mu0) f'(1/a)/(a lambda) |
/// with I by exact quadrature; the remainder is O(lambda^-2) for f smooth
/// near 1/a (mu1 = 0 for even windows, where the first-order term drops).
double window_expansion_residual(const SpectralModel& model,
                                 const MotherWavelet& mother, double lambda,
                                 double scale_a);

}  // namespace specwave
