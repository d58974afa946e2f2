#pragma once

#include <cstdint>
#include <vector>

#include "specwave/path.hpp"
#include "specwave/spectral_model.hpp"

namespace specwave {

/// Cov(X(s), X(t)) = (v(s) + v(t) - v(t-s)) / 2 with v the increment
/// variance; X(0) = 0 almost surely.
double covariance(const SpectralModel& model, double s, double t);

enum class SimMethod {
  Auto,
  /// Exact: Cholesky of the full covariance with diagonal jitter escalation.
  Dense,
  /// Exact on regular grids: circulant embedding of the increment sequence.
  CirculantRegular,
  /// Compact-support models at arbitrary times: exact stationary grid
  /// simulation plus Kaiser-windowed sinc interpolation (band-limited paths
  /// are determined by oversampled samples; kernel error ~1e-7).
  BandLimited,
  /// Arbitrary times at large n: exact circulant fine grid plus exact
  /// two-point bridge conditioning into each cell. Neighbour conditioning
  /// ignores longer-range corrections; the covariance error is documented
  /// and checked in tests.
  FineGridBridge,
};

struct SimulateOptions {
  SimMethod method{SimMethod::Auto};
  /// Dense factorization refuses beyond this many points.
  std::size_t dense_limit{20000};
  /// Auto picks Dense for irregular times up to this size.
  std::size_t auto_dense_cutoff{4000};
  /// FineGridBridge grid spacing; 0 means mean_spacing / 64.
  double fine_dt{0.0};
  /// BandLimited grid oversampling factor (grid Nyquist / band edge).
  double oversample{2.5};
  /// BandLimited interpolation kernel half-width in taps.
  int kaiser_halfwidth{12};
};

/// One draw of the centered Gaussian vector with the model's exact
/// stationary-increment covariance at `times` (strictly increasing, t_0 = 0;
/// values[0] = 0). Reproducible given (model, times, seed, method); the
/// value stream is independent of any stream used to draw the times.
SampledPath simulate_path(const SpectralModel& model,
                          const std::vector<double>& times, std::uint64_t seed,
                          const SimulateOptions& opts = {});

}  // namespace specwave
