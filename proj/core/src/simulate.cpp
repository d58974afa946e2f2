#include "specwave/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "specwave/fft.hpp"
#include "specwave/quadrature.hpp"
#include "specwave/rng.hpp"

namespace specwave {

bool SampledPath::is_regular(double rel_tol) const {
  if (times.size() < 3) return true;
  const double d = mean_spacing();
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] - times[i - 1] - d) > rel_tol * d) return false;
  return true;
}

double covariance(const SpectralModel& model, double s, double t) {
  if (s == 0.0 || t == 0.0) return 0.0;
  return 0.5 * (model.increment_variance(s) + model.increment_variance(t) -
                model.increment_variance(t - s));
}

namespace {

bool times_regular(const std::vector<double>& times, double rel_tol = 1e-9) {
  if (times.size() < 3) return true;
  const double d = times.back() / static_cast<double>(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] - times[i - 1] - d) > rel_tol * d) return false;
  return true;
}

void validate_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("simulate: no times given");
  if (times.front() != 0.0)
    throw std::invalid_argument("simulate: times must start at t_0 = 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("simulate: times must be strictly increasing");
}

SampledPath dense_path(const SpectralModel& model,
                       const std::vector<double>& times, std::uint64_t seed,
                       const SimulateOptions& opts) {
  const std::size_t n = times.size() - 1;  // non-zero times
  if (times.size() > opts.dense_limit)
    throw std::runtime_error(
        "simulate: " + std::to_string(times.size()) +
        " points exceed the dense factorization limit (" +
        std::to_string(opts.dense_limit) +
        "); use the circulant/band-limited/bridge fast path");
  SampledPath out;
  out.times = times;
  out.values.assign(times.size(), 0.0);
  if (n == 0) return out;

  // v on demand; pairwise cov from the stationary-increment identity.
  std::vector<double> v(n + 1);
  for (std::size_t i = 1; i <= n; ++i) v[i] = model.increment_variance(times[i]);
  Eigen::MatrixXd c(n, n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i; j <= n; ++j) {
      const double vij = model.increment_variance(times[j] - times[i]);
      c(i - 1, j - 1) = 0.5 * (v[i] + v[j] - vij);
      c(j - 1, i - 1) = c(i - 1, j - 1);
    }
  }

  const double trace = c.trace();
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
  bool ok = false;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    Eigen::MatrixXd cj = c;
    if (attempt > 0) {
      jitter = 1e-12 * std::pow(10.0, attempt - 1) * trace /
               static_cast<double>(n);
      if (jitter > 1e-8 * trace / static_cast<double>(n)) break;
      cj.diagonal().array() += jitter;
    }
    llt.compute(cj);
    if (llt.info() == Eigen::Success) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c,
                                                      Eigen::EigenvaluesOnly);
    throw std::runtime_error(
        "simulate: covariance not PSD after jitter escalation; most negative "
        "eigenvalue = " +
        std::to_string(es.eigenvalues().minCoeff()));
  }

  RandomStream rs(seed, 1);
  Eigen::VectorXd z(n);
  for (std::size_t i = 0; i < n; ++i) z(i) = rs.gaussian();
  Eigen::VectorXd x = llt.matrixL() * z;
  for (std::size_t i = 0; i < n; ++i) out.values[i + 1] = x(i);
  return out;
}

// Draw M real variates from a circulant Gaussian with the given (nonnegative)
// eigenvalues; E Y_j Y_l = (1/M) sum_k eig_k e^{-2 pi i k (j-l)/M}.
std::vector<double> circulant_draw_eigs(const std::vector<double>& eig,
                                        RandomStream& rs) {
  const std::size_t m = eig.size();
  std::vector<std::complex<double>> xi(m);
  const double inv_m = 1.0 / static_cast<double>(m);
  auto amp = [&](std::size_t k) {
    return std::sqrt(std::max(eig[k], 0.0) * inv_m);
  };
  xi[0] = amp(0) * rs.gaussian();
  xi[m / 2] = amp(m / 2) * rs.gaussian();
  for (std::size_t k = 1; k < m / 2; ++k) {
    const double a = amp(k) / std::numbers::sqrt2;
    const double re = a * rs.gaussian();
    const double im = a * rs.gaussian();
    xi[k] = {re, im};
    xi[m - k] = {re, -im};
  }
  fft_inplace(xi, false);
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = xi[j].real();
  return out;
}

// Davies-Harte draw from a circulant with first row r (size M, power of 2).
// Returns M real variates with autocovariance r. Eigenvalues that dip
// slightly negative are clipped; a large dip aborts.
std::vector<double> circulant_draw(const std::vector<double>& r,
                                   RandomStream& rs) {
  std::vector<std::complex<double>> spec(r.begin(), r.end());
  fft_inplace(spec, false);
  double emax = 0.0, emin = 0.0;
  std::vector<double> eig(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    eig[k] = spec[k].real();
    emax = std::max(emax, eig[k]);
    emin = std::min(emin, eig[k]);
  }
  if (emin < -1e-8 * emax)
    throw std::runtime_error(
        "circulant embedding failed: eigenvalue " + std::to_string(emin) +
        " (max " + std::to_string(emax) + ")");
  return circulant_draw_eigs(eig, rs);
}

// Exact increments of X on a regular grid with spacing dt, via the
// stationary increment autocovariance.
std::vector<double> grid_increments(const SpectralModel& model, double dt,
                                    std::size_t count, RandomStream& rs) {
  const std::size_t big = next_power_of_two(std::max<std::size_t>(count, 2) * 2);
  std::vector<double> v(big / 2 + 2);
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = model.increment_variance(static_cast<double>(k) * dt);
  auto gamma = [&](std::size_t k) {
    return 0.5 * (v[k + 1] + v[k > 0 ? k - 1 : 1] - 2.0 * v[k]);
  };
  std::vector<double> row(big);
  for (std::size_t j = 0; j <= big / 2; ++j) row[j] = gamma(j);
  for (std::size_t j = big / 2 + 1; j < big; ++j) row[j] = row[big - j];
  auto y = circulant_draw(row, rs);
  y.resize(count);
  return y;
}

SampledPath circulant_regular_path(const SpectralModel& model,
                                   const std::vector<double>& times,
                                   std::uint64_t seed) {
  SampledPath out;
  out.times = times;
  out.values.assign(times.size(), 0.0);
  const std::size_t m = times.size() - 1;
  if (m == 0) return out;
  const double dt = times.back() / static_cast<double>(m);
  RandomStream rs(seed, 1);
  auto y = grid_increments(model, dt, m, rs);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += y[i];
    out.values[i + 1] = acc;
  }
  return out;
}

double kaiser_i0(double x) {
  // Series for the modified Bessel I0; converges fast for the betas in use.
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

SampledPath band_limited_path(const SpectralModel& model,
                              const std::vector<double>& times,
                              std::uint64_t seed, const SimulateOptions& opts) {
  if (!model.compact_support())
    throw std::runtime_error(
        "simulate: band-limited fast path requires a compact-support model");
  const double whi = model.last_edge();
  const double dt = std::numbers::pi / (opts.oversample * whi);
  const int kw = opts.kaiser_halfwidth;
  const double horizon = times.back();
  const std::size_t grid_n =
      static_cast<std::size_t>(std::ceil(horizon / dt)) + 2 * kw + 2;

  // Periodic spectral synthesis: the stationary S with a line spectrum at
  // spacing 2 pi / (M dt) has circulant covariance with eigenvalues
  // (2 pi / dt) f(xi_k) >= 0, so the embedding never fails; padding controls
  // the periodization error in the covariance.
  const std::size_t big = next_power_of_two(grid_n * 8);
  const double period = static_cast<double>(big) * dt;
  const double dxi = 2.0 * std::numbers::pi / period;
  std::vector<double> eig(big, 0.0);
  for (std::size_t k = 0; k <= big / 2; ++k) {
    const double xi = static_cast<double>(k) * dxi;
    eig[k] = 2.0 * std::numbers::pi / dt * model.density(xi);
    if (k > 0 && k < big / 2) eig[big - k] = eig[k];
  }
  RandomStream rs(seed, 1);
  auto s_grid = circulant_draw_eigs(eig, rs);
  s_grid.resize(grid_n);

  // Kaiser-windowed sinc; grid point j sits at (j - kw) * dt so every
  // t in [0, horizon] has full kernel support.
  const double beta =
      std::numbers::pi * (1.0 - 0.5 / opts.oversample) * static_cast<double>(kw);
  const double i0b = kaiser_i0(beta);
  auto interp = [&](double t) {
    const double u = t / dt + kw;  // grid coordinate
    const long jc = std::lround(u);
    if (std::abs(u - jc) < 1e-12)
      return s_grid[static_cast<std::size_t>(jc)];
    double acc = 0.0;
    for (long j = jc - kw; j <= jc + kw; ++j) {
      const double x = u - j;
      if (std::abs(x) >= kw) continue;
      const double w = std::sqrt(1.0 - (x / kw) * (x / kw));
      const double kernel = std::sin(std::numbers::pi * x) /
                            (std::numbers::pi * x) * kaiser_i0(beta * w) / i0b;
      acc += s_grid[static_cast<std::size_t>(j)] * kernel;
    }
    return acc;
  };

  SampledPath out;
  out.times = times;
  out.values.resize(times.size());
  const double s0 = interp(0.0);
  for (std::size_t i = 0; i < times.size(); ++i)
    out.values[i] = interp(times[i]) - s0;
  out.values[0] = 0.0;
  return out;
}

SampledPath bridge_path(const SpectralModel& model,
                        const std::vector<double>& times, std::uint64_t seed,
                        const SimulateOptions& opts) {
  const double horizon = times.back();
  const double mean_gap = horizon / static_cast<double>(times.size() - 1);
  const double dt = opts.fine_dt > 0.0 ? opts.fine_dt : mean_gap / 64.0;
  const std::size_t cells = static_cast<std::size_t>(std::ceil(horizon / dt)) + 1;

  RandomStream rs(seed, 1);
  auto y = grid_increments(model, dt, cells, rs);
  std::vector<double> grid(cells + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i) grid[i + 1] = grid[i] + y[i];

  SampledPath out;
  out.times = times;
  out.values.assign(times.size(), 0.0);

  // Exact two-point conditioning on (left anchor, right grid neighbour).
  // The left anchor is the previous sampled point when it shares the cell,
  // so within-cell draws stay mutually consistent.
  double prev_t = 0.0, prev_x = 0.0;
  long prev_cell = -1;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double t = times[i];
    const double u = t / dt;
    const long cell = static_cast<long>(std::floor(u));
    const long nearest = std::lround(u);
    if (std::abs(u - nearest) < 1e-9) {
      out.values[i] = grid[static_cast<std::size_t>(nearest)];
      prev_cell = -1;
      prev_t = t;
      prev_x = out.values[i];
      continue;
    }
    double ta, xa;
    if (prev_cell == cell) {
      ta = prev_t;
      xa = prev_x;
    } else {
      ta = cell * dt;
      xa = grid[static_cast<std::size_t>(cell)];
    }
    const double tb = (cell + 1) * dt;
    const double xb = grid[static_cast<std::size_t>(cell + 1)];

    const double caa = covariance(model, ta, ta);
    const double cbb = covariance(model, tb, tb);
    const double cab = covariance(model, ta, tb);
    const double cta = covariance(model, t, ta);
    const double ctb = covariance(model, t, tb);
    const double ctt = covariance(model, t, t);
    const double det = caa * cbb - cab * cab;
    double mu, s2;
    if (det > 1e-14 * std::max(1.0, caa * cbb)) {
      const double wa = (cbb * cta - cab * ctb) / det;
      const double wb = (caa * ctb - cab * cta) / det;
      mu = wa * xa + wb * xb;
      s2 = ctt - (wa * cta + wb * ctb);
    } else {  // t_a == 0 (degenerate anchor): condition on the right only
      const double wb = ctb / cbb;
      mu = wb * xb;
      s2 = ctt - wb * ctb;
    }
    out.values[i] = mu + std::sqrt(std::max(s2, 0.0)) * rs.gaussian();
    prev_cell = cell;
    prev_t = t;
    prev_x = out.values[i];
  }
  return out;
}

}  // namespace

SampledPath simulate_path(const SpectralModel& model,
                          const std::vector<double>& times, std::uint64_t seed,
                          const SimulateOptions& opts) {
  validate_times(times);
  SimMethod method = opts.method;
  if (method == SimMethod::Auto) {
    if (model.compact_support() && times.size() > 1)
      method = SimMethod::BandLimited;
    else if (times_regular(times))
      method = SimMethod::CirculantRegular;
    else if (times.size() <= opts.auto_dense_cutoff)
      method = SimMethod::Dense;
    else
      method = SimMethod::FineGridBridge;
  }
  SampledPath p;
  switch (method) {
    case SimMethod::Dense:
      p = dense_path(model, times, seed, opts);
      p.provenance = "simulated(dense)";
      break;
    case SimMethod::CirculantRegular:
      if (!times_regular(times))
        throw std::invalid_argument(
            "simulate: circulant method requires a regular grid");
      p = circulant_regular_path(model, times, seed);
      p.provenance = "simulated(circulant)";
      break;
    case SimMethod::BandLimited:
      p = band_limited_path(model, times, seed, opts);
      p.provenance = "simulated(band-limited)";
      break;
    case SimMethod::FineGridBridge:
      p = bridge_path(model, times, seed, opts);
      p.provenance = "simulated(fine-grid-bridge)";
      break;
    case SimMethod::Auto:
      break;  // unreachable
  }
  return p;
}

}  // namespace specwave
