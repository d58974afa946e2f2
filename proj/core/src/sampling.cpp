#include "specwave/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "specwave/rng.hpp"

namespace specwave {

SamplingScheme SamplingScheme::deterministic(double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("sampling: delta must be positive");
  SamplingScheme s;
  s.kind_ = SchemeKind::Deterministic;
  s.delta_ = delta;
  return s;
}

SamplingScheme SamplingScheme::exponential(double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("sampling: delta must be positive");
  SamplingScheme s;
  s.kind_ = SchemeKind::Exponential;
  s.delta_ = delta;
  return s;
}

SamplingScheme SamplingScheme::uniform_bounded(double delta, double a,
                                               double b) {
  if (!(delta > 0.0))
    throw std::invalid_argument("sampling: delta must be positive");
  if (!(0.0 < a && a < b))
    throw std::invalid_argument("sampling: uniform bounds need 0 < a < b");
  if (std::abs(0.5 * (a + b) - 1.0) > 1e-12)
    throw std::invalid_argument(
        "sampling: uniform bounds must satisfy (a+b)/2 = 1 for unit mean");
  SamplingScheme s;
  s.kind_ = SchemeKind::UniformBounded;
  s.delta_ = delta;
  s.a_ = a;
  s.b_ = b;
  return s;
}

SamplingScheme SamplingScheme::truncated_gaussian(double delta, double sd,
                                                  double c) {
  if (!(delta > 0.0))
    throw std::invalid_argument("sampling: delta must be positive");
  if (!(sd > 0.0))
    throw std::invalid_argument("sampling: sd must be positive");
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument(
        "sampling: truncation halfwidth c must lie in (0,1)");
  SamplingScheme s;
  s.kind_ = SchemeKind::TruncatedGaussian;
  s.delta_ = delta;
  s.sd_ = sd;
  s.c_ = c;
  return s;
}

double SamplingScheme::s_index() const {
  return bounded() ? std::numeric_limits<double>::infinity()
                   : std::numeric_limits<double>::max();
}

bool SamplingScheme::bounded() const {
  return kind_ != SchemeKind::Exponential;
}

std::string SamplingScheme::describe() const {
  switch (kind_) {
    case SchemeKind::Deterministic:
      return "deterministic(delta=" + std::to_string(delta_) + ")";
    case SchemeKind::Exponential:
      return "exponential(delta=" + std::to_string(delta_) +
             "), all finite moments (S(s) for every s < inf)";
    case SchemeKind::UniformBounded:
      return "uniform[" + std::to_string(a_) + "," + std::to_string(b_) +
             "](delta=" + std::to_string(delta_) + "), S(inf)";
    case SchemeKind::TruncatedGaussian:
      return "truncated-gaussian(sd=" + std::to_string(sd_) +
             ", c=" + std::to_string(c_) + ", delta=" + std::to_string(delta_) +
             "), S(inf)";
  }
  return "?";
}

double SamplingScheme::draw_factor(RandomStream& rs) const {
  switch (kind_) {
    case SchemeKind::Deterministic:
      return 1.0;
    case SchemeKind::Exponential:
      return rs.exponential();
    case SchemeKind::UniformBounded:
      return a_ + (b_ - a_) * rs.uniform01();
    case SchemeKind::TruncatedGaussian: {
      // Rejection keeps the stream deterministic given the seed.
      for (;;) {
        const double x = 1.0 + sd_ * rs.gaussian();
        if (x >= 1.0 - c_ && x <= 1.0 + c_) return x;
      }
    }
  }
  return 1.0;
}

std::vector<double> draw_times(const SamplingScheme& scheme, std::size_t n,
                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_times: n must be >= 1");
  RandomStream rs(seed, 0);
  std::vector<double> t(n + 1);
  t[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double l = scheme.draw_factor(rs);
    t[k + 1] = t[k] + scheme.delta() * l;
  }
  return t;
}

}  // namespace specwave
