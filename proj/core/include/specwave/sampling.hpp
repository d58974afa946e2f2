#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace specwave {

enum class SchemeKind { Deterministic, Exponential, UniformBounded, TruncatedGaussian };

/// Inter-arrival law t_{k+1} - t_k = delta * L_k with E L_k = 1, drawn
/// independently of the process. The s-index reports the largest s for which
/// the (S(s)) moment bound holds: infinity for bounded laws, and every finite
/// s (but not s = infinity) for the exponential law.
class SamplingScheme {
 public:
  static SamplingScheme deterministic(double delta);
  static SamplingScheme exponential(double delta);
  /// L ~ Uniform[a,b] with 0 < a < b and (a+b)/2 = 1.
  static SamplingScheme uniform_bounded(double delta, double a, double b);
  /// L ~ N(1, sd^2) truncated to [1-c, 1+c], 0 < c < 1 (symmetric, so the
  /// unit mean survives truncation).
  static SamplingScheme truncated_gaussian(double delta, double sd, double c);

  SchemeKind kind() const { return kind_; }
  double delta() const { return delta_; }
  /// +infinity when L is bounded; the exponential law reports a finite proxy
  /// (all moments exist, none uniformly bounded).
  double s_index() const;
  bool bounded() const;
  std::string describe() const;

  /// One inter-arrival factor L (unit mean).
  double draw_factor(class RandomStream& rs) const;

 private:
  SchemeKind kind_{SchemeKind::Deterministic};
  double delta_{1.0};
  double a_{1.0}, b_{1.0};   // uniform bounds
  double sd_{0.0}, c_{0.0};  // truncated gaussian
};

/// t_0 = 0 < t_1 < ... < t_n with increments delta * L_k; n increments,
/// n + 1 points, reproducible given (scheme, seed).
std::vector<double> draw_times(const SamplingScheme& scheme, std::size_t n,
                               std::uint64_t seed);

}  // namespace specwave
