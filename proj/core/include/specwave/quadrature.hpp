#pragma once

#include <functional>
#include <span>
#include <vector>

namespace specwave {

/// Result of an adaptive integration. `error_bound` is the accumulated
/// Kronrod error estimate, `converged` tells whether the requested
/// tolerances were met within the evaluation budget.
struct QuadResult {
  double value{0.0};
  double error_bound{0.0};
  bool converged{false};
  long evaluations{0};
};

struct QuadOptions {
  double abs_tol{1e-10};
  double rel_tol{1e-8};
  int max_depth{48};
  long max_intervals{20000};
  // Initial panel boundaries inside [a,b] (band edges, oscillation nodes...).
  // Values outside [a,b] are ignored.
  std::vector<double> breakpoints{};
};

/// Adaptive Gauss-Kronrod 7-15 bisection over [a,b].
QuadResult adaptive_integrate(const std::function<double(double)>& f, double a,
                              double b, const QuadOptions& opts = {});

/// Same, but throws std::runtime_error carrying the achieved tolerance when
/// the error bound cannot be met.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadOptions& opts = {});

/// Single non-adaptive G7K15 pass (value, error estimate).
std::pair<double, double> gauss_kronrod_15(
    const std::function<double(double)>& f, double a, double b);

/// Gauss-Legendre nodes/weights on [-1,1], cached per order (order in [1,64]).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Fixed-order Gauss-Legendre integration of f over [a,b].
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order);

/// Deterministic pairwise summation (order-independent aggregation helper).
double pairwise_sum(std::span<const double> xs);

}  // namespace specwave
