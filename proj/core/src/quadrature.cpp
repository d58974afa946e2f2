#include "specwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

namespace specwave {

namespace {

// Kronrod-15 abscissae (positive half) and weights; Gauss-7 weights.
// Standard QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, err;
  int depth;
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace

std::pair<double, double> gauss_kronrod_15(
    const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k15 = kWgk[7] * fc;
  double g7 = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    k15 += kWgk[i] * fsum;
    if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
  }
  k15 *= h;
  g7 *= h;
  // QUADPACK-style error sharpening.
  double err = std::abs(k15 - g7);
  err = 200.0 * err * std::sqrt(err > 0 ? err : 0.0);
  if (err > std::abs(k15 - g7)) err = std::abs(k15 - g7) * 1.5 + 1e-300;
  return {k15, std::max(err, std::abs(k15) * 5e-15)};
}

QuadResult adaptive_integrate(const std::function<double(double)>& f, double a,
                              double b, const QuadOptions& opts) {
  QuadResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> edges{a, b};
  for (double x : opts.breakpoints)
    if (x > a && x < b) edges.push_back(x);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel> heap;
  double total = 0.0, total_err = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    auto [v, e] = gauss_kronrod_15(f, edges[i], edges[i + 1]);
    res.evaluations += 15;
    total += v;
    total_err += e;
    heap.push({edges[i], edges[i + 1], v, e, 0});
  }

  auto tol = [&](double t) {
    return std::max(opts.abs_tol, opts.rel_tol * std::abs(t));
  };

  long panels = static_cast<long>(heap.size());
  while (total_err > tol(total) && panels < opts.max_intervals) {
    Panel p = heap.top();
    if (p.depth >= opts.max_depth) break;
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    auto [v1, e1] = gauss_kronrod_15(f, p.a, m);
    auto [v2, e2] = gauss_kronrod_15(f, m, p.b);
    res.evaluations += 30;
    total += v1 + v2 - p.value;
    total_err += e1 + e2 - p.err;
    heap.push({p.a, m, v1, e1, p.depth + 1});
    heap.push({m, p.b, v2, e2, p.depth + 1});
    ++panels;
  }

  res.value = sign * total;
  res.error_bound = total_err;
  res.converged = total_err <= tol(total);
  return res;
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadOptions& opts) {
  QuadResult r = adaptive_integrate(f, a, b, opts);
  if (!r.converged) {
    throw std::runtime_error(
        "quadrature did not converge: achieved error bound " +
        std::to_string(r.error_bound) + " over [" + std::to_string(a) + "," +
        std::to_string(b) + "]");
  }
  return r.value;
}

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > 64)
    throw std::invalid_argument("gauss_legendre: order must be in [1,64]");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, Newton refinement on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  auto [pos, inserted] = cache.emplace(order, std::move(rule));
  (void)inserted;
  return pos->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(c + h * rule.nodes[i]);
  return sum * h;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace specwave
