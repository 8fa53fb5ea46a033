#include "eaw/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace eaw {

double QuadratureRule::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

QuadratureRule reference_triangle_rule(int order) {
  if (order < 0) order = 0;
  if (order > kMaxQuadratureOrder)
    throw std::runtime_error("quadrature order " + std::to_string(order) +
                             " exceeds the maximum supported order " +
                             std::to_string(kMaxQuadratureOrder));
  static std::map<int, QuadratureRule> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  // Collapsed square: r = u(1-v), s = v, Jacobian (1-v). The extra degree in
  // v is absorbed by one more Gauss point.
  const int nu = order / 2 + 1;
  const int nv = (order + 1) / 2 + 1;
  std::vector<double> gu, wu, gv, wv;
  gauss_legendre(nu, gu, wu);
  gauss_legendre(nv, gv, wv);

  QuadratureRule rule;
  rule.points.reserve(static_cast<std::size_t>(nu) * nv);
  rule.weights.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (gu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (gv[j] + 1.0);
      rule.points.push_back({u * (1.0 - v), v});
      rule.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - v));
    }
  }
  cache[order] = rule;
  return rule;
}

QuadratureRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int order) {
  const QuadratureRule ref = reference_triangle_rule(order);
  const double jac = cross(b - a, c - a);  // 2 * signed area
  QuadratureRule rule;
  rule.points.reserve(ref.size());
  rule.weights.reserve(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    const double r = ref.points[q].x;
    const double s = ref.points[q].y;
    rule.points.push_back(a + r * (b - a) + s * (c - a));
    rule.weights.push_back(ref.weights[q] * jac);
  }
  return rule;
}

QuadratureRule composite_triangle_rule(const std::vector<std::array<Vec2, 3>>& tris, int order) {
  QuadratureRule rule;
  for (const auto& t : tris) {
    const QuadratureRule r = triangle_rule(t[0], t[1], t[2], order);
    rule.points.insert(rule.points.end(), r.points.begin(), r.points.end());
    rule.weights.insert(rule.weights.end(), r.weights.begin(), r.weights.end());
  }
  return rule;
}

QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int order) {
  if (order < 0) order = 0;
  if (order > 2 * kMaxQuadratureOrder)
    throw std::runtime_error("face quadrature order " + std::to_string(order) +
                             " exceeds the maximum supported order " +
                             std::to_string(2 * kMaxQuadratureOrder));
  const int n = order / 2 + 1;
  std::vector<double> g, w;
  gauss_legendre(n, g, w);
  const double len = dist(a, b);
  QuadratureRule rule;
  rule.points.reserve(n);
  rule.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (g[i] + 1.0);
    rule.points.push_back(a + t * (b - a));
    rule.weights.push_back(0.5 * w[i] * len);
  }
  return rule;
}

}  // namespace eaw
