#include "eaw/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace eaw {

double polygon_area(const Polygon& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    s += cross(a, b);
  }
  return 0.5 * s;
}

Vec2 polygon_centroid(const Polygon& poly) {
  double a = 0.0;
  double cx = 0.0, cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  a *= 0.5;
  if (a == 0.0) throw std::runtime_error("polygon_centroid: degenerate polygon");
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

double polygon_diameter(const Polygon& poly) {
  double d = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      d = std::max(d, dist(poly[i], poly[j]));
  return d;
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double polygon_moment(const Polygon& poly, int a, int b) {
  // int_P x^a y^b dA = (1/(a+1)) \oint x^{a+1} y^b dy, edges parameterized
  // linearly; the edge integrand is a polynomial in t expanded binomially.
  long double total = 0.0L;
  const std::size_t n = poly.size();
  for (std::size_t e = 0; e < n; ++e) {
    const Vec2& p = poly[e];
    const Vec2& q = poly[(e + 1) % n];
    const long double dx = q.x - p.x;
    const long double dy = q.y - p.y;
    if (dy == 0.0L) continue;
    long double edge = 0.0L;
    for (int i = 0; i <= a + 1; ++i) {
      const long double xi = binom(a + 1, i) * std::pow((long double)p.x, a + 1 - i) *
                             std::pow(dx, i);
      if (xi == 0.0L) continue;
      for (int j = 0; j <= b; ++j) {
        const long double yj = binom(b, j) * std::pow((long double)p.y, b - j) *
                               std::pow(dy, j);
        if (yj == 0.0L) continue;
        edge += xi * yj / (long double)(i + j + 1);
      }
    }
    total += edge * dy;
  }
  return static_cast<double>(total / (long double)(a + 1));
}

Polygon clip_halfplane(const Polygon& poly, const Vec2& p0, const Vec2& n) {
  Polygon out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    const double da = dot(n, a - p0);
    const double db = dot(n, b - p0);
    if (da <= 0.0) {
      out.push_back(a);
      if (db > 0.0) {
        const double t = da / (da - db);
        out.push_back(a + t * (b - a));
      }
    } else if (db <= 0.0) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b, double* t_out) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return dist(p, a + t * d);
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xi = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xi) inside = !inside;
    }
  }
  return inside;
}

}  // namespace eaw
