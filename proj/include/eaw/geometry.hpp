#ifndef EAW_GEOMETRY_HPP
#define EAW_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace eaw {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

using Polygon = std::vector<Vec2>;

struct Rect {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Vec2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  Polygon corners() const {
    return {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
  }
};

/// Signed area (positive for counter-clockwise orientation).
double polygon_area(const Polygon& poly);

Vec2 polygon_centroid(const Polygon& poly);

/// Maximum pairwise vertex distance.
double polygon_diameter(const Polygon& poly);

/// Exact monomial moment  \int_P x^a y^b dA  via the divergence theorem.
/// Serves as an analytic reference for quadrature checks.
double polygon_moment(const Polygon& poly, int a, int b);

/// Clip a convex polygon against the half-plane  dot(n, x - p0) <= 0.
Polygon clip_halfplane(const Polygon& poly, const Vec2& p0, const Vec2& n);

/// Distance from p to the segment [a, b] and the segment parameter of the
/// closest point (t in [0,1]).
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b, double* t_out = nullptr);

bool point_in_polygon(const Vec2& p, const Polygon& poly);

/// Deterministic RNG (splitmix64). Used instead of std:: distributions so
/// streams are identical across standard library implementations.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform in [-1, 1].
  double sym() { return 2.0 * uniform() - 1.0; }
};

}  // namespace eaw

#endif
