#ifndef EAW_QUADRATURE_HPP
#define EAW_QUADRATURE_HPP

#include <vector>

#include "eaw/geometry.hpp"

namespace eaw {

/// Highest polynomial degree any rule is guaranteed to integrate exactly.
inline constexpr int kMaxQuadratureOrder = 60;

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double total_weight() const;
};

/// Gauss-Legendre nodes/weights on [-1, 1], exact for degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule on the reference triangle {r,s >= 0, r+s <= 1}, exact for total
/// degree <= order (collapsed tensor-product construction).
QuadratureRule reference_triangle_rule(int order);

/// Rule on a physical triangle, exact for total degree <= order.
QuadratureRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int order);

/// Composite rule over a set of triangles.
QuadratureRule composite_triangle_rule(const std::vector<std::array<Vec2, 3>>& tris, int order);

/// Gauss rule on the segment [a, b], exact for degree <= order; weights sum
/// to the segment length.
QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int order);

}  // namespace eaw

#endif
