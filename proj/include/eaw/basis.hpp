#ifndef EAW_BASIS_HPP
#define EAW_BASIS_HPP

#include <vector>

#include "eaw/geometry.hpp"

namespace eaw {

/// Number of 2D modes of total degree <= p.
inline int mode_count(int p) { return (p + 1) * (p + 2) / 2; }

/// Modal basis on a polygon: tensor-product Legendre polynomials on the
/// element bounding box, rescaled to be L2-orthonormal there and filtered to
/// total degree <= p. Restricted to the polygon they stay linearly
/// independent but lose orthogonality, so local mass matrices are dense.
class Basis {
 public:
  Basis() = default;
  Basis(const Rect& bbox, int degree);

  int degree() const { return degree_; }
  int size() const { return n_modes_; }
  const Rect& bbox() const { return bbox_; }

  /// Values of all modes at p.
  void eval(const Vec2& p, double* values) const;
  /// Values and gradients of all modes at p.
  void eval_grad(const Vec2& p, double* values, Vec2* grads) const;

 private:
  Rect bbox_;
  int degree_ = 0;
  int n_modes_ = 0;
  std::vector<std::pair<int, int>> exponents_;  // (i, j), i + j <= p
  std::vector<double> scale_;                   // orthonormalization factors
};

/// Legendre values P_0..P_n and derivatives at x (stable recurrences).
void legendre_all(int n, double x, double* values, double* derivatives);

}  // namespace eaw

#endif
