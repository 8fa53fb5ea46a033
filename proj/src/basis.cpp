#include "eaw/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace eaw {

void legendre_all(int n, double x, double* values, double* derivatives) {
  values[0] = 1.0;
  if (derivatives) derivatives[0] = 0.0;
  if (n == 0) return;
  values[1] = x;
  if (derivatives) derivatives[1] = 1.0;
  for (int k = 2; k <= n; ++k) {
    values[k] = ((2.0 * k - 1.0) * x * values[k - 1] - (k - 1.0) * values[k - 2]) / k;
    if (derivatives)
      derivatives[k] = derivatives[k - 2] + (2.0 * k - 1.0) * values[k - 1];
  }
}

Basis::Basis(const Rect& bbox, int degree) : bbox_(bbox), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("Basis: degree must be >= 0");
  if (degree > 30) throw std::invalid_argument("Basis: degree must be <= 30");
  if (!(bbox.width() > 0.0 && bbox.height() > 0.0))
    throw std::invalid_argument("Basis: empty bounding box");
  n_modes_ = mode_count(degree);
  exponents_.reserve(n_modes_);
  scale_.reserve(n_modes_);
  for (int k = 0; k <= degree; ++k)
    for (int i = 0; i <= k; ++i) {
      const int j = k - i;
      exponents_.emplace_back(i, j);
      scale_.push_back(std::sqrt((2.0 * i + 1.0) / bbox.width()) *
                       std::sqrt((2.0 * j + 1.0) / bbox.height()));
    }
}

void Basis::eval(const Vec2& p, double* values) const {
  const double xi = (2.0 * p.x - bbox_.xmin - bbox_.xmax) / bbox_.width();
  const double et = (2.0 * p.y - bbox_.ymin - bbox_.ymax) / bbox_.height();
  double px[32], py[32];
  legendre_all(degree_, xi, px, nullptr);
  legendre_all(degree_, et, py, nullptr);
  for (int m = 0; m < n_modes_; ++m)
    values[m] = scale_[m] * px[exponents_[m].first] * py[exponents_[m].second];
}

void Basis::eval_grad(const Vec2& p, double* values, Vec2* grads) const {
  const double xi = (2.0 * p.x - bbox_.xmin - bbox_.xmax) / bbox_.width();
  const double et = (2.0 * p.y - bbox_.ymin - bbox_.ymax) / bbox_.height();
  const double dxi = 2.0 / bbox_.width();
  const double det = 2.0 / bbox_.height();
  double px[32], py[32], dpx[32], dpy[32];
  legendre_all(degree_, xi, px, dpx);
  legendre_all(degree_, et, py, dpy);
  for (int m = 0; m < n_modes_; ++m) {
    const auto [i, j] = exponents_[m];
    values[m] = scale_[m] * px[i] * py[j];
    grads[m] = {scale_[m] * dpx[i] * dxi * py[j], scale_[m] * px[i] * dpy[j] * det};
  }
}

}  // namespace eaw
