#ifndef EAW_SCENARIO_HPP
#define EAW_SCENARIO_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "eaw/geometry.hpp"
#include "eaw/material.hpp"

namespace eaw {

/// One-dimensional factor  coef * s^power * trig(freq*s + phase)  with
/// trig in {1, sin, cos}. Closed under differentiation (as a sum), which is
/// what makes manufactured forcings exact.
struct Factor1D {
  enum Kind { One, Sin, Cos };
  double coef = 1.0;
  int power = 0;
  Kind kind = One;
  double freq = 0.0;
  double phase = 0.0;

  double operator()(double s) const;
};

std::vector<Factor1D> derivative(const Factor1D& f);

struct Term2D {
  Factor1D fx, fy;
  double eval(double x, double y) const { return fx(x) * fy(y); }
};

/// Sum of separable trig-poly terms in (x, y).
class PolyTrigField {
 public:
  PolyTrigField() = default;
  explicit PolyTrigField(std::vector<Term2D> terms) : terms_(std::move(terms)) {}

  double eval(double x, double y) const;
  PolyTrigField dx() const;
  PolyTrigField dy() const;
  PolyTrigField scaled(double s) const;
  PolyTrigField operator+(const PolyTrigField& o) const;
  bool empty() const { return terms_.empty(); }
  const std::vector<Term2D>& terms() const { return terms_; }

 private:
  std::vector<Term2D> terms_;
};

/// Sum of trig-poly factors in t.
class PolyTrigTime {
 public:
  PolyTrigTime() = default;
  explicit PolyTrigTime(std::vector<Factor1D> terms) : terms_(std::move(terms)) {}
  static PolyTrigTime one() { return PolyTrigTime({Factor1D{}}); }

  double eval(double t) const;
  PolyTrigTime dt() const;
  const std::vector<Factor1D>& terms() const { return terms_; }

 private:
  std::vector<Factor1D> terms_;
};

/// Ricker point source in the acoustic domain, mollified by a normalized
/// Gaussian of width sigma.
struct PointSource {
  Vec2 x0;
  double t0 = 0.1;
  double a = 576.0;  // shape parameter, 1/time^2
  double sigma = 0.025;

  double time_factor(double t) const;
  double spatial(double x, double y) const;
  /// Fraction of the Gaussian mass inside the rectangle (analytic).
  double mass_inside(const Rect& r) const;
};

using TimeFunc = std::function<double(double)>;

struct SeparableVector {
  TimeFunc time;
  std::function<Vec2(double, double)> space;
};
struct SeparableScalar {
  TimeFunc time;
  std::function<double(double, double)> space;
};

struct Scenario {
  std::string name;
  Material material;
  double T = 1.0;
  double dt = 1e-4;
  Rect domain;
  double interface_x = 0.0;

  bool has_exact = false;
  std::function<Vec2(double, double, double)> exact_u, exact_du;
  std::function<double(double, double, double)> exact_phi, exact_dphi;
  /// Columns {d/dx u, d/dy u} of the displacement gradient.
  std::function<std::array<Vec2, 2>(double, double, double)> exact_grad_u;
  std::function<Vec2(double, double, double)> exact_grad_phi;

  // Right-hand sides as sums of separable (time x space) terms; f_a is the
  // physical load (the rho_a weight is applied at assembly).
  std::vector<SeparableVector> forcing_e;
  std::vector<SeparableScalar> forcing_a;
  std::vector<SeparableVector> dirichlet_e;
  std::vector<SeparableScalar> dirichlet_a;
  std::vector<PointSource> point_sources;

  std::function<Vec2(double, double)> u0, u1;
  std::function<double(double, double)> phi0, phi1;

  bool has_elastic_dirichlet() const { return !dirichlet_e.empty(); }
  bool has_acoustic_dirichlet() const { return !dirichlet_a.empty(); }
};

struct VectorTermSpec {
  PolyTrigField sx, sy;
  PolyTrigTime tau;
};
struct ScalarTermSpec {
  PolyTrigField s;
  PolyTrigTime tau;
};

/// Scenario with exact solution u = sum sx_k,sy_k * tau_k, phi = sum s_k *
/// tau_k; forcings derived analytically from the strong form, boundary data
/// from the exact traces. A finite-difference residual self-check runs at
/// construction and throws on mismatch.
Scenario make_manufactured(const std::string& name, const Material& material,
                           std::vector<VectorTermSpec> u_terms,
                           std::vector<ScalarTermSpec> phi_terms, double T, double dt);

/// Homogeneous scenario (zero data); initial fields supplied by the caller.
Scenario make_zero_scenario(const Material& material);

Scenario test_case_1();
Scenario test_case_2();
Scenario test_case_3(double sigma = 0.025);

}  // namespace eaw

#endif
