// Dense quadrature-loop evaluation of the bilinear forms, independent of the
// assembly path: discrete fields are reconstructed from coefficient vectors
// at quadrature points and the forms are integrated term by term. Kept
// test-only so the production assembly is always checked against it.
#ifndef EAW_TESTS_ORACLE_HPP
#define EAW_TESTS_ORACLE_HPP

#include <Eigen/Dense>

#include "eaw/analysis.hpp"
#include "eaw/assembly.hpp"

namespace eaw::oracle {

struct FieldSample {
  Vec2 value;
  double dx_x = 0.0, dx_y = 0.0;  // du_x/dx, du_x/dy
  double dy_x = 0.0, dy_y = 0.0;  // du_y/dx, du_y/dy
};

inline FieldSample sample_vector(const DgSpace& sp, int k, const Eigen::VectorXd& coeffs,
                                 const Vec2& p) {
  const Basis& b = sp.basis(k);
  const int nm = b.size();
  const int off = sp.offset(k);
  std::vector<double> vals(nm);
  std::vector<Vec2> grads(nm);
  b.eval_grad(p, vals.data(), grads.data());
  FieldSample s;
  for (int m = 0; m < nm; ++m) {
    const double cx = coeffs[off + m];
    const double cy = coeffs[off + nm + m];
    s.value.x += cx * vals[m];
    s.value.y += cy * vals[m];
    s.dx_x += cx * grads[m].x;
    s.dx_y += cx * grads[m].y;
    s.dy_x += cy * grads[m].x;
    s.dy_y += cy * grads[m].y;
  }
  return s;
}

struct ScalarSample {
  double value = 0.0;
  Vec2 grad;
};

inline ScalarSample sample_scalar(const DgSpace& sp, int k, const Eigen::VectorXd& coeffs,
                                  const Vec2& p) {
  const Basis& b = sp.basis(k);
  const int nm = b.size();
  const int off = sp.offset(k);
  std::vector<double> vals(nm);
  std::vector<Vec2> grads(nm);
  b.eval_grad(p, vals.data(), grads.data());
  ScalarSample s;
  for (int m = 0; m < nm; ++m) {
    s.value += coeffs[off + m] * vals[m];
    s.grad.x += coeffs[off + m] * grads[m].x;
    s.grad.y += coeffs[off + m] * grads[m].y;
  }
  return s;
}

struct StressTensor {
  double xx = 0.0, yy = 0.0, xy = 0.0;
};

inline StressTensor stress_of(const FieldSample& s, const Material& m) {
  const double exx = s.dx_x;
  const double eyy = s.dy_y;
  const double exy = 0.5 * (s.dx_y + s.dy_x);
  const double tr = m.lambda * (exx + eyy);
  return {2.0 * m.mu * exx + tr, 2.0 * m.mu * eyy + tr, 2.0 * m.mu * exy};
}

inline int oracle_order(const PolyMesh& mesh) {
  int p = 1;
  for (const auto& el : mesh.elements) p = std::max(p, el.degree);
  return 2 * p + 4;
}

// A_h^e(u, v) by direct integration.
inline double bilinear_Ae(const DgSpace& sp, const Material& mat,
                          const StabilizationParams& params, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& v, bool include_boundary = true) {
  const PolyMesh& mesh = sp.mesh();
  const int order = oracle_order(mesh);
  double acc = 0.0;
  for (int k = 0; k < sp.n_elements(); ++k) {
    const QuadratureRule rule = sp.volume_rule(k, order);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const FieldSample su = sample_vector(sp, k, u, rule.points[q]);
      const FieldSample sv = sample_vector(sp, k, v, rule.points[q]);
      const StressTensor s = stress_of(su, mat);
      const double evxx = sv.dx_x, evyy = sv.dy_y, evxy = 0.5 * (sv.dx_y + sv.dy_x);
      acc += rule.weights[q] * (s.xx * evxx + s.yy * evyy + 2.0 * s.xy * evxy);
    }
  }
  for (const Face& f : mesh.faces) {
    const bool interior = f.kind == FaceKind::InteriorElastic;
    const bool boundary = f.kind == FaceKind::BoundaryElasticDirichlet;
    if (!interior && !boundary) continue;
    if (boundary && !include_boundary) continue;
    const double eta = stabilization_eta(mesh, f, mat, params);
    const QuadratureRule rule = segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], order);
    const int kl = sp.local_index(f.left_element);
    const int kr = interior ? sp.local_index(f.right_element) : -1;
    const Vec2 n = f.normal;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 p = rule.points[q];
      const FieldSample ul = sample_vector(sp, kl, u, p);
      const FieldSample vl = sample_vector(sp, kl, v, p);
      StressTensor su = stress_of(ul, mat);
      StressTensor sv = stress_of(vl, mat);
      Vec2 ju = ul.value, jv = vl.value;
      if (interior) {
        const FieldSample ur = sample_vector(sp, kr, u, p);
        const FieldSample vr = sample_vector(sp, kr, v, p);
        const StressTensor sur = stress_of(ur, mat);
        const StressTensor svr = stress_of(vr, mat);
        su = {0.5 * (su.xx + sur.xx), 0.5 * (su.yy + sur.yy), 0.5 * (su.xy + sur.xy)};
        sv = {0.5 * (sv.xx + svr.xx), 0.5 * (sv.yy + svr.yy), 0.5 * (sv.xy + svr.xy)};
        ju = ju - ur.value;
        jv = jv - vr.value;
      }
      const Vec2 tun{su.xx * n.x + su.xy * n.y, su.xy * n.x + su.yy * n.y};
      const Vec2 tvn{sv.xx * n.x + sv.xy * n.y, sv.xy * n.x + sv.yy * n.y};
      acc += rule.weights[q] * (eta * dot(ju, jv) - dot(tun, jv) - dot(tvn, ju));
    }
  }
  return acc;
}

inline double bilinear_Aa(const DgSpace& sp, const Material& mat,
                          const StabilizationParams& params, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& v, bool include_boundary = true) {
  const PolyMesh& mesh = sp.mesh();
  const int order = oracle_order(mesh);
  double acc = 0.0;
  for (int k = 0; k < sp.n_elements(); ++k) {
    const QuadratureRule rule = sp.volume_rule(k, order);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const ScalarSample su = sample_scalar(sp, k, u, rule.points[q]);
      const ScalarSample sv = sample_scalar(sp, k, v, rule.points[q]);
      acc += rule.weights[q] * mat.rho_a * dot(su.grad, sv.grad);
    }
  }
  for (const Face& f : mesh.faces) {
    const bool interior = f.kind == FaceKind::InteriorAcoustic;
    const bool boundary = f.kind == FaceKind::BoundaryAcousticDirichlet;
    if (!interior && !boundary) continue;
    if (boundary && !include_boundary) continue;
    const double chi = stabilization_chi(mesh, f, mat, params);
    const QuadratureRule rule = segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], order);
    const int kl = sp.local_index(f.left_element);
    const int kr = interior ? sp.local_index(f.right_element) : -1;
    const Vec2 n = f.normal;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 p = rule.points[q];
      const ScalarSample ul = sample_scalar(sp, kl, u, p);
      const ScalarSample vl = sample_scalar(sp, kl, v, p);
      Vec2 gu = ul.grad * mat.rho_a;
      Vec2 gv = vl.grad * mat.rho_a;
      double ju = ul.value, jv = vl.value;
      if (interior) {
        const ScalarSample ur = sample_scalar(sp, kr, u, p);
        const ScalarSample vr = sample_scalar(sp, kr, v, p);
        gu = 0.5 * (gu + ur.grad * mat.rho_a);
        gv = 0.5 * (gv + vr.grad * mat.rho_a);
        ju -= ur.value;
        jv -= vr.value;
      }
      acc += rule.weights[q] * (chi * ju * jv - dot(gu, n) * jv - dot(gv, n) * ju);
    }
  }
  return acc;
}

// I_h^e(psi, v) = int_Gamma_I rho_a psi (v . n_e) ds.
inline double bilinear_Ce(const DgSpace& sp_e, const DgSpace& sp_a, const Material& mat,
                          const Eigen::VectorXd& v, const Eigen::VectorXd& psi) {
  const PolyMesh& mesh = sp_e.mesh();
  const int order = oracle_order(mesh);
  double acc = 0.0;
  for (const Face& f : mesh.faces) {
    if (f.kind != FaceKind::Interface) continue;
    const QuadratureRule rule = segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], order);
    const int ke = sp_e.local_index(f.left_element);
    const int ka = sp_a.local_index(f.right_element);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const FieldSample sv = sample_vector(sp_e, ke, v, rule.points[q]);
      const ScalarSample sp = sample_scalar(sp_a, ka, psi, rule.points[q]);
      acc += rule.weights[q] * mat.rho_a * sp.value * dot(sv.value, f.normal);
    }
  }
  return acc;
}

inline double bilinear_mass(const DgSpace& sp, double coef, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v) {
  const int order = oracle_order(sp.mesh());
  double acc = 0.0;
  const bool vec = sp.kind() == SpaceKind::VectorElastic;
  for (int k = 0; k < sp.n_elements(); ++k) {
    const QuadratureRule rule = sp.volume_rule(k, order);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      if (vec) {
        const FieldSample su = sample_vector(sp, k, u, rule.points[q]);
        const FieldSample sv = sample_vector(sp, k, v, rule.points[q]);
        acc += rule.weights[q] * coef * dot(su.value, sv.value);
      } else {
        const ScalarSample su = sample_scalar(sp, k, u, rule.points[q]);
        const ScalarSample sv = sample_scalar(sp, k, v, rule.points[q]);
        acc += rule.weights[q] * coef * su.value * sv.value;
      }
    }
  }
  return acc;
}

// дG norms squared, for cross-checking the analysis module.
inline double dg_norm2_e(const DgSpace& sp, const Material& mat, const StabilizationParams& params,
                         const Eigen::VectorXd& u) {
  const PolyMesh& mesh = sp.mesh();
  const int order = oracle_order(mesh);
  double acc = 0.0;
  for (int k = 0; k < sp.n_elements(); ++k) {
    const QuadratureRule rule = sp.volume_rule(k, order);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const FieldSample s = sample_vector(sp, k, u, rule.points[q]);
      const double exx = s.dx_x, eyy = s.dy_y, exy = 0.5 * (s.dx_y + s.dy_x);
      acc += rule.weights[q] * (2 * mat.mu * (exx * exx + eyy * eyy + 2 * exy * exy) +
                                mat.lambda * (exx + eyy) * (exx + eyy));
    }
  }
  for (const Face& f : mesh.faces) {
    const bool interior = f.kind == FaceKind::InteriorElastic;
    if (!interior && f.kind != FaceKind::BoundaryElasticDirichlet) continue;
    const double eta = stabilization_eta(mesh, f, mat, params);
    const QuadratureRule rule = segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], order);
    const int kl = sp.local_index(f.left_element);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Vec2 j = sample_vector(sp, kl, u, rule.points[q]).value;
      if (interior)
        j = j - sample_vector(sp, sp.local_index(f.right_element), u, rule.points[q]).value;
      acc += rule.weights[q] * eta * dot(j, j);
    }
  }
  return acc;
}

inline double dg_norm2_a(const DgSpace& sp, const Material& mat, const StabilizationParams& params,
                         const Eigen::VectorXd& phi) {
  const PolyMesh& mesh = sp.mesh();
  const int order = oracle_order(mesh);
  double acc = 0.0;
  for (int k = 0; k < sp.n_elements(); ++k) {
    const QuadratureRule rule = sp.volume_rule(k, order);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const ScalarSample s = sample_scalar(sp, k, phi, rule.points[q]);
      acc += rule.weights[q] * mat.rho_a * dot(s.grad, s.grad);
    }
  }
  for (const Face& f : mesh.faces) {
    const bool interior = f.kind == FaceKind::InteriorAcoustic;
    if (!interior && f.kind != FaceKind::BoundaryAcousticDirichlet) continue;
    const double chi = stabilization_chi(mesh, f, mat, params);
    const QuadratureRule rule = segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], order);
    const int kl = sp.local_index(f.left_element);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double j = sample_scalar(sp, kl, phi, rule.points[q]).value;
      if (interior)
        j -= sample_scalar(sp, sp.local_index(f.right_element), phi, rule.points[q]).value;
      acc += rule.weights[q] * chi * j * j;
    }
  }
  return acc;
}

inline Eigen::VectorXd random_vector(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.sym();
  return v;
}

}  // namespace eaw::oracle

#endif
