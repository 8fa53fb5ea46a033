#include "eaw/analysis.hpp"

#include <cmath>
#include <cstdio>

namespace eaw {

namespace {

struct Strain {
  double exx = 0.0, eyy = 0.0, exy = 0.0;
  double div() const { return exx + eyy; }
};

struct Stress {
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  Vec2 times(const Vec2& n) const { return {sxx * n.x + sxy * n.y, sxy * n.x + syy * n.y}; }
  double frob2() const { return sxx * sxx + syy * syy + 2.0 * sxy * sxy; }
};

Stress to_stress(const Strain& e, const Material& m) {
  const double d = m.lambda * e.div();
  return {2.0 * m.mu * e.exx + d, 2.0 * m.mu * e.eyy + d, 2.0 * m.mu * e.exy};
}

// sigma : eps = C eps : eps
double energy_density(const Strain& e, const Material& m) {
  return 2.0 * m.mu * (e.exx * e.exx + e.eyy * e.eyy + 2.0 * e.exy * e.exy) +
         m.lambda * e.div() * e.div();
}

Strain strain_at(const DgSpace& sp, int k, const Eigen::VectorXd& u,
                 const std::vector<double>&, const std::vector<Vec2>& grads) {
  const int nm = sp.n_modes(k);
  const int off = sp.offset(k);
  Strain s;
  for (int m = 0; m < nm; ++m) {
    const double cx = u[off + m];
    const double cy = u[off + nm + m];
    s.exx += cx * grads[m].x;
    s.eyy += cy * grads[m].y;
    s.exy += 0.5 * (cx * grads[m].y + cy * grads[m].x);
  }
  return s;
}

Vec2 value_at_vec(const DgSpace& sp, int k, const Eigen::VectorXd& u,
                  const std::vector<double>& vals) {
  const int nm = sp.n_modes(k);
  const int off = sp.offset(k);
  Vec2 v;
  for (int m = 0; m < nm; ++m) {
    v.x += u[off + m] * vals[m];
    v.y += u[off + nm + m] * vals[m];
  }
  return v;
}

double value_at_scal(const DgSpace& sp, int k, const Eigen::VectorXd& phi,
                     const std::vector<double>& vals) {
  const int nm = sp.n_modes(k);
  const int off = sp.offset(k);
  double v = 0.0;
  for (int m = 0; m < nm; ++m) v += phi[off + m] * vals[m];
  return v;
}

Vec2 grad_at_scal(const DgSpace& sp, int k, const Eigen::VectorXd& phi,
                  const std::vector<Vec2>& grads) {
  const int nm = sp.n_modes(k);
  const int off = sp.offset(k);
  Vec2 g;
  for (int m = 0; m < nm; ++m) {
    g.x += phi[off + m] * grads[m].x;
    g.y += phi[off + m] * grads[m].y;
  }
  return g;
}

bool elastic_set(const Face& f) {
  return f.kind == FaceKind::InteriorElastic || f.kind == FaceKind::BoundaryElasticDirichlet;
}
bool acoustic_set(const Face& f) {
  return f.kind == FaceKind::InteriorAcoustic || f.kind == FaceKind::BoundaryAcousticDirichlet;
}

int face_order(const PolyMesh& mesh, const Face& f) {
  int p = mesh.elements[f.left_element].degree;
  if (f.right_element >= 0) p = std::max(p, mesh.elements[f.right_element].degree);
  return 2 * p + 2;
}

}  // namespace

NormReport dg_norms(const DgSpace& space_e, const DgSpace& space_a, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& phi, const Material& material,
                    const StabilizationParams& params) {
  NormReport r;
  const PolyMesh& mesh = space_e.mesh();

  double vol_e = 0.0, l2_e = 0.0;
  for (int k = 0; k < space_e.n_elements(); ++k) {
    const Basis& b = space_e.basis(k);
    const int nm = b.size();
    const QuadratureRule rule = space_e.volume_rule(k, 2 * b.degree() + 2);
    std::vector<double> vals(nm);
    std::vector<Vec2> grads(nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      b.eval_grad(rule.points[q], vals.data(), grads.data());
      const Strain s = strain_at(space_e, k, u, vals, grads);
      const Vec2 v = value_at_vec(space_e, k, u, vals);
      vol_e += rule.weights[q] * energy_density(s, material);
      l2_e += rule.weights[q] * dot(v, v);
    }
  }
  double vol_a = 0.0, l2_a = 0.0;
  for (int k = 0; k < space_a.n_elements(); ++k) {
    const Basis& b = space_a.basis(k);
    const int nm = b.size();
    const QuadratureRule rule = space_a.volume_rule(k, 2 * b.degree() + 2);
    std::vector<double> vals(nm);
    std::vector<Vec2> grads(nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      b.eval_grad(rule.points[q], vals.data(), grads.data());
      const Vec2 g = grad_at_scal(space_a, k, phi, grads);
      const double v = value_at_scal(space_a, k, phi, vals);
      vol_a += rule.weights[q] * material.rho_a * dot(g, g);
      l2_a += rule.weights[q] * v * v;
    }
  }

  double jump_e = 0.0, jump_a = 0.0;
  for (const Face& f : mesh.faces) {
    if (f.kind == FaceKind::Interface) continue;
    const QuadratureRule rule =
        segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], face_order(mesh, f));
    if (elastic_set(f)) {
      const double eta = stabilization_eta(mesh, f, material, params);
      const int kl = space_e.local_index(f.left_element);
      const int kr = f.right_element >= 0 ? space_e.local_index(f.right_element) : -1;
      std::vector<double> vl(space_e.n_modes(kl)), vr;
      if (kr >= 0) vr.resize(space_e.n_modes(kr));
      for (std::size_t q = 0; q < rule.size(); ++q) {
        space_e.basis(kl).eval(rule.points[q], vl.data());
        Vec2 jump = value_at_vec(space_e, kl, u, vl);
        if (kr >= 0) {
          space_e.basis(kr).eval(rule.points[q], vr.data());
          jump = jump - value_at_vec(space_e, kr, u, vr);
        }
        jump_e += rule.weights[q] * eta * dot(jump, jump);
      }
    } else if (acoustic_set(f)) {
      const double chi = stabilization_chi(mesh, f, material, params);
      const int kl = space_a.local_index(f.left_element);
      const int kr = f.right_element >= 0 ? space_a.local_index(f.right_element) : -1;
      std::vector<double> vl(space_a.n_modes(kl)), vr;
      if (kr >= 0) vr.resize(space_a.n_modes(kr));
      for (std::size_t q = 0; q < rule.size(); ++q) {
        space_a.basis(kl).eval(rule.points[q], vl.data());
        double jump = value_at_scal(space_a, kl, phi, vl);
        if (kr >= 0) {
          space_a.basis(kr).eval(rule.points[q], vr.data());
          jump -= value_at_scal(space_a, kr, phi, vr);
        }
        jump_a += rule.weights[q] * chi * jump * jump;
      }
    }
  }

  r.dg_e = std::sqrt(vol_e + jump_e);
  r.dg_a = std::sqrt(vol_a + jump_a);
  r.l2_e = std::sqrt(l2_e);
  r.l2_a = std::sqrt(l2_a);
  return r;
}

NormMatrices assemble_norm_matrices(const DgSpace& space_e, const DgSpace& space_a,
                                    const Material& material, const StabilizationParams& params,
                                    const AssemblyOptions& opts) {
  return {assemble_elastic_norm_matrix(space_e, material, params, opts),
          assemble_acoustic_norm_matrix(space_a, material, params, opts)};
}

EnergySplit energy_split(const State& state, const SystemMatrices& matrices,
                         const NormMatrices& norms, double dt) {
  EnergySplit e;
  const Eigen::VectorXd ve = (state.u_curr - state.u_prev) / dt;
  const Eigen::VectorXd va = (state.phi_curr - state.phi_prev) / dt;
  double ee = ve.dot(matrices.M_e1 * ve) + state.u_curr.dot(norms.N_e * state.u_curr);
  if (matrices.M_e3.nonZeros() > 0) ee += state.u_curr.dot(matrices.M_e3 * state.u_curr);
  double ea = va.dot(matrices.M_a * va) + state.phi_curr.dot(norms.N_a * state.phi_curr);
  e.elastic = std::sqrt(std::max(0.0, ee));
  e.acoustic = std::sqrt(std::max(0.0, ea));
  e.total = std::sqrt(std::max(0.0, ee + ea));
  return e;
}

double energy_norm(const State& state, const SystemMatrices& matrices, const NormMatrices& norms,
                   double dt) {
  return energy_split(state, matrices, norms, dt).total;
}

NormReport errors_vs_exact(const DgSpace& space_e, const DgSpace& space_a,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& phi,
                           const Scenario& scenario, double t,
                           const StabilizationParams& params) {
  if (!scenario.has_exact)
    throw std::logic_error("errors_vs_exact: scenario has no exact solution");
  NormReport r;
  r.t = t;
  const PolyMesh& mesh = space_e.mesh();
  const Material& material = scenario.material;

  double vol_e = 0.0, l2_e = 0.0;
  for (int k = 0; k < space_e.n_elements(); ++k) {
    const Basis& b = space_e.basis(k);
    const int nm = b.size();
    const QuadratureRule rule = space_e.volume_rule(k, 2 * b.degree() + 4);
    std::vector<double> vals(nm);
    std::vector<Vec2> grads(nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 p = rule.points[q];
      b.eval_grad(p, vals.data(), grads.data());
      Strain s = strain_at(space_e, k, u, vals, grads);
      const auto ge = scenario.exact_grad_u(p.x, p.y, t);  // {d/dx u, d/dy u}
      s.exx = ge[0].x - s.exx;
      s.eyy = ge[1].y - s.eyy;
      s.exy = 0.5 * (ge[1].x + ge[0].y) - s.exy;
      const Vec2 diff = scenario.exact_u(p.x, p.y, t) - value_at_vec(space_e, k, u, vals);
      vol_e += rule.weights[q] * energy_density(s, material);
      l2_e += rule.weights[q] * dot(diff, diff);
    }
  }

  double vol_a = 0.0, l2_a = 0.0;
  for (int k = 0; k < space_a.n_elements(); ++k) {
    const Basis& b = space_a.basis(k);
    const int nm = b.size();
    const QuadratureRule rule = space_a.volume_rule(k, 2 * b.degree() + 4);
    std::vector<double> vals(nm);
    std::vector<Vec2> grads(nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 p = rule.points[q];
      b.eval_grad(p, vals.data(), grads.data());
      const Vec2 g = scenario.exact_grad_phi(p.x, p.y, t) - grad_at_scal(space_a, k, phi, grads);
      const double diff = scenario.exact_phi(p.x, p.y, t) - value_at_scal(space_a, k, phi, vals);
      vol_a += rule.weights[q] * material.rho_a * dot(g, g);
      l2_a += rule.weights[q] * diff * diff;
    }
  }

  double jump_e = 0.0, jump_a = 0.0;
  for (const Face& f : mesh.faces) {
    if (f.kind == FaceKind::Interface) continue;
    const QuadratureRule rule =
        segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], face_order(mesh, f) + 2);
    if (elastic_set(f)) {
      const double eta = stabilization_eta(mesh, f, material, params);
      const int kl = space_e.local_index(f.left_element);
      const int kr = f.right_element >= 0 ? space_e.local_index(f.right_element) : -1;
      std::vector<double> vl(space_e.n_modes(kl)), vr;
      if (kr >= 0) vr.resize(space_e.n_modes(kr));
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 p = rule.points[q];
        space_e.basis(kl).eval(p, vl.data());
        Vec2 jump;
        if (kr >= 0) {
          space_e.basis(kr).eval(p, vr.data());
          jump = value_at_vec(space_e, kl, u, vl) - value_at_vec(space_e, kr, u, vr);
        } else {
          jump = scenario.exact_u(p.x, p.y, t) - value_at_vec(space_e, kl, u, vl);
        }
        jump_e += rule.weights[q] * eta * dot(jump, jump);
      }
    } else if (acoustic_set(f)) {
      const double chi = stabilization_chi(mesh, f, material, params);
      const int kl = space_a.local_index(f.left_element);
      const int kr = f.right_element >= 0 ? space_a.local_index(f.right_element) : -1;
      std::vector<double> vl(space_a.n_modes(kl)), vr;
      if (kr >= 0) vr.resize(space_a.n_modes(kr));
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 p = rule.points[q];
        space_a.basis(kl).eval(p, vl.data());
        double jump;
        if (kr >= 0) {
          space_a.basis(kr).eval(p, vr.data());
          jump = value_at_scal(space_a, kl, phi, vl) - value_at_scal(space_a, kr, phi, vr);
        } else {
          jump = scenario.exact_phi(p.x, p.y, t) - value_at_scal(space_a, kl, phi, vl);
        }
        jump_a += rule.weights[q] * chi * jump * jump;
      }
    }
  }

  r.dg_e = std::sqrt(vol_e + jump_e);
  r.dg_a = std::sqrt(vol_a + jump_a);
  r.l2_e = std::sqrt(l2_e);
  r.l2_a = std::sqrt(l2_a);
  return r;
}

const std::array<std::string, 4>& RateTable::column_names() {
  static const std::array<std::string, 4> names = {"err_dG_u", "err_dG_phi", "err_L2_u",
                                                   "err_L2_phi"};
  return names;
}

std::string RateTable::summary() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "slopes: dG(u) %.3f%s, dG(phi) %.3f%s, L2(u) %.3f%s, L2(phi) %.3f%s",
                slopes[0], monotone[0] ? "" : " [non-monotone]", slopes[1],
                monotone[1] ? "" : " [non-monotone]", slopes[2], monotone[2] ? "" : " [non-monotone]",
                slopes[3], monotone[3] ? "" : " [non-monotone]");
  return buf;
}

RateTable rate_table(std::vector<RateRow> rows) {
  if (rows.size() < 2) throw std::invalid_argument("rate_table: need at least 2 levels");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].h < rows[i - 1].h))
      throw std::invalid_argument("rate_table: h must be strictly decreasing");
  RateTable table;
  table.rows = std::move(rows);
  for (int c = 0; c < 4; ++c) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    bool mono = true;
    double prev = std::numeric_limits<double>::max();
    for (const auto& row : table.rows) {
      const double err = row.errors[c];
      if (!(err > 0.0)) continue;
      if (err >= prev) mono = false;
      prev = err;
      const double lx = std::log(row.h);
      const double ly = std::log(err);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    table.slopes[c] = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    table.monotone[c] = mono;
  }
  return table;
}

namespace {

// Per-face ingredients of the trace-inequality ratios, alpha-independent:
// the interior penalty is alpha * c_F, the boundary one is c_F itself.
struct FaceSplitAccum {
  double interior = 0.0;  // sum of I_F / c_F over interior faces
  double boundary = 0.0;  // sum over boundary faces
};

}  // namespace

LemmaA1Report verify_lemma_a1(const DgSpace& space_e, const DgSpace& space_a,
                              const Material& material, const std::vector<double>& alphas,
                              const std::vector<double>& betas, int samples, std::uint64_t seed) {
  const PolyMesh& mesh = space_e.mesh();
  LemmaA1Report report;
  report.alphas = alphas;
  report.betas = betas;
  report.elastic_interior.assign(alphas.size(), 0.0);
  report.elastic_all.assign(alphas.size(), 0.0);
  report.acoustic_interior.assign(betas.size(), 0.0);
  report.acoustic_all.assign(betas.size(), 0.0);
  const StabilizationParams unit{1.0, 1.0};

  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u(space_e.n_dofs());
    for (int i = 0; i < u.size(); ++i) u[i] = rng.sym();
    Eigen::VectorXd phi(space_a.n_dofs());
    for (int i = 0; i < phi.size(); ++i) phi[i] = rng.sym();

    // Elastic: I_F = int_F |{sigma_h(v)}|^2, c_F = penalty at alpha = 1.
    FaceSplitAccum el, ac;
    double den_e = 0.0, den_a = 0.0;
    for (int k = 0; k < space_e.n_elements(); ++k) {
      const Basis& b = space_e.basis(k);
      const QuadratureRule rule = space_e.volume_rule(k, 2 * b.degree() + 2);
      std::vector<double> vals(b.size());
      std::vector<Vec2> grads(b.size());
      for (std::size_t q = 0; q < rule.size(); ++q) {
        b.eval_grad(rule.points[q], vals.data(), grads.data());
        den_e += rule.weights[q] * energy_density(strain_at(space_e, k, u, vals, grads), material);
      }
    }
    for (int k = 0; k < space_a.n_elements(); ++k) {
      const Basis& b = space_a.basis(k);
      const QuadratureRule rule = space_a.volume_rule(k, 2 * b.degree() + 2);
      std::vector<double> vals(b.size());
      std::vector<Vec2> grads(b.size());
      for (std::size_t q = 0; q < rule.size(); ++q) {
        b.eval_grad(rule.points[q], vals.data(), grads.data());
        const Vec2 g = grad_at_scal(space_a, k, phi, grads);
        den_a += rule.weights[q] * material.rho_a * dot(g, g);
      }
    }

    for (const Face& f : mesh.faces) {
      if (f.kind == FaceKind::Interface) continue;
      const QuadratureRule rule =
          segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], face_order(mesh, f));
      if (elastic_set(f)) {
        const double c_f = stabilization_eta(mesh, f, material, unit);
        const int kl = space_e.local_index(f.left_element);
        const int kr = f.right_element >= 0 ? space_e.local_index(f.right_element) : -1;
        std::vector<double> vl(space_e.n_modes(kl)), vr;
        std::vector<Vec2> gl(space_e.n_modes(kl)), gr;
        if (kr >= 0) {
          vr.resize(space_e.n_modes(kr));
          gr.resize(space_e.n_modes(kr));
        }
        double integral = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          space_e.basis(kl).eval_grad(rule.points[q], vl.data(), gl.data());
          Stress avg = to_stress(strain_at(space_e, kl, u, vl, gl), material);
          if (kr >= 0) {
            space_e.basis(kr).eval_grad(rule.points[q], vr.data(), gr.data());
            const Stress sr = to_stress(strain_at(space_e, kr, u, vr, gr), material);
            avg = {0.5 * (avg.sxx + sr.sxx), 0.5 * (avg.syy + sr.syy), 0.5 * (avg.sxy + sr.sxy)};
          }
          integral += rule.weights[q] * avg.frob2();
        }
        (f.is_interior() ? el.interior : el.boundary) += integral / c_f;
      } else if (acoustic_set(f)) {
        const double c_f = stabilization_chi(mesh, f, material, unit);
        const int kl = space_a.local_index(f.left_element);
        const int kr = f.right_element >= 0 ? space_a.local_index(f.right_element) : -1;
        std::vector<double> vl(space_a.n_modes(kl)), vr;
        std::vector<Vec2> gl(space_a.n_modes(kl)), gr;
        if (kr >= 0) {
          vr.resize(space_a.n_modes(kr));
          gr.resize(space_a.n_modes(kr));
        }
        double integral = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          space_a.basis(kl).eval_grad(rule.points[q], vl.data(), gl.data());
          Vec2 avg = grad_at_scal(space_a, kl, phi, gl) * material.rho_a;
          if (kr >= 0) {
            space_a.basis(kr).eval_grad(rule.points[q], vr.data(), gr.data());
            avg = 0.5 * (avg + grad_at_scal(space_a, kr, phi, gr) * material.rho_a);
          }
          integral += rule.weights[q] * dot(avg, avg);
        }
        (f.is_interior() ? ac.interior : ac.boundary) += integral / c_f;
      }
    }

    // every face's penalty scales linearly with alpha (beta), so the ratio
    // picks up exactly alpha^{-1/2}
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const double a = alphas[i];
      if (den_e > 0.0) {
        report.elastic_interior[i] =
            std::max(report.elastic_interior[i], std::sqrt(el.interior / a / den_e));
        report.elastic_all[i] = std::max(report.elastic_all[i],
                                         std::sqrt((el.interior + el.boundary) / a / den_e));
      }
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const double b = betas[i];
      if (den_a > 0.0) {
        report.acoustic_interior[i] =
            std::max(report.acoustic_interior[i], std::sqrt(ac.interior / b / den_a));
        report.acoustic_all[i] = std::max(report.acoustic_all[i],
                                          std::sqrt((ac.interior + ac.boundary) / b / den_a));
      }
    }
  }
  return report;
}

double lemma_a2_wedge_min(const DgSpace& space_e, const DgSpace& space_a,
                          const Material& material, const StabilizationParams& params,
                          int samples, std::uint64_t seed) {
  const PolyMesh& mesh = space_e.mesh();
  Rng rng(seed);
  double worst = std::numeric_limits<double>::max();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u(space_e.n_dofs());
    for (int i = 0; i < u.size(); ++i) u[i] = rng.sym();
    Eigen::VectorXd phi(space_a.n_dofs());
    for (int i = 0; i < phi.size(); ++i) phi[i] = rng.sym();

    const NormReport norms = dg_norms(space_e, space_a, u, phi, material, params);
    const double dg2 = norms.dg_e * norms.dg_e + norms.dg_a * norms.dg_a;
    if (dg2 <= 0.0) continue;

    double cross = 0.0;
    for (const Face& f : mesh.faces) {
      if (f.kind == FaceKind::Interface) continue;
      const QuadratureRule rule =
          segment_rule(mesh.vertices[f.a], mesh.vertices[f.b], face_order(mesh, f));
      if (elastic_set(f)) {
        const int kl = space_e.local_index(f.left_element);
        const int kr = f.right_element >= 0 ? space_e.local_index(f.right_element) : -1;
        std::vector<double> vl(space_e.n_modes(kl)), vr;
        std::vector<Vec2> gl(space_e.n_modes(kl)), gr;
        if (kr >= 0) {
          vr.resize(space_e.n_modes(kr));
          gr.resize(space_e.n_modes(kr));
        }
        for (std::size_t q = 0; q < rule.size(); ++q) {
          space_e.basis(kl).eval_grad(rule.points[q], vl.data(), gl.data());
          Stress avg = to_stress(strain_at(space_e, kl, u, vl, gl), material);
          Vec2 jump = value_at_vec(space_e, kl, u, vl);
          if (kr >= 0) {
            space_e.basis(kr).eval_grad(rule.points[q], vr.data(), gr.data());
            const Stress sr = to_stress(strain_at(space_e, kr, u, vr, gr), material);
            avg = {0.5 * (avg.sxx + sr.sxx), 0.5 * (avg.syy + sr.syy), 0.5 * (avg.sxy + sr.sxy)};
            jump = jump - value_at_vec(space_e, kr, u, vr);
          }
          cross += rule.weights[q] * dot(avg.times(f.normal), jump);
        }
      } else if (acoustic_set(f)) {
        const int kl = space_a.local_index(f.left_element);
        const int kr = f.right_element >= 0 ? space_a.local_index(f.right_element) : -1;
        std::vector<double> vl(space_a.n_modes(kl)), vr;
        std::vector<Vec2> gl(space_a.n_modes(kl)), gr;
        if (kr >= 0) {
          vr.resize(space_a.n_modes(kr));
          gr.resize(space_a.n_modes(kr));
        }
        for (std::size_t q = 0; q < rule.size(); ++q) {
          space_a.basis(kl).eval_grad(rule.points[q], vl.data(), gl.data());
          Vec2 avg = grad_at_scal(space_a, kl, phi, gl) * material.rho_a;
          double jump = value_at_scal(space_a, kl, phi, vl);
          if (kr >= 0) {
            space_a.basis(kr).eval_grad(rule.points[q], vr.data(), gr.data());
            avg = 0.5 * (avg + grad_at_scal(space_a, kr, phi, gr) * material.rho_a);
            jump -= value_at_scal(space_a, kr, phi, vr);
          }
          cross += rule.weights[q] * dot(avg, f.normal) * jump;
        }
      }
    }
    worst = std::min(worst, (dg2 - 2.0 * cross) / dg2);
  }
  return worst;
}

}  // namespace eaw
