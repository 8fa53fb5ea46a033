#include "eaw/assembly.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "eaw/parallel.hpp"
#include "eaw/quadrature.hpp"

namespace eaw {

namespace {

using Triplet = Eigen::Triplet<double>;

bool in_elastic_face_set(const Face& f) {
  return f.kind == FaceKind::InteriorElastic || f.kind == FaceKind::BoundaryElasticDirichlet;
}
bool in_acoustic_face_set(const Face& f) {
  return f.kind == FaceKind::InteriorAcoustic || f.kind == FaceKind::BoundaryAcousticDirichlet;
}

// Boundary faces carry the same alpha (beta) factor as interior ones. With a
// bare C p^2/h boundary penalty the one-sided consistency terms dominate and
// the stiffness matrices turn indefinite (lambda_min ~ -1e3 already on a unit
// square), which breaks coercivity and blows up the leap-frog iteration; the
// scaled penalty is also what the trace-inequality argument behind the
// coercivity bound uses on every face.
double penalty_over(const PolyMesh& mesh, const Face& face, double alpha,
                    const std::function<double(const PolyElement&)>& coef) {
  const PolyElement& left = mesh.elements[face.left_element];
  if (face.right_element < 0) {
    const double p = static_cast<double>(left.degree);
    return alpha * coef(left) * p * p / left.diameter;
  }
  const PolyElement& right = mesh.elements[face.right_element];
  const double pl = static_cast<double>(left.degree);
  const double pr = static_cast<double>(right.degree);
  return alpha * std::max(coef(left) * pl * pl / left.diameter,
                          coef(right) * pr * pr / right.diameter);
}

// Traction sigma(e_c phi_m) n of a basis function with gradient g.
inline Vec2 traction(const Vec2& g, int c, const Vec2& n, double mu, double lambda) {
  const double gn = dot(g, n);
  if (c == 0)
    return {mu * (gn + g.x * n.x) + lambda * g.x * n.x, mu * g.y * n.x + lambda * g.x * n.y};
  return {mu * g.x * n.y + lambda * g.y * n.x, mu * (gn + g.y * n.y) + lambda * g.y * n.y};
}

struct SideTrace {
  int space_elem = -1;  // space-local element index
  int nm = 0;
  double sign = 1.0;
  Eigen::MatrixXd phi;     // nm x nq
  std::vector<Vec2> grad;  // nm * nq, mode-major
};

SideTrace make_trace(const DgSpace& space, int mesh_elem, const QuadratureRule& rule,
                     double sign) {
  SideTrace tr;
  tr.space_elem = space.local_index(mesh_elem);
  const Basis& basis = space.basis(tr.space_elem);
  tr.nm = basis.size();
  tr.sign = sign;
  const int nq = static_cast<int>(rule.size());
  tr.phi.resize(tr.nm, nq);
  tr.grad.resize(static_cast<std::size_t>(tr.nm) * nq);
  std::vector<double> vals(tr.nm);
  std::vector<Vec2> grads(tr.nm);
  for (int q = 0; q < nq; ++q) {
    basis.eval_grad(rule.points[q], vals.data(), grads.data());
    for (int m = 0; m < tr.nm; ++m) {
      tr.phi(m, q) = vals[m];
      tr.grad[static_cast<std::size_t>(m) * nq + q] = grads[m];
    }
  }
  return tr;
}

enum class StiffnessMode { Sipg, NormOnly };

// Elastic volume term (sigma_h(u), eps_h(v)) on one element.
Eigen::MatrixXd elastic_volume_block(const DgSpace& space, int k, const Material& mat) {
  const Basis& basis = space.basis(k);
  const int nm = basis.size();
  const QuadratureRule rule = space.volume_rule(k, 2 * basis.degree() + 2);
  Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(2 * nm, 2 * nm);
  std::vector<double> vals(nm);
  std::vector<Vec2> g(nm);
  const double mu = mat.mu, lam = mat.lambda;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.eval_grad(rule.points[q], vals.data(), g.data());
    const double w = rule.weights[q];
    for (int i = 0; i < nm; ++i)
      for (int j = 0; j < nm; ++j) {
        kmat(i, j) += w * ((2 * mu + lam) * g[i].x * g[j].x + mu * g[i].y * g[j].y);
        kmat(i, nm + j) += w * (lam * g[i].x * g[j].y + mu * g[i].y * g[j].x);
        kmat(nm + i, j) += w * (lam * g[i].y * g[j].x + mu * g[i].x * g[j].y);
        kmat(nm + i, nm + j) += w * ((2 * mu + lam) * g[i].y * g[j].y + mu * g[i].x * g[j].x);
      }
  }
  return kmat;
}

Eigen::MatrixXd acoustic_volume_block(const DgSpace& space, int k, const Material& mat) {
  const Basis& basis = space.basis(k);
  const int nm = basis.size();
  const QuadratureRule rule = space.volume_rule(k, 2 * basis.degree() + 2);
  Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(nm, nm);
  std::vector<double> vals(nm);
  std::vector<Vec2> g(nm);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.eval_grad(rule.points[q], vals.data(), g.data());
    const double w = rule.weights[q] * mat.rho_a;
    for (int i = 0; i < nm; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = w * dot(g[i], g[j]);
        kmat(i, j) += v;
        if (j != i) kmat(j, i) += v;
      }
  }
  return kmat;
}

// Elastic SIPG face block over the stacked side dofs.
Eigen::MatrixXd elastic_face_block(const PolyMesh& mesh, const Face& face,
                                   const std::vector<SideTrace>& sides,
                                   const QuadratureRule& rule, double eta, const Material& mat,
                                   StiffnessMode mode) {
  (void)mesh;
  int total = 0;
  for (const auto& s : sides) total += 2 * s.nm;
  Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(total, total);
  const double af = sides.size() == 2 ? 0.5 : 1.0;
  const int nq = static_cast<int>(rule.size());
  const Vec2 n = face.normal;

  for (int q = 0; q < nq; ++q) {
    const double w = rule.weights[q];
    int row0 = 0;
    for (const auto& st : sides) {
      int col0 = 0;
      for (const auto& ss : sides) {
        for (int ct = 0; ct < 2; ++ct)
          for (int mt = 0; mt < st.nm; ++mt) {
            const int row = row0 + ct * st.nm + mt;
            const double pt = st.phi(mt, q);
            const Vec2 tt = mode == StiffnessMode::Sipg
                                ? traction(st.grad[static_cast<std::size_t>(mt) * nq + q], ct, n,
                                           mat.mu, mat.lambda)
                                : Vec2{};
            for (int cs = 0; cs < 2; ++cs)
              for (int ms = 0; ms < ss.nm; ++ms) {
                const int col = col0 + cs * ss.nm + ms;
                const double ps = ss.phi(ms, q);
                double v = 0.0;
                if (ct == cs) v += eta * st.sign * ss.sign * pt * ps;
                if (mode == StiffnessMode::Sipg) {
                  const Vec2 ts = traction(ss.grad[static_cast<std::size_t>(ms) * nq + q], cs, n,
                                           mat.mu, mat.lambda);
                  v -= af * st.sign * pt * (ct == 0 ? ts.x : ts.y);
                  v -= af * ss.sign * ps * (cs == 0 ? tt.x : tt.y);
                }
                kmat(row, col) += w * v;
              }
          }
        col0 += 2 * ss.nm;
      }
      row0 += 2 * st.nm;
    }
  }
  return kmat;
}

Eigen::MatrixXd acoustic_face_block(const Face& face, const std::vector<SideTrace>& sides,
                                    const QuadratureRule& rule, double chi, const Material& mat,
                                    StiffnessMode mode) {
  int total = 0;
  for (const auto& s : sides) total += s.nm;
  Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(total, total);
  const double af = sides.size() == 2 ? 0.5 : 1.0;
  const int nq = static_cast<int>(rule.size());
  const Vec2 n = face.normal;

  for (int q = 0; q < nq; ++q) {
    const double w = rule.weights[q];
    int row0 = 0;
    for (const auto& st : sides) {
      int col0 = 0;
      for (const auto& ss : sides) {
        for (int mt = 0; mt < st.nm; ++mt)
          for (int ms = 0; ms < ss.nm; ++ms) {
            const double pt = st.phi(mt, q);
            const double ps = ss.phi(ms, q);
            double v = chi * st.sign * ss.sign * pt * ps;
            if (mode == StiffnessMode::Sipg) {
              const double gs = dot(ss.grad[static_cast<std::size_t>(ms) * nq + q], n);
              const double gt = dot(st.grad[static_cast<std::size_t>(mt) * nq + q], n);
              v -= af * mat.rho_a * (st.sign * pt * gs + ss.sign * ps * gt);
            }
            kmat(row0 + mt, col0 + ms) += w * v;
          }
        col0 += ss.nm;
      }
      row0 += st.nm;
    }
  }
  return kmat;
}

int face_quad_order(const PolyMesh& mesh, const Face& face) {
  int p = mesh.elements[face.left_element].degree;
  if (face.right_element >= 0) p = std::max(p, mesh.elements[face.right_element].degree);
  return 2 * p + 2;
}

// The composite rules are exact for the requested order by construction;
// this guards the wiring (subtriangulation coverage, weight scaling) on the
// cheapest observable, the cell area.
void quadrature_self_check(const DgSpace& space) {
  for (int k = 0; k < std::min(space.n_elements(), 4); ++k) {
    const double area = space.mesh().elements[space.element_id(k)].area;
    const double rule_area = space.volume_rule(k, 2).total_weight();
    if (std::abs(rule_area - area) > 1e-12 * std::max(area, 1.0))
      throw std::runtime_error("assembly error: quadrature self-check failed on element " +
                               std::to_string(space.element_id(k)));
  }
}

SpMat stiffness_impl(const DgSpace& space, const Material& material,
                     const StabilizationParams& params, const AssemblyOptions& opts,
                     StiffnessMode mode, bool elastic) {
  material.validate();
  params.validate();
  quadrature_self_check(space);
  const PolyMesh& mesh = space.mesh();
  const int comps = elastic ? 2 : 1;

  // Volume blocks, computed per element (parallel), merged in element order.
  std::vector<Eigen::MatrixXd> vol(space.n_elements());
  parallel_for(space.n_elements(), opts.threads, [&](int k) {
    vol[k] = elastic ? elastic_volume_block(space, k, material)
                     : acoustic_volume_block(space, k, material);
  });

  // Face blocks.
  std::vector<int> face_ids;
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const Face& face = mesh.faces[f];
    const bool in_set = elastic ? in_elastic_face_set(face) : in_acoustic_face_set(face);
    if (!in_set) continue;
    if (!opts.include_boundary_faces && face.is_boundary()) continue;
    face_ids.push_back(f);
  }
  struct FaceBlock {
    Eigen::MatrixXd k;
    std::vector<int> elems;  // space-local
  };
  std::vector<FaceBlock> fb(face_ids.size());
  parallel_for(static_cast<int>(face_ids.size()), opts.threads, [&](int idx) {
    const Face& face = mesh.faces[face_ids[idx]];
    const QuadratureRule rule =
        segment_rule(mesh.vertices[face.a], mesh.vertices[face.b], face_quad_order(mesh, face));
    std::vector<SideTrace> sides;
    sides.push_back(make_trace(space, face.left_element, rule, +1.0));
    if (face.right_element >= 0)
      sides.push_back(make_trace(space, face.right_element, rule, -1.0));
    const double pen = elastic ? stabilization_eta(mesh, face, material, params)
                               : stabilization_chi(mesh, face, material, params);
    fb[idx].k = elastic ? elastic_face_block(mesh, face, sides, rule, pen, material, mode)
                        : acoustic_face_block(face, sides, rule, pen, material, mode);
    for (const auto& s : sides) fb[idx].elems.push_back(s.space_elem);
  });

  // Canonical merge: volume blocks by element, then face blocks by face id.
  std::vector<Triplet> trips;
  std::size_t nnz = 0;
  for (int k = 0; k < space.n_elements(); ++k) nnz += static_cast<std::size_t>(vol[k].size());
  for (const auto& b : fb) nnz += static_cast<std::size_t>(b.k.size());
  trips.reserve(nnz);
  for (int k = 0; k < space.n_elements(); ++k) {
    const int off = space.offset(k);
    const int bs = comps * space.n_modes(k);
    for (int i = 0; i < bs; ++i)
      for (int j = 0; j < bs; ++j) trips.emplace_back(off + i, off + j, vol[k](i, j));
  }
  for (const auto& b : fb) {
    std::vector<int> offs, sizes;
    for (int e : b.elems) {
      offs.push_back(space.offset(e));
      sizes.push_back(comps * space.n_modes(e));
    }
    int r0 = 0;
    for (std::size_t si = 0; si < b.elems.size(); ++si) {
      int c0 = 0;
      for (std::size_t sj = 0; sj < b.elems.size(); ++sj) {
        for (int i = 0; i < sizes[si]; ++i)
          for (int j = 0; j < sizes[sj]; ++j)
            trips.emplace_back(offs[si] + i, offs[sj] + j, b.k(r0 + i, c0 + j));
        c0 += sizes[sj];
      }
      r0 += sizes[si];
    }
  }
  SpMat a(space.n_dofs(), space.n_dofs());
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

}  // namespace

double stabilization_eta(const PolyMesh& mesh, const Face& face, const Material& material,
                         const StabilizationParams& params) {
  if (face.kind == FaceKind::Interface)
    throw std::logic_error("stabilization_eta: interface faces carry no stabilization");
  if (!in_elastic_face_set(face))
    throw std::logic_error("stabilization_eta: face is not in the elastic face set");
  return penalty_over(mesh, face, params.alpha,
                      [&](const PolyElement&) { return material.cbar(); });
}

double stabilization_chi(const PolyMesh& mesh, const Face& face, const Material& material,
                         const StabilizationParams& params) {
  if (face.kind == FaceKind::Interface)
    throw std::logic_error("stabilization_chi: interface faces carry no stabilization");
  if (!in_acoustic_face_set(face))
    throw std::logic_error("stabilization_chi: face is not in the acoustic face set");
  return penalty_over(mesh, face, params.beta,
                      [&](const PolyElement&) { return material.rho_a; });
}

SpMat assemble_mass(const DgSpace& space, const Material& material, MassKind which,
                    const AssemblyOptions& opts) {
  material.validate();
  double coef = 0.0;
  switch (which) {
    case MassKind::ElasticM1: coef = material.rho_e; break;
    case MassKind::ElasticM2: coef = 2.0 * material.rho_e * material.zeta; break;
    case MassKind::ElasticM3: coef = material.rho_e * material.zeta * material.zeta; break;
    case MassKind::AcousticM: coef = material.rho_a / (material.c * material.c); break;
  }
  const bool elastic = which != MassKind::AcousticM;
  if ((elastic && space.kind() != SpaceKind::VectorElastic) ||
      (!elastic && space.kind() != SpaceKind::ScalarAcoustic))
    throw std::logic_error("assemble_mass: space kind does not match the requested matrix");

  SpMat m(space.n_dofs(), space.n_dofs());
  if (coef == 0.0) return m;  // exactly zero (e.g. zeta = 0)

  const int comps = space.components();
  std::vector<Eigen::MatrixXd> blocks(space.n_elements());
  parallel_for(space.n_elements(), opts.threads, [&](int k) {
    const Basis& basis = space.basis(k);
    const int nm = basis.size();
    const QuadratureRule rule = space.volume_rule(k, 2 * basis.degree() + 2);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nm, nm);
    std::vector<double> vals(nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.eval(rule.points[q], vals.data());
      const double w = rule.weights[q] * coef;
      for (int i = 0; i < nm; ++i)
        for (int j = 0; j <= i; ++j) {
          const double v = w * vals[i] * vals[j];
          b(i, j) += v;
          if (i != j) b(j, i) += v;
        }
    }
    blocks[k] = std::move(b);
  });

  std::vector<Triplet> trips;
  for (int k = 0; k < space.n_elements(); ++k) {
    const int off = space.offset(k);
    const int nm = space.n_modes(k);
    for (int c = 0; c < comps; ++c)
      for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nm; ++j)
          trips.emplace_back(off + c * nm + i, off + c * nm + j, blocks[k](i, j));
  }
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

SpMat assemble_elastic_stiffness(const DgSpace& space_e, const Material& material,
                                 const StabilizationParams& params, const AssemblyOptions& opts) {
  return stiffness_impl(space_e, material, params, opts, StiffnessMode::Sipg, true);
}

SpMat assemble_acoustic_stiffness(const DgSpace& space_a, const Material& material,
                                  const StabilizationParams& params, const AssemblyOptions& opts) {
  return stiffness_impl(space_a, material, params, opts, StiffnessMode::Sipg, false);
}

SpMat assemble_elastic_norm_matrix(const DgSpace& space_e, const Material& material,
                                   const StabilizationParams& params,
                                   const AssemblyOptions& opts) {
  return stiffness_impl(space_e, material, params, opts, StiffnessMode::NormOnly, true);
}

SpMat assemble_acoustic_norm_matrix(const DgSpace& space_a, const Material& material,
                                    const StabilizationParams& params,
                                    const AssemblyOptions& opts) {
  return stiffness_impl(space_a, material, params, opts, StiffnessMode::NormOnly, false);
}

SpMat assemble_coupling(const DgSpace& space_e, const DgSpace& space_a,
                        const Material& material) {
  material.validate();
  const PolyMesh& mesh = space_e.mesh();
  std::vector<Triplet> trips;
  bool any = false;
  for (const Face& face : mesh.faces) {
    if (face.kind != FaceKind::Interface) continue;
    any = true;
    const int ke = space_e.local_index(face.left_element);
    const int ka = space_a.local_index(face.right_element);
    if (ke < 0 || ka < 0)
      throw std::logic_error("assemble_coupling: interface face with wrong element regions");
    const Basis& be = space_e.basis(ke);
    const Basis& ba = space_a.basis(ka);
    const int order = be.degree() + ba.degree() + 2;
    const QuadratureRule rule = segment_rule(mesh.vertices[face.a], mesh.vertices[face.b], order);
    const int ne = be.size(), na = ba.size();
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * ne, na);
    std::vector<double> pe(ne), pa(na);
    const Vec2 n = face.normal;  // outward from the elastic side
    for (std::size_t q = 0; q < rule.size(); ++q) {
      be.eval(rule.points[q], pe.data());
      ba.eval(rule.points[q], pa.data());
      const double w = rule.weights[q] * material.rho_a;
      for (int j = 0; j < na; ++j)
        for (int i = 0; i < ne; ++i) {
          block(i, j) += w * pa[j] * pe[i] * n.x;
          block(ne + i, j) += w * pa[j] * pe[i] * n.y;
        }
    }
    const int oe = space_e.offset(ke);
    const int oa = space_a.offset(ka);
    for (int i = 0; i < 2 * ne; ++i)
      for (int j = 0; j < na; ++j) trips.emplace_back(oe + i, oa + j, block(i, j));
  }
  if (!any)
    std::cerr << "warning: assemble_coupling: mesh has no interface faces, coupling is zero\n";
  SpMat c(space_e.n_dofs(), space_a.n_dofs());
  c.setFromTriplets(trips.begin(), trips.end());
  c.makeCompressed();
  return c;
}

SystemMatrices assemble_system(const DgSpace& space_e, const DgSpace& space_a,
                               const Material& material, const StabilizationParams& params,
                               const AssemblyOptions& opts) {
  SystemMatrices m;
  m.M_e1 = assemble_mass(space_e, material, MassKind::ElasticM1, opts);
  m.M_e2 = assemble_mass(space_e, material, MassKind::ElasticM2, opts);
  m.M_e3 = assemble_mass(space_e, material, MassKind::ElasticM3, opts);
  m.A_e = assemble_elastic_stiffness(space_e, material, params, opts);
  m.C_e = assemble_coupling(space_e, space_a, material);
  m.M_a = assemble_mass(space_a, material, MassKind::AcousticM, opts);
  m.A_a = assemble_acoustic_stiffness(space_a, material, params, opts);
  return m;
}

Eigen::VectorXd LoadParts::elastic_at(double t, int n) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (const auto& [time, spatial] : elastic) f += time(t) * spatial;
  return f;
}

Eigen::VectorXd LoadParts::acoustic_at(double t, int n) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (const auto& [time, spatial] : acoustic) f += time(t) * spatial;
  return f;
}

namespace {

Eigen::VectorXd elastic_volume_load(const DgSpace& space,
                                    const std::function<Vec2(double, double)>& s, int extra_order,
                                    const AssemblyOptions& opts) {
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(space.n_dofs());
  std::vector<Eigen::VectorXd> locals(space.n_elements());
  parallel_for(space.n_elements(), opts.threads, [&](int k) {
    const Basis& basis = space.basis(k);
    const int nm = basis.size();
    const QuadratureRule rule = space.volume_rule(k, 2 * basis.degree() + 2 + extra_order);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(2 * nm);
    std::vector<double> vals(nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.eval(rule.points[q], vals.data());
      const Vec2 f = s(rule.points[q].x, rule.points[q].y);
      const double w = rule.weights[q];
      for (int m = 0; m < nm; ++m) {
        local[m] += w * vals[m] * f.x;
        local[nm + m] += w * vals[m] * f.y;
      }
    }
    locals[k] = std::move(local);
  });
  for (int k = 0; k < space.n_elements(); ++k)
    vec.segment(space.offset(k), 2 * space.n_modes(k)) = locals[k];
  return vec;
}

Eigen::VectorXd acoustic_volume_load(const DgSpace& space,
                                     const std::function<double(double, double)>& s, double coef,
                                     int extra_order, const AssemblyOptions& opts) {
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(space.n_dofs());
  std::vector<Eigen::VectorXd> locals(space.n_elements());
  parallel_for(space.n_elements(), opts.threads, [&](int k) {
    const Basis& basis = space.basis(k);
    const int nm = basis.size();
    const QuadratureRule rule = space.volume_rule(k, 2 * basis.degree() + 2 + extra_order);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(nm);
    std::vector<double> vals(nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.eval(rule.points[q], vals.data());
      const double f = coef * s(rule.points[q].x, rule.points[q].y);
      for (int m = 0; m < nm; ++m) local[m] += rule.weights[q] * vals[m] * f;
    }
    locals[k] = std::move(local);
  });
  for (int k = 0; k < space.n_elements(); ++k)
    vec.segment(space.offset(k), space.n_modes(k)) = locals[k];
  return vec;
}

// Weak Dirichlet data lift on elastic boundary faces:
// <eta g, v> - <g (x) n, sigma_h(v)>.
Eigen::VectorXd elastic_lift(const DgSpace& space, const Material& mat,
                             const StabilizationParams& params,
                             const std::function<Vec2(double, double)>& g) {
  const PolyMesh& mesh = space.mesh();
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(space.n_dofs());
  for (const Face& face : mesh.faces) {
    if (face.kind != FaceKind::BoundaryElasticDirichlet) continue;
    const int k = space.local_index(face.left_element);
    const Basis& basis = space.basis(k);
    const int nm = basis.size();
    const double eta = stabilization_eta(mesh, face, mat, params);
    const QuadratureRule rule =
        segment_rule(mesh.vertices[face.a], mesh.vertices[face.b], face_quad_order(mesh, face));
    std::vector<double> vals(nm);
    std::vector<Vec2> grads(nm);
    const Vec2 n = face.normal;
    const int off = space.offset(k);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.eval_grad(rule.points[q], vals.data(), grads.data());
      const Vec2 gv = g(rule.points[q].x, rule.points[q].y);
      const double w = rule.weights[q];
      for (int c = 0; c < 2; ++c)
        for (int m = 0; m < nm; ++m) {
          const Vec2 tr = traction(grads[m], c, n, mat.mu, mat.lambda);
          const double gc = c == 0 ? gv.x : gv.y;
          vec[off + c * nm + m] += w * (eta * gc * vals[m] - dot(tr, gv));
        }
    }
  }
  return vec;
}

// Acoustic lift: <chi g, psi> - <g n, rho_a grad_h psi>.
Eigen::VectorXd acoustic_lift(const DgSpace& space, const Material& mat,
                              const StabilizationParams& params,
                              const std::function<double(double, double)>& g) {
  const PolyMesh& mesh = space.mesh();
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(space.n_dofs());
  for (const Face& face : mesh.faces) {
    if (face.kind != FaceKind::BoundaryAcousticDirichlet) continue;
    const int k = space.local_index(face.left_element);
    const Basis& basis = space.basis(k);
    const int nm = basis.size();
    const double chi = stabilization_chi(mesh, face, mat, params);
    const QuadratureRule rule =
        segment_rule(mesh.vertices[face.a], mesh.vertices[face.b], face_quad_order(mesh, face));
    std::vector<double> vals(nm);
    std::vector<Vec2> grads(nm);
    const Vec2 n = face.normal;
    const int off = space.offset(k);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.eval_grad(rule.points[q], vals.data(), grads.data());
      const double gv = g(rule.points[q].x, rule.points[q].y);
      const double w = rule.weights[q];
      for (int m = 0; m < nm; ++m)
        vec[off + m] += w * (chi * gv * vals[m] - mat.rho_a * dot(grads[m], n) * gv);
    }
  }
  return vec;
}

}  // namespace

LoadParts assemble_load_parts(const DgSpace& space_e, const DgSpace& space_a,
                              const Scenario& scenario, const StabilizationParams& params,
                              const AssemblyOptions& opts) {
  LoadParts parts;
  const Material& mat = scenario.material;
  for (const auto& term : scenario.forcing_e)
    parts.elastic.emplace_back(term.time, elastic_volume_load(space_e, term.space, 0, opts));
  for (const auto& term : scenario.dirichlet_e)
    parts.elastic.emplace_back(term.time, elastic_lift(space_e, mat, params, term.space));
  for (const auto& term : scenario.forcing_a)
    parts.acoustic.emplace_back(term.time,
                                acoustic_volume_load(space_a, term.space, mat.rho_a, 0, opts));
  for (const auto& term : scenario.dirichlet_a)
    parts.acoustic.emplace_back(term.time, acoustic_lift(space_a, mat, params, term.space));
  for (const auto& src : scenario.point_sources) {
    // The bump is narrow relative to h; give the one-time integral a few
    // extra quadrature orders.
    auto spatial = [src](double x, double y) { return src.spatial(x, y); };
    parts.acoustic.emplace_back([src](double t) { return src.time_factor(t); },
                                acoustic_volume_load(space_a, spatial, mat.rho_a, 4, opts));
  }
  return parts;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> assemble_load(const DgSpace& space_e,
                                                          const DgSpace& space_a,
                                                          const Scenario& scenario,
                                                          const StabilizationParams& params,
                                                          double t, const AssemblyOptions& opts) {
  const LoadParts parts = assemble_load_parts(space_e, space_a, scenario, params, opts);
  return {parts.elastic_at(t, space_e.n_dofs()), parts.acoustic_at(t, space_a.n_dofs())};
}

void dump_matrix(const SpMat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix dump: " + path);
  char buf[80];
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      out << buf;
    }
}

}  // namespace eaw
