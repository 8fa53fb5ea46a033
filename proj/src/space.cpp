#include "eaw/space.hpp"

#include <stdexcept>

namespace eaw {

namespace {

Rect element_bbox(const PolyMesh& mesh, int e) {
  const auto& ids = mesh.elements[e].vertex_ids;
  Rect r{mesh.vertices[ids[0]].x, mesh.vertices[ids[0]].x, mesh.vertices[ids[0]].y,
         mesh.vertices[ids[0]].y};
  for (int v : ids) {
    r.xmin = std::min(r.xmin, mesh.vertices[v].x);
    r.xmax = std::max(r.xmax, mesh.vertices[v].x);
    r.ymin = std::min(r.ymin, mesh.vertices[v].y);
    r.ymax = std::max(r.ymax, mesh.vertices[v].y);
  }
  return r;
}

Eigen::MatrixXd local_mass(const DgSpace& space, int k, int order) {
  const Basis& basis = space.basis(k);
  const QuadratureRule rule = space.volume_rule(k, order);
  const int nm = basis.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nm, nm);
  std::vector<double> phi(nm);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.eval(rule.points[q], phi.data());
    const double w = rule.weights[q];
    for (int i = 0; i < nm; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) += w * phi[i] * phi[j];
  }
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return m;
}

}  // namespace

DgSpace::DgSpace(const PolyMesh& mesh, SpaceKind kind) : mesh_(&mesh), kind_(kind) {
  const Region want = region();
  local_of_mesh_.assign(mesh.elements.size(), -1);
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    if (mesh.elements[e].region != want) continue;
    local_of_mesh_[e] = static_cast<int>(element_ids_.size());
    element_ids_.push_back(e);
    bases_.emplace_back(element_bbox(mesh, e), mesh.elements[e].degree);
    offsets_.push_back(n_dofs_);
    n_dofs_ += components() * bases_.back().size();
    max_degree_ = std::max(max_degree_, mesh.elements[e].degree);
  }
}

QuadratureRule DgSpace::volume_rule(int k, int order) const {
  const PolyElement& el = mesh_->elements[element_ids_[k]];
  std::vector<std::array<Vec2, 3>> tris;
  tris.reserve(el.subtriangles.size());
  for (const auto& t : el.subtriangles) tris.push_back(mesh_->triangle(t));
  return composite_triangle_rule(tris, order);
}

Vec2 DgSpace::eval_vector(const Eigen::VectorXd& coeffs, int k, const Vec2& p) const {
  const Basis& b = bases_[k];
  const int nm = b.size();
  const int off = offsets_[k];
  std::vector<double> phi(nm);
  b.eval(p, phi.data());
  Vec2 v;
  for (int m = 0; m < nm; ++m) {
    v.x += coeffs[off + m] * phi[m];
    v.y += coeffs[off + nm + m] * phi[m];
  }
  return v;
}

double DgSpace::eval_scalar(const Eigen::VectorXd& coeffs, int k, const Vec2& p) const {
  const Basis& b = bases_[k];
  const int nm = b.size();
  const int off = offsets_[k];
  std::vector<double> phi(nm);
  b.eval(p, phi.data());
  double v = 0.0;
  for (int m = 0; m < nm; ++m) v += coeffs[off + m] * phi[m];
  return v;
}

namespace {

template <typename Closure, int Comp>
Eigen::VectorXd project_impl(const DgSpace& space, const Closure& f, int quad_order) {
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(space.n_dofs());
  for (int k = 0; k < space.n_elements(); ++k) {
    const Basis& basis = space.basis(k);
    const int p = basis.degree();
    const int order = quad_order < 0 ? 2 * p + 2 : quad_order;
    const Eigen::MatrixXd m = local_mass(space, k, order);
    const QuadratureRule rule = space.volume_rule(k, order);
    const int nm = basis.size();
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nm, Comp);
    std::vector<double> phi(nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.eval(rule.points[q], phi.data());
      const double w = rule.weights[q];
      if constexpr (Comp == 1) {
        const double val = f(rule.points[q].x, rule.points[q].y);
        for (int i = 0; i < nm; ++i) rhs(i, 0) += w * phi[i] * val;
      } else {
        const Vec2 val = f(rule.points[q].x, rule.points[q].y);
        for (int i = 0; i < nm; ++i) {
          rhs(i, 0) += w * phi[i] * val.x;
          rhs(i, 1) += w * phi[i] * val.y;
        }
      }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw std::runtime_error("l2_project: singular local mass matrix on element " +
                               std::to_string(space.element_id(k)) +
                               " (basis/quadrature order mismatch)");
    const Eigen::MatrixXd sol = ldlt.solve(rhs);
    for (int c = 0; c < Comp; ++c)
      coeffs.segment(space.offset(k) + c * nm, nm) = sol.col(c);
  }
  return coeffs;
}

}  // namespace

Eigen::VectorXd l2_project(const DgSpace& space, const ScalarClosure& f, int quad_order) {
  return project_impl<ScalarClosure, 1>(space, f, quad_order);
}

Eigen::VectorXd l2_project(const DgSpace& space, const VectorClosure& f, int quad_order) {
  return project_impl<VectorClosure, 2>(space, f, quad_order);
}

double max_local_mass_condition(const DgSpace& space) {
  double worst = 1.0;
  for (int k = 0; k < space.n_elements(); ++k) {
    const Eigen::MatrixXd m = local_mass(space, k, 2 * space.basis(k).degree() + 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0)
      throw std::runtime_error("local mass matrix not positive definite on element " +
                               std::to_string(space.element_id(k)));
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

}  // namespace eaw
