#ifndef EAW_SPACE_HPP
#define EAW_SPACE_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "eaw/basis.hpp"
#include "eaw/mesh.hpp"
#include "eaw/quadrature.hpp"

namespace eaw {

enum class SpaceKind { VectorElastic, ScalarAcoustic };

using ScalarClosure = std::function<double(double, double)>;
using VectorClosure = std::function<Vec2(double, double)>;

/// Discontinuous modal space over one region of the mesh. Elastic spaces are
/// vector-valued with component-blocked local dofs: local index c*n_modes+m.
class DgSpace {
 public:
  DgSpace() = default;
  DgSpace(const PolyMesh& mesh, SpaceKind kind);

  const PolyMesh& mesh() const { return *mesh_; }
  SpaceKind kind() const { return kind_; }
  int components() const { return kind_ == SpaceKind::VectorElastic ? 2 : 1; }
  Region region() const {
    return kind_ == SpaceKind::VectorElastic ? Region::Elastic : Region::Acoustic;
  }

  int n_dofs() const { return n_dofs_; }
  int n_elements() const { return static_cast<int>(element_ids_.size()); }
  /// Mesh element id of the k-th element of this space.
  int element_id(int k) const { return element_ids_[k]; }
  /// Space-local element index for a mesh element id (-1 if other region).
  int local_index(int mesh_element) const { return local_of_mesh_[mesh_element]; }

  const Basis& basis(int k) const { return bases_[k]; }
  int offset(int k) const { return offsets_[k]; }
  int n_modes(int k) const { return bases_[k].size(); }
  int block_size(int k) const { return components() * bases_[k].size(); }
  int max_degree() const { return max_degree_; }

  /// Volume rule over the element subtriangulation, exact for the given
  /// total degree.
  QuadratureRule volume_rule(int k, int order) const;

  Vec2 eval_vector(const Eigen::VectorXd& coeffs, int k, const Vec2& p) const;
  double eval_scalar(const Eigen::VectorXd& coeffs, int k, const Vec2& p) const;

 private:
  const PolyMesh* mesh_ = nullptr;
  SpaceKind kind_ = SpaceKind::VectorElastic;
  std::vector<int> element_ids_;
  std::vector<int> local_of_mesh_;
  std::vector<int> offsets_;
  std::vector<Basis> bases_;
  int n_dofs_ = 0;
  int max_degree_ = 0;
};

/// Element-wise L2 projection of a closure onto the space. quad_order < 0
/// selects the default 2p+2. Throws if a local mass matrix is singular.
Eigen::VectorXd l2_project(const DgSpace& space, const ScalarClosure& f, int quad_order = -1);
Eigen::VectorXd l2_project(const DgSpace& space, const VectorClosure& f, int quad_order = -1);

/// Condition number estimate of the worst local mass matrix (diagnostic).
double max_local_mass_condition(const DgSpace& space);

}  // namespace eaw

#endif
