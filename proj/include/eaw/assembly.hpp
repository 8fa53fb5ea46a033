#ifndef EAW_ASSEMBLY_HPP
#define EAW_ASSEMBLY_HPP

#include <Eigen/Sparse>

#include "eaw/material.hpp"
#include "eaw/scenario.hpp"
#include "eaw/space.hpp"

namespace eaw {

using SpMat = Eigen::SparseMatrix<double>;

struct AssemblyOptions {
  int threads = 1;
  /// Diagnostic knob: drop boundary-face terms (pure interior operator).
  bool include_boundary_faces = true;
};

/// Face penalty for the elastic form: alpha * max over neighbors of
/// cbar p^2 / h on interior faces, alpha times the one-sided expression on
/// boundary faces. Interface faces carry no stabilization.
double stabilization_eta(const PolyMesh& mesh, const Face& face, const Material& material,
                         const StabilizationParams& params);
/// Acoustic counterpart with rho_a p^2 / h and beta.
double stabilization_chi(const PolyMesh& mesh, const Face& face, const Material& material,
                         const StabilizationParams& params);

enum class MassKind { ElasticM1, ElasticM2, ElasticM3, AcousticM };

/// (rho_e u, v), (2 rho_e zeta u, v), (rho_e zeta^2 u, v), (c^-2 rho_a phi, psi).
SpMat assemble_mass(const DgSpace& space, const Material& material, MassKind which,
                    const AssemblyOptions& opts = {});

SpMat assemble_elastic_stiffness(const DgSpace& space_e, const Material& material,
                                 const StabilizationParams& params,
                                 const AssemblyOptions& opts = {});

SpMat assemble_acoustic_stiffness(const DgSpace& space_a, const Material& material,
                                  const StabilizationParams& params,
                                  const AssemblyOptions& opts = {});

/// dG-norm matrices: volume energy term plus jump penalty, no consistency
/// terms. v' N v reproduces the squared dG norm of a discrete field.
SpMat assemble_elastic_norm_matrix(const DgSpace& space_e, const Material& material,
                                   const StabilizationParams& params,
                                   const AssemblyOptions& opts = {});
SpMat assemble_acoustic_norm_matrix(const DgSpace& space_a, const Material& material,
                                    const StabilizationParams& params,
                                    const AssemblyOptions& opts = {});

/// Interface coupling C_e[i, j] = int_Gamma_I rho_a psi_j (v_i . n_e) ds.
/// The acoustic-side block is -C_e^T by construction, never re-integrated.
/// Meshes without interface faces yield an all-zero matrix (with a warning).
SpMat assemble_coupling(const DgSpace& space_e, const DgSpace& space_a, const Material& material);

struct SystemMatrices {
  SpMat M_e1, M_e2, M_e3, A_e, C_e, M_a, A_a;

  int n_elastic() const { return static_cast<int>(M_e1.rows()); }
  int n_acoustic() const { return static_cast<int>(M_a.rows()); }
  SpMat coupling_acoustic() const { return SpMat(-C_e.transpose()); }
};

SystemMatrices assemble_system(const DgSpace& space_e, const DgSpace& space_a,
                               const Material& material, const StabilizationParams& params,
                               const AssemblyOptions& opts = {});

/// Load vectors as sums of separable terms: volume sources, weak Dirichlet
/// lifts (mirroring the one-sided SIPG consistency terms), and mollified
/// point sources. F(t) is a linear combination of precomputed spatial
/// vectors, so time stepping does not re-integrate.
struct LoadParts {
  std::vector<std::pair<TimeFunc, Eigen::VectorXd>> elastic;
  std::vector<std::pair<TimeFunc, Eigen::VectorXd>> acoustic;

  Eigen::VectorXd elastic_at(double t, int n) const;
  Eigen::VectorXd acoustic_at(double t, int n) const;
};

LoadParts assemble_load_parts(const DgSpace& space_e, const DgSpace& space_a,
                              const Scenario& scenario, const StabilizationParams& params,
                              const AssemblyOptions& opts = {});

/// (F_e(t), F_a(t)) evaluated through the separable decomposition.
std::pair<Eigen::VectorXd, Eigen::VectorXd> assemble_load(const DgSpace& space_e,
                                                          const DgSpace& space_a,
                                                          const Scenario& scenario,
                                                          const StabilizationParams& params,
                                                          double t,
                                                          const AssemblyOptions& opts = {});

/// Coordinate-format dump, one "row col value" line per entry.
void dump_matrix(const SpMat& m, const std::string& path);

}  // namespace eaw

#endif
