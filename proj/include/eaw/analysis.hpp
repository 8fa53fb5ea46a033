#ifndef EAW_ANALYSIS_HPP
#define EAW_ANALYSIS_HPP

#include <array>
#include <string>
#include <vector>

#include "eaw/assembly.hpp"
#include "eaw/timestepper.hpp"

namespace eaw {

struct NormReport {
  double dg_e = 0.0;
  double dg_a = 0.0;
  double l2_e = 0.0;
  double l2_a = 0.0;
  double energy = 0.0;
  double t = 0.0;
};

/// dG norms of discrete coefficient fields by direct quadrature loops over
/// elements and faces (the matrix-free route; the assembled norm matrices
/// are the second route and the two are cross-checked in the tests).
NormReport dg_norms(const DgSpace& space_e, const DgSpace& space_a, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& phi, const Material& material,
                    const StabilizationParams& params);

struct NormMatrices {
  SpMat N_e, N_a;
};

NormMatrices assemble_norm_matrices(const DgSpace& space_e, const DgSpace& space_a,
                                    const Material& material, const StabilizationParams& params,
                                    const AssemblyOptions& opts = {});

struct EnergySplit {
  double elastic = 0.0;
  double acoustic = 0.0;
  double total = 0.0;
};

/// Discrete energy at the current level; the velocity is the backward
/// difference (x_curr - x_prev) / dt.
EnergySplit energy_split(const State& state, const SystemMatrices& matrices,
                         const NormMatrices& norms, double dt);
double energy_norm(const State& state, const SystemMatrices& matrices, const NormMatrices& norms,
                   double dt);

/// dG- and L2-errors against the scenario's exact solution at time t. The
/// dG error combines the volume terms of (exact - discrete), the interior
/// jumps of the discrete field (the exact one is continuous), and the
/// boundary mismatch. Quadrature runs two orders above assembly.
NormReport errors_vs_exact(const DgSpace& space_e, const DgSpace& space_a,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& phi,
                           const Scenario& scenario, double t,
                           const StabilizationParams& params);

struct RateRow {
  double h = 0.0;
  long dofs = 0;
  // err_dg_u, err_dg_phi, err_l2_u, err_l2_phi
  std::array<double, 4> errors{};
};

struct RateTable {
  std::vector<RateRow> rows;
  std::array<double, 4> slopes{};
  std::array<bool, 4> monotone{};

  static const std::array<std::string, 4>& column_names();
  std::string summary() const;
};

/// Least-squares slopes of log(error) against log(h). Requires h strictly
/// decreasing; non-monotone error columns are flagged but still fitted.
RateTable rate_table(std::vector<RateRow> rows);

struct LemmaA1Report {
  std::vector<double> alphas;
  // max over sample fields of ||eta^{-1/2}{sigma_h(v)}|| / ||C^{1/2}eps_h(v)||
  std::vector<double> elastic_interior;  // interior faces (penalty scales with alpha)
  std::vector<double> elastic_all;       // full elastic face set
  std::vector<double> betas;
  std::vector<double> acoustic_interior;
  std::vector<double> acoustic_all;
};

/// Stress/flux-average trace inequality ratios for a grid of stabilization
/// constants, over seeded random discrete fields.
LemmaA1Report verify_lemma_a1(const DgSpace& space_e, const DgSpace& space_a,
                              const Material& material, const std::vector<double>& alphas,
                              const std::vector<double>& betas, int samples,
                              std::uint64_t seed = 2024);

/// Coercivity wedge: min over random fields of
///   (||W||_dG^2 - 2(<{sigma(v)},[v]> + <{rho_a grad psi},[psi]>)) / ||W||_dG^2.
double lemma_a2_wedge_min(const DgSpace& space_e, const DgSpace& space_a,
                          const Material& material, const StabilizationParams& params,
                          int samples, std::uint64_t seed = 2024);

struct EnergyTracePoint {
  double t = 0.0;
  double elastic = 0.0;
  double acoustic = 0.0;
  double total = 0.0;
};

}  // namespace eaw

#endif
