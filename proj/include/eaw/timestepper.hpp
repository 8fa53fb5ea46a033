#ifndef EAW_TIMESTEPPER_HPP
#define EAW_TIMESTEPPER_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>

#include "eaw/assembly.hpp"
#include "eaw/errors.hpp"

namespace eaw {

/// Two consecutive coefficient levels of both fields.
struct State {
  Eigen::VectorXd u_prev, u_curr;
  Eigen::VectorXd phi_prev, phi_curr;
  long n = 1;
  double t = 0.0;
};

/// Factorized left block
///   [ M_e1 + dt/2 M_e2    dt/2 C_e ]
///   [ -dt/2 C_e^T         M_a      ]
/// reused across all steps.
class LeapfrogOperator {
 public:
  LeapfrogOperator(const SystemMatrices& m, double dt);

  double dt() const { return dt_; }
  int n_elastic() const { return ne_; }
  int n_acoustic() const { return na_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
  SpMat lhs_;
  double dt_ = 0.0;
  int ne_ = 0, na_ = 0;
};

State initial_state_from(const DgSpace& space_e, const DgSpace& space_a,
                         const std::function<Vec2(double, double)>& u0,
                         const std::function<Vec2(double, double)>& u1,
                         const std::function<double(double, double)>& phi0,
                         const std::function<double(double, double)>& phi1, double dt);

/// L2 projections of the scenario's initial data, then the first-order
/// Taylor startup U^1 = U^0 + dt V^0, Phi^1 = Phi^0 + dt Psi^0.
State initial_state(const Scenario& scenario, const DgSpace& space_e, const DgSpace& space_a,
                    double dt);

/// Startup including the (dt^2/2) acceleration term, with the accelerations
/// solved from the semi-discrete system at t = 0. Keeps the scheme globally
/// second order; the plain Taylor start costs one order because the startup
/// perturbation is amplified by 1/dt across the two leap-frog modes.
State initial_state(const Scenario& scenario, const DgSpace& space_e, const DgSpace& space_a,
                    double dt, const SystemMatrices& matrices, const LoadParts& loads);

LeapfrogOperator build_operator(const SystemMatrices& matrices, double dt);

/// One leap-frog level: state at (n-1, n) plus loads at t_n gives n+1.
/// Throws divergence_error when the new state is not finite.
void step(const LeapfrogOperator& op, const SystemMatrices& matrices, State& state,
          const Eigen::VectorXd& load_e, const Eigen::VectorXd& load_a);

/// CFL time-step estimate: power iteration for lambda_max of
/// diag(M_e1, M_a)^{-1} diag(A_e + M_e3, A_a), then safety * 2 / sqrt(lambda).
/// The interface coupling is ignored by the estimate; the default safety 0.5
/// compensates. Throws if the iteration has not settled after 10^4 rounds.
double estimate_stable_dt(const SystemMatrices& matrices, double safety = 0.5);

struct StepInfo {
  long n;
  double t;
  const State& state;
};
using Probe = std::function<void(const StepInfo&)>;

struct RunSetup {
  DgSpace space_e, space_a;
  SystemMatrices matrices;
  LoadParts loads;
  std::unique_ptr<LeapfrogOperator> op;
  State state;
  double dt = 0.0;
  long n_steps = 0;  // number of time levels N_T = round(T / dt)
};

RunSetup prepare_run(const Scenario& scenario, const PolyMesh& mesh,
                     const StabilizationParams& params, double dt, double T,
                     const AssemblyOptions& opts = {});

/// Advance to t = T. The probe fires at the startup level, every `cadence`
/// steps, and at the final level.
State run_loop(RunSetup& setup, const Probe& probe = {}, int cadence = 0);

/// Convenience wrapper: prepare + loop.
State run(const Scenario& scenario, const PolyMesh& mesh, const StabilizationParams& params,
          double dt, double T, const Probe& probe = {}, int cadence = 0,
          const AssemblyOptions& opts = {});

}  // namespace eaw

#endif
