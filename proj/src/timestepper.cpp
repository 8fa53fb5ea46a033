#include "eaw/timestepper.hpp"

#include <cmath>

namespace eaw {

namespace {

SpMat block_system(const SystemMatrices& m, double dt) {
  const int ne = m.n_elastic();
  const int na = m.n_acoustic();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(m.M_e1.nonZeros()) + m.M_e2.nonZeros() +
                2 * m.C_e.nonZeros() + m.M_a.nonZeros());
  auto add = [&](const SpMat& a, int r0, int c0, double scale) {
    for (int k = 0; k < a.outerSize(); ++k)
      for (SpMat::InnerIterator it(a, k); it; ++it)
        trips.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()),
                           scale * it.value());
  };
  add(m.M_e1, 0, 0, 1.0);
  if (m.M_e2.nonZeros() > 0) add(m.M_e2, 0, 0, 0.5 * dt);
  add(m.C_e, 0, ne, 0.5 * dt);
  const SpMat cet = m.C_e.transpose();
  add(cet, ne, 0, -0.5 * dt);
  add(m.M_a, ne, ne, 1.0);
  SpMat lhs(ne + na, ne + na);
  lhs.setFromTriplets(trips.begin(), trips.end());
  lhs.makeCompressed();
  return lhs;
}

}  // namespace

LeapfrogOperator::LeapfrogOperator(const SystemMatrices& m, double dt)
    : dt_(dt), ne_(m.n_elastic()), na_(m.n_acoustic()) {
  if (!(dt > 0.0)) throw std::invalid_argument("LeapfrogOperator: dt must be positive");
  lhs_ = block_system(m, dt);
  lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
  lu_->compute(lhs_);
  if (lu_->info() != Eigen::Success)
    throw std::runtime_error(
        "leap-frog left block is singular (broken mass matrix or dt-coupling pathology)");
}

Eigen::VectorXd LeapfrogOperator::solve(const Eigen::VectorXd& rhs) const {
  return lu_->solve(rhs);
}

State initial_state_from(const DgSpace& space_e, const DgSpace& space_a,
                         const std::function<Vec2(double, double)>& u0,
                         const std::function<Vec2(double, double)>& u1,
                         const std::function<double(double, double)>& phi0,
                         const std::function<double(double, double)>& phi1, double dt) {
  State s;
  s.u_prev = l2_project(space_e, u0);
  const Eigen::VectorXd v0 = l2_project(space_e, u1);
  s.phi_prev = l2_project(space_a, phi0);
  const Eigen::VectorXd psi0 = l2_project(space_a, phi1);
  s.u_curr = s.u_prev + dt * v0;
  s.phi_curr = s.phi_prev + dt * psi0;
  s.n = 1;
  s.t = dt;
  return s;
}

State initial_state(const Scenario& scenario, const DgSpace& space_e, const DgSpace& space_a,
                    double dt) {
  return initial_state_from(space_e, space_a, scenario.u0, scenario.u1, scenario.phi0,
                            scenario.phi1, dt);
}

State initial_state(const Scenario& scenario, const DgSpace& space_e, const DgSpace& space_a,
                    double dt, const SystemMatrices& m, const LoadParts& loads) {
  State s = initial_state(scenario, space_e, space_a, dt);
  const Eigen::VectorXd v0 = (s.u_curr - s.u_prev) / dt;
  const Eigen::VectorXd psi0 = (s.phi_curr - s.phi_prev) / dt;

  Eigen::VectorXd re = loads.elastic_at(0.0, space_e.n_dofs()) - m.A_e * s.u_prev;
  if (m.M_e2.nonZeros() > 0) re -= m.M_e2 * v0;
  if (m.M_e3.nonZeros() > 0) re -= m.M_e3 * s.u_prev;
  if (m.C_e.nonZeros() > 0) re -= m.C_e * psi0;
  Eigen::VectorXd ra = loads.acoustic_at(0.0, space_a.n_dofs()) - m.A_a * s.phi_prev;
  if (m.C_e.nonZeros() > 0) ra += m.C_e.transpose() * v0;

  Eigen::SimplicialLDLT<SpMat> me(m.M_e1), ma(m.M_a);
  if (me.info() != Eigen::Success || ma.info() != Eigen::Success)
    throw std::runtime_error("initial_state: mass factorization failed");
  s.u_curr += 0.5 * dt * dt * me.solve(re);
  s.phi_curr += 0.5 * dt * dt * ma.solve(ra);
  return s;
}

LeapfrogOperator build_operator(const SystemMatrices& matrices, double dt) {
  return LeapfrogOperator(matrices, dt);
}

void step(const LeapfrogOperator& op, const SystemMatrices& m, State& state,
          const Eigen::VectorXd& load_e, const Eigen::VectorXd& load_a) {
  const double dt = op.dt();
  const double dt2 = dt * dt;
  const int ne = op.n_elastic();
  const int na = op.n_acoustic();

  Eigen::VectorXd rhs(ne + na);
  {
    Eigen::VectorXd r1 = 2.0 * (m.M_e1 * state.u_curr) - dt2 * (m.A_e * state.u_curr) -
                         m.M_e1 * state.u_prev + dt2 * load_e;
    if (m.M_e3.nonZeros() > 0) r1 -= dt2 * (m.M_e3 * state.u_curr);
    if (m.M_e2.nonZeros() > 0) r1 += 0.5 * dt * (m.M_e2 * state.u_prev);
    if (m.C_e.nonZeros() > 0) r1 += 0.5 * dt * (m.C_e * state.phi_prev);
    rhs.head(ne) = r1;
  }
  {
    Eigen::VectorXd r2 = 2.0 * (m.M_a * state.phi_curr) - dt2 * (m.A_a * state.phi_curr) -
                         m.M_a * state.phi_prev + dt2 * load_a;
    if (m.C_e.nonZeros() > 0) r2 -= 0.5 * dt * (m.C_e.transpose() * state.u_prev);
    rhs.tail(na) = r2;
  }

  const Eigen::VectorXd sol = op.solve(rhs);
  state.u_prev = std::move(state.u_curr);
  state.phi_prev = std::move(state.phi_curr);
  state.u_curr = sol.head(ne);
  state.phi_curr = sol.tail(na);
  state.n += 1;
  state.t = static_cast<double>(state.n) * dt;

  const double check = (ne > 0 ? state.u_curr.lpNorm<Eigen::Infinity>() : 0.0) +
                       (na > 0 ? state.phi_curr.lpNorm<Eigen::Infinity>() : 0.0);
  if (!std::isfinite(check)) throw divergence_error(state.n);
}

double estimate_stable_dt(const SystemMatrices& m, double safety) {
  if (!(safety > 0.0)) throw std::invalid_argument("estimate_stable_dt: safety must be positive");
  const int ne = m.n_elastic();
  const int na = m.n_acoustic();
  const int n = ne + na;

  SpMat mass(n, n), stiff(n, n);
  {
    std::vector<Eigen::Triplet<double>> tm, tk;
    auto add = [](std::vector<Eigen::Triplet<double>>& t, const SpMat& a, int o) {
      for (int k = 0; k < a.outerSize(); ++k)
        for (SpMat::InnerIterator it(a, k); it; ++it)
          t.emplace_back(o + static_cast<int>(it.row()), o + static_cast<int>(it.col()),
                         it.value());
    };
    add(tm, m.M_e1, 0);
    add(tm, m.M_a, ne);
    add(tk, m.A_e, 0);
    if (m.M_e3.nonZeros() > 0) add(tk, m.M_e3, 0);
    add(tk, m.A_a, ne);
    mass.setFromTriplets(tm.begin(), tm.end());
    stiff.setFromTriplets(tk.begin(), tk.end());
  }
  Eigen::SimplicialLDLT<SpMat> msolve(mass);
  if (msolve.info() != Eigen::Success)
    throw std::runtime_error("estimate_stable_dt: mass matrix factorization failed");

  Rng rng(0xCF1ull);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.sym();
  v.normalize();

  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd w = msolve.solve(stiff * v);
    const double raw = v.dot(stiff * v) / v.dot(mass * v);
    const double nw = w.norm();
    if (nw == 0.0) {
      lambda = 0.0;
      converged = true;
      break;
    }
    v = w / nw;
    if (it > 0 && std::abs(raw - lambda) <= 1e-5 * std::abs(raw)) {
      lambda = raw;
      converged = true;
      break;
    }
    lambda = raw;
  }
  if (!converged)
    throw std::runtime_error("estimate_stable_dt: power iteration did not converge in 1e4 rounds");
  if (lambda <= 0.0) throw std::runtime_error("estimate_stable_dt: nonpositive spectral estimate");
  return safety * 2.0 / std::sqrt(lambda);
}

RunSetup prepare_run(const Scenario& scenario, const PolyMesh& mesh,
                     const StabilizationParams& params, double dt, double T,
                     const AssemblyOptions& opts) {
  if (!(dt > 0.0) || !(T > 0.0))
    throw std::invalid_argument("prepare_run: dt and T must be positive");
  RunSetup s;
  s.space_e = DgSpace(mesh, SpaceKind::VectorElastic);
  s.space_a = DgSpace(mesh, SpaceKind::ScalarAcoustic);
  s.matrices = assemble_system(s.space_e, s.space_a, scenario.material, params, opts);
  s.loads = assemble_load_parts(s.space_e, s.space_a, scenario, params, opts);
  s.op = std::make_unique<LeapfrogOperator>(s.matrices, dt);
  s.state = initial_state(scenario, s.space_e, s.space_a, dt, s.matrices, s.loads);
  s.dt = dt;
  s.n_steps = std::lround(T / dt);
  if (s.n_steps < 1 || std::abs(s.n_steps * dt - T) > 1e-9 * std::max(T, 1.0))
    throw std::invalid_argument("prepare_run: dt must divide T (N_T = round(T/dt))");
  return s;
}

State run_loop(RunSetup& s, const Probe& probe, int cadence) {
  const int ne = s.space_e.n_dofs();
  const int na = s.space_a.n_dofs();
  if (probe) probe({s.state.n, s.state.t, s.state});
  for (long n = 1; n < s.n_steps; ++n) {
    const double tn = static_cast<double>(n) * s.dt;
    const Eigen::VectorXd fe = s.loads.elastic_at(tn, ne);
    const Eigen::VectorXd fa = s.loads.acoustic_at(tn, na);
    step(*s.op, s.matrices, s.state, fe, fa);
    if (probe && ((cadence > 0 && s.state.n % cadence == 0) || s.state.n == s.n_steps))
      probe({s.state.n, s.state.t, s.state});
  }
  return s.state;
}

State run(const Scenario& scenario, const PolyMesh& mesh, const StabilizationParams& params,
          double dt, double T, const Probe& probe, int cadence, const AssemblyOptions& opts) {
  RunSetup s = prepare_run(scenario, mesh, params, dt, T, opts);
  return run_loop(s, probe, cadence);
}

}  // namespace eaw
