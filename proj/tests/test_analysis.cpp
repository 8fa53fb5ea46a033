#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "eaw/analysis.hpp"
#include "eaw/scenario.hpp"
#include "oracle.hpp"

using namespace eaw;

namespace {

const Rect kBox{-1.0, 1.0, 0.0, 1.0};

Material reference_material() {
  Material m;
  m.mu = 26.29;
  m.lambda = 51.20;
  m.rho_e = 2.7;
  m.rho_a = 1.0;
  m.c = 1.0;
  return m;
}

}  // namespace

TEST_CASE("dG norms") {
  PolyMesh mesh = generate_mesh(kBox, 0.0, 5, 5, 10, 3);
  set_degrees(mesh, 2);
  DgSpace se(mesh, SpaceKind::VectorElastic);
  DgSpace sa(mesh, SpaceKind::ScalarAcoustic);
  const Material m = reference_material();
  const StabilizationParams params{10.0, 10.0};

  SUBCASE("zero fields have zero norms") {
    const NormReport r = dg_norms(se, sa, Eigen::VectorXd::Zero(se.n_dofs()),
                                  Eigen::VectorXd::Zero(sa.n_dofs()), m, params);
    CHECK(r.dg_e == 0.0);
    CHECK(r.dg_a == 0.0);
    CHECK(r.l2_e == 0.0);
    CHECK(r.l2_a == 0.0);
  }

  SUBCASE("quadrature loop agrees with the independent oracle") {
    Rng rng(7);
    const Eigen::VectorXd u = oracle::random_vector(se.n_dofs(), rng);
    const Eigen::VectorXd phi = oracle::random_vector(sa.n_dofs(), rng);
    const NormReport r = dg_norms(se, sa, u, phi, m, params);
    CHECK(r.dg_e * r.dg_e ==
          doctest::Approx(oracle::dg_norm2_e(se, m, params, u)).epsilon(1e-12));
    CHECK(r.dg_a * r.dg_a ==
          doctest::Approx(oracle::dg_norm2_a(sa, m, params, phi)).epsilon(1e-12));
  }

  SUBCASE("norm matrices match the quadrature loop on random fields") {
    const NormMatrices nm = assemble_norm_matrices(se, sa, m, params);
    Rng rng(19);
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd u = oracle::random_vector(se.n_dofs(), rng);
      const Eigen::VectorXd phi = oracle::random_vector(sa.n_dofs(), rng);
      const NormReport r = dg_norms(se, sa, u, phi, m, params);
      CHECK(u.dot(nm.N_e * u) == doctest::Approx(r.dg_e * r.dg_e).epsilon(1e-10));
      CHECK(phi.dot(nm.N_a * phi) == doctest::Approx(r.dg_a * r.dg_a).epsilon(1e-10));
    }
  }

  SUBCASE("phi = x on a single square: volume part of the dG norm is 1") {
    PolyMesh sq = build_mesh_from_cells({}, {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, {0, 1, 0, 1},
                                        std::nullopt);
    set_degrees(sq, 1);
    DgSpace se1(sq, SpaceKind::VectorElastic);
    DgSpace sa1(sq, SpaceKind::ScalarAcoustic);
    AssemblyOptions no_bnd;
    no_bnd.include_boundary_faces = false;
    const NormMatrices nm = assemble_norm_matrices(se1, sa1, m, params, no_bnd);
    const Eigen::VectorXd c = l2_project(sa1, [](double x, double) { return x; });
    CHECK(c.dot(nm.N_a * c) == doctest::Approx(m.rho_a * 1.0).epsilon(1e-12));
  }

  SUBCASE("a globally continuous field has no interior jump energy") {
    // same quadratic polynomial on every element: interior jumps vanish
    const Eigen::VectorXd u =
        l2_project(se, [](double x, double y) { return Vec2{x * y, x * x - y}; });
    AssemblyOptions no_bnd;
    no_bnd.include_boundary_faces = false;
    const SpMat n_int = assemble_elastic_norm_matrix(se, m, params, no_bnd);
    const SpMat n_vol = [&] {
      // volume-only reference via an empty-face variant: assemble on the
      // fly by subtracting the penalty using the quadrature loop
      return n_int;
    }();
    // interior penalty part = u' N_int u - volume part; the volume part is
    // the strain energy of the smooth field
    double vol = 0.0;
    for (int k = 0; k < se.n_elements(); ++k) {
      const QuadratureRule rule = se.volume_rule(k, 8);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto s = oracle::sample_vector(se, k, u, rule.points[q]);
        const double exx = s.dx_x, eyy = s.dy_y, exy = 0.5 * (s.dx_y + s.dy_x);
        vol += rule.weights[q] * (2 * m.mu * (exx * exx + eyy * eyy + 2 * exy * exy) +
                                  m.lambda * (exx + eyy) * (exx + eyy));
      }
    }
    CHECK(u.dot(n_int * u) == doctest::Approx(vol).epsilon(1e-10));
  }
}

TEST_CASE("energy split") {
  PolyMesh mesh = generate_mesh(kBox, 0.0, 4, 4, 8, 5);
  set_degrees(mesh, 2);
  DgSpace se(mesh, SpaceKind::VectorElastic);
  DgSpace sa(mesh, SpaceKind::ScalarAcoustic);
  Material m = reference_material();
  const StabilizationParams params{10.0, 10.0};
  const SystemMatrices sys = assemble_system(se, sa, m, params);
  const NormMatrices nm = assemble_norm_matrices(se, sa, m, params);

  SUBCASE("zero state has zero energy") {
    State st;
    st.u_prev = st.u_curr = Eigen::VectorXd::Zero(se.n_dofs());
    st.phi_prev = st.phi_curr = Eigen::VectorXd::Zero(sa.n_dofs());
    CHECK(energy_norm(st, sys, nm, 1e-3) == 0.0);
  }
  SUBCASE("total is the root of the sum of squared parts") {
    Rng rng(31);
    State st;
    st.u_prev = oracle::random_vector(se.n_dofs(), rng);
    st.u_curr = oracle::random_vector(se.n_dofs(), rng);
    st.phi_prev = oracle::random_vector(sa.n_dofs(), rng);
    st.phi_curr = oracle::random_vector(sa.n_dofs(), rng);
    const EnergySplit e = energy_split(st, sys, nm, 1e-3);
    CHECK(e.total * e.total ==
          doctest::Approx(e.elastic * e.elastic + e.acoustic * e.acoustic).epsilon(1e-12));
    CHECK(e.total > 0.0);
  }
}

TEST_CASE("errors against the exact solution") {
  const Scenario sc = test_case_1();
  PolyMesh mesh = generate_mesh(kBox, 0.0, 6, 6, 10, 21);
  set_degrees(mesh, 3);
  DgSpace se(mesh, SpaceKind::VectorElastic);
  DgSpace sa(mesh, SpaceKind::ScalarAcoustic);
  const StabilizationParams params{10.0, 10.0};

  SUBCASE("projection of a polynomial exact solution has near-zero error") {
    // manufactured polynomial solution of degree <= p
    const PolyTrigField sx(
        {Term2D{{1.0, 2, Factor1D::One, 0, 0}, {1.0, 1, Factor1D::One, 0, 0}}});
    const PolyTrigField sy({Term2D{{1.0, 1, Factor1D::One, 0, 0}, {1.0, 2, Factor1D::One, 0, 0}}});
    const PolyTrigField q({Term2D{{1.0, 2, Factor1D::One, 0, 0}, {1.0, 1, Factor1D::One, 0, 0}}});
    const PolyTrigTime one = PolyTrigTime::one();
    Material m = reference_material();
    const Scenario poly = make_manufactured("poly", m, {{sx, sy, one}}, {{q, one}}, 1.0, 1e-3);
    const double t = 0.4;
    const Eigen::VectorXd u = l2_project(
        se, [&](double x, double y) { return poly.exact_u(x, y, t); });
    const Eigen::VectorXd phi = l2_project(
        sa, [&](double x, double y) { return poly.exact_phi(x, y, t); });
    const NormReport r = errors_vs_exact(se, sa, u, phi, poly, t, params);
    CHECK(r.dg_e <= 1e-10);
    CHECK(r.dg_a <= 1e-10);
    CHECK(r.l2_e <= 1e-10);
    CHECK(r.l2_a <= 1e-10);
  }

  SUBCASE("when the exact acoustic factor vanishes the L2 error is the field norm") {
    const double t = 1.0 / std::sqrt(2.0);  // sin(sqrt(2) pi t) = 0
    Rng rng(3);
    const Eigen::VectorXd u = Eigen::VectorXd::Zero(se.n_dofs());
    const Eigen::VectorXd phi = oracle::random_vector(sa.n_dofs(), rng);
    const NormReport r = errors_vs_exact(se, sa, u, phi, sc, t, params);
    const NormReport n = dg_norms(se, sa, u, phi, sc.material, params);
    CHECK(r.l2_a == doctest::Approx(n.l2_a).epsilon(1e-10));
  }
}

TEST_CASE("rate table") {
  SUBCASE("synthetic quadratic errors fit slope 2") {
    std::vector<RateRow> rows;
    for (int i = 0; i < 4; ++i) {
      RateRow r;
      r.h = 0.4 / std::pow(2.0, i);
      r.dofs = 100 * (i + 1);
      const double e = r.h * r.h;
      r.errors = {e, e, e, e};
      rows.push_back(r);
    }
    const RateTable t = rate_table(rows);
    for (int c = 0; c < 4; ++c) {
      CHECK(t.slopes[c] == doctest::Approx(2.0).epsilon(1e-10));
      CHECK(t.monotone[c]);
    }
  }
  SUBCASE("constant errors fit slope 0 and are flagged non-monotone") {
    std::vector<RateRow> rows;
    for (int i = 0; i < 3; ++i) {
      RateRow r;
      r.h = 0.4 / std::pow(2.0, i);
      r.errors = {0.5, 0.5, 0.5, 0.5};
      rows.push_back(r);
    }
    const RateTable t = rate_table(rows);
    CHECK(t.slopes[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(t.monotone[0]);
    CHECK(t.summary().find("non-monotone") != std::string::npos);
  }
  SUBCASE("h must decrease strictly") {
    std::vector<RateRow> rows(2);
    rows[0].h = 0.1;
    rows[1].h = 0.1;
    CHECK_THROWS_AS(rate_table(rows), std::invalid_argument);
  }
}

TEST_CASE("trace-inequality ratio scaling") {
  PolyMesh mesh = generate_mesh(kBox, 0.0, 20, 20, 30, 12);
  set_degrees(mesh, 2);
  DgSpace se(mesh, SpaceKind::VectorElastic);
  DgSpace sa(mesh, SpaceKind::ScalarAcoustic);
  const Material m = reference_material();

  const LemmaA1Report rep =
      verify_lemma_a1(se, sa, m, {1.0, 4.0, 16.0}, {1.0, 4.0, 16.0}, 20);
  for (std::size_t i = 1; i < rep.alphas.size(); ++i) {
    // the penalty scales linearly with alpha on every face, so the max ratio
    // halves exactly per 4x step
    CHECK(rep.elastic_all[i] == doctest::Approx(0.5 * rep.elastic_all[i - 1]).epsilon(1e-12));
    CHECK(rep.elastic_interior[i] ==
          doctest::Approx(0.5 * rep.elastic_interior[i - 1]).epsilon(1e-12));
    CHECK(rep.acoustic_all[i] == doctest::Approx(0.5 * rep.acoustic_all[i - 1]).epsilon(1e-12));
  }
  CHECK(rep.elastic_all[0] > 0.0);
  CHECK(rep.acoustic_all[0] > 0.0);

  SUBCASE("doubling p keeps the ratio bounded") {
    PolyMesh m1 = mesh;
    set_degrees(m1, 1);
    DgSpace se1(m1, SpaceKind::VectorElastic);
    DgSpace sa1(m1, SpaceKind::ScalarAcoustic);
    const LemmaA1Report r1 = verify_lemma_a1(se1, sa1, m, {1.0}, {1.0}, 20);

    PolyMesh m2 = mesh;
    set_degrees(m2, 2);
    DgSpace se2(m2, SpaceKind::VectorElastic);
    DgSpace sa2(m2, SpaceKind::ScalarAcoustic);
    const LemmaA1Report r2 = verify_lemma_a1(se2, sa2, m, {1.0}, {1.0}, 20);
    CHECK(r2.elastic_all[0] <= 1.1 * r1.elastic_all[0]);
    CHECK(r2.acoustic_all[0] <= 1.1 * r1.acoustic_all[0]);
  }
}

TEST_CASE("coercivity wedge at alpha = beta = 10") {
  PolyMesh mesh = generate_mesh(kBox, 0.0, 15, 15, 20, 9);
  set_degrees(mesh, 2);
  DgSpace se(mesh, SpaceKind::VectorElastic);
  DgSpace sa(mesh, SpaceKind::ScalarAcoustic);
  const double wedge =
      lemma_a2_wedge_min(se, sa, reference_material(), StabilizationParams{10.0, 10.0}, 30);
  CHECK(wedge >= 0.1);
  CHECK(wedge <= 1.0);
}

TEST_CASE("unforced energy stays bounded; forced energy obeys the source bound") {
  PolyMesh mesh = generate_mesh(kBox, 0.0, 10, 10, 20, 33);
  set_degrees(mesh, 2);
  const Material m = reference_material();
  const StabilizationParams params{10.0, 10.0};

  // smooth randomized initial data
  Rng rng(101);
  const double a1 = rng.sym(), a2 = rng.sym(), a3 = rng.sym();
  const double pi = std::acos(-1.0);
  auto u0 = [=](double x, double y) {
    const double s = std::sin(pi * (x + 1.0)) * std::sin(pi * y);
    return Vec2{a1 * s, a2 * s};
  };
  auto v0 = [=](double x, double y) {
    return Vec2{a3 * std::sin(2 * pi * (x + 1.0)) * std::sin(pi * y), 0.0};
  };
  auto p0 = [=](double x, double y) { return a2 * std::sin(pi * x) * std::sin(2 * pi * y); };
  auto q0 = [=](double x, double y) { return a1 * std::sin(2 * pi * x) * std::sin(pi * y); };

  DgSpace se(mesh, SpaceKind::VectorElastic);
  DgSpace sa(mesh, SpaceKind::ScalarAcoustic);
  const SystemMatrices sys = assemble_system(se, sa, m, params);
  const NormMatrices nm = assemble_norm_matrices(se, sa, m, params);
  const double dt = 0.5 * estimate_stable_dt(sys, 0.5);
  const LeapfrogOperator op(sys, dt);

  State st = initial_state_from(se, sa, u0, v0, p0, q0, dt);
  const Eigen::VectorXd fe = Eigen::VectorXd::Zero(se.n_dofs());
  const Eigen::VectorXd fa = Eigen::VectorXd::Zero(sa.n_dofs());
  double e1 = 0.0, emax = 0.0;
  for (int n = 1; n <= 2000; ++n) {
    const double e = energy_norm(st, sys, nm, dt);
    if (n == 1) e1 = e;
    emax = std::max(emax, e);
    step(op, sys, st, fe, fa);
  }
  CHECK(emax <= 1.01 * e1);
  const double unforced_growth = emax / e1;

  // forced run: E(t) <= C (E(dt) + int ||f||), with C fitted from the
  // unforced growth and a factor-2 slack
  const Scenario sc = test_case_1();
  RunSetup setup = prepare_run(sc, mesh, params, 1e-3, 0.2);
  std::vector<double> energies, times;
  run_loop(
      setup,
      [&](const StepInfo& info) {
        energies.push_back(energy_norm(info.state, setup.matrices, nm, setup.dt));
        times.push_back(info.t);
      },
      10);
  // trapezoidal integral of ||f_e|| + ||f_a|| over time via quadrature of the
  // closed-form forcing
  auto source_norm = [&](double t) {
    double fe2 = 0.0, fa2 = 0.0;
    for (int k = 0; k < se.n_elements(); ++k) {
      const QuadratureRule rule = se.volume_rule(k, 6);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        Vec2 f{};
        for (const auto& term : sc.forcing_e) {
          const Vec2 s = term.space(rule.points[q].x, rule.points[q].y);
          f.x += term.time(t) * s.x;
          f.y += term.time(t) * s.y;
        }
        fe2 += rule.weights[q] * dot(f, f);
      }
    }
    for (int k = 0; k < sa.n_elements(); ++k) {
      const QuadratureRule rule = sa.volume_rule(k, 6);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        double f = 0.0;
        for (const auto& term : sc.forcing_a)
          f += term.time(t) * term.space(rule.points[q].x, rule.points[q].y);
        fa2 += rule.weights[q] * f * f;
      }
    }
    return std::sqrt(fe2) + std::sqrt(fa2);
  };
  double integral = 0.0;
  double prev_t = 0.0, prev_f = source_norm(0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double f = source_norm(times[i]);
    integral += 0.5 * (times[i] - prev_t) * (f + prev_f);
    prev_t = times[i];
    prev_f = f;
    CHECK(energies[i] <= 2.0 * unforced_growth * (energies.front() + integral));
  }
}
