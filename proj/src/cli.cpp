#include "eaw/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "eaw/vtk.hpp"

namespace eaw {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Factor1D parse_factor(std::istringstream& ss, const std::string& what) {
  double coef = 0.0, freq = 0.0, phase = 0.0;
  int power = 0;
  std::string trig;
  if (!(ss >> coef)) throw config_error(what + ": expected coefficient");
  if (!(ss >> power >> trig >> freq >> phase))
    throw config_error(what + ": expected 'pow trig freq phase'");
  Factor1D f;
  f.coef = coef;
  f.power = power;
  f.freq = freq;
  f.phase = phase;
  if (trig == "one") f.kind = Factor1D::One;
  else if (trig == "sin") f.kind = Factor1D::Sin;
  else if (trig == "cos") f.kind = Factor1D::Cos;
  else throw config_error(what + ": trig must be one|sin|cos, got '" + trig + "'");
  return f;
}

Scenario make_custom_scenario(const Config& cfg) {
  Material m;
  m.mu = cfg.get_double("custom.mu", 1.0);
  m.lambda = cfg.get_double("custom.lambda", 0.0);
  m.rho_e = cfg.get_double("custom.rho_e", 1.0);
  m.rho_a = cfg.get_double("custom.rho_a", 1.0);
  m.c = cfg.get_double("custom.c", 1.0);
  m.zeta = cfg.get_double("custom.zeta", 0.0);

  std::vector<VectorTermSpec> u_terms;
  for (const std::string& line : cfg.all("custom.u_term")) {
    std::istringstream ss(line);
    std::string comp;
    if (!(ss >> comp) || (comp != "x" && comp != "y"))
      throw config_error("custom.u_term: expected component 'x' or 'y'");
    Factor1D fc = parse_factor(ss, "custom.u_term");
    // the single leading coefficient lives on the x-factor
    Factor1D fx = fc;
    Factor1D fy = parse_factor(ss, "custom.u_term");
    fy.coef = 1.0;
    Factor1D ft = parse_factor(ss, "custom.u_term");
    ft.coef = 1.0;
    const PolyTrigField field({Term2D{fx, fy}});
    const PolyTrigTime tau({ft});
    if (comp == "x") u_terms.push_back({field, PolyTrigField{}, tau});
    else u_terms.push_back({PolyTrigField{}, field, tau});
  }
  std::vector<ScalarTermSpec> phi_terms;
  for (const std::string& line : cfg.all("custom.phi_term")) {
    std::istringstream ss(line);
    Factor1D fx = parse_factor(ss, "custom.phi_term");
    Factor1D fy = parse_factor(ss, "custom.phi_term");
    fy.coef = 1.0;
    Factor1D ft = parse_factor(ss, "custom.phi_term");
    ft.coef = 1.0;
    phi_terms.push_back({PolyTrigField({Term2D{fx, fy}}), PolyTrigTime({ft})});
  }
  if (u_terms.empty() && phi_terms.empty())
    throw config_error("custom scenario: need at least one custom.u_term or custom.phi_term");
  return make_manufactured("custom", m, std::move(u_terms), std::move(phi_terms),
                           cfg.get_double("custom.T", 1.0), cfg.get_double("custom.dt", 1e-4));
}

PolyMesh build_mesh(const RunConfig& cfg, const Scenario& sc) {
  PolyMesh mesh;
  if (!cfg.mesh_file.empty()) {
    if (!fs::exists(cfg.mesh_file))
      throw config_error("mesh file does not exist: " + cfg.mesh_file);
    mesh = read_mesh(cfg.mesh_file);
  } else if (cfg.mesh.kind == "grid") {
    mesh = generate_grid_mesh(sc.domain, sc.interface_x, cfg.mesh.grid_nx_e, cfg.mesh.grid_ny_e,
                              cfg.mesh.grid_nx_a, cfg.mesh.grid_ny_a);
  } else if (cfg.mesh.kind == "voronoi") {
    mesh = generate_mesh(sc.domain, sc.interface_x, cfg.mesh.n_elastic, cfg.mesh.n_acoustic,
                         cfg.mesh.lloyd, cfg.seed);
  } else {
    throw config_error("mesh kind must be voronoi or grid, got '" + cfg.mesh.kind + "'");
  }
  set_degrees(mesh, cfg.degree_elastic, cfg.degree_acoustic);
  return mesh;
}

}  // namespace

Scenario scenario_by_name(const std::string& name, double source_sigma, const Config& custom) {
  if (name == "test1") return test_case_1();
  if (name == "test2") return test_case_2();
  if (name == "test3") return test_case_3(source_sigma);
  if (name == "zero") {
    Material m;
    m.mu = 26.29;
    m.lambda = 51.20;
    m.rho_e = 2.7;
    return make_zero_scenario(m);
  }
  if (name == "custom") return make_custom_scenario(custom);
  throw config_error("unknown scenario '" + name + "' (test1|test2|test3|zero|custom)");
}

void cmd_mesh_gen(const MeshGenArgs& args) {
  PolyMesh mesh;
  if (args.kind == "grid")
    mesh = generate_grid_mesh(args.box, args.interface_x, args.grid_nx_e, args.grid_ny_e,
                              args.grid_nx_a, args.grid_ny_a, args.degree);
  else if (args.kind == "voronoi")
    mesh = generate_mesh(args.box, args.interface_x, args.n_elastic, args.n_acoustic, args.lloyd,
                         args.seed, args.degree);
  else
    throw config_error("mesh kind must be voronoi or grid, got '" + args.kind + "'");
  write_mesh(mesh, args.out_path);
}

std::string cmd_mesh_info(const std::string& mesh_path) {
  const PolyMesh mesh = read_mesh(mesh_path);
  return quality_report(mesh).to_string();
}

RunConfig RunConfig::from_config(const Config& cfg) {
  RunConfig rc;
  rc.scenario_name = cfg.get_string("run.scenario", "test1");
  rc.mesh_file = cfg.get_string("run.mesh_file", "");
  rc.mesh.kind = cfg.get_string("mesh.kind", "voronoi");
  rc.mesh.n_elastic = static_cast<int>(cfg.get_long("mesh.n_elastic", 60));
  rc.mesh.n_acoustic = static_cast<int>(cfg.get_long("mesh.n_acoustic", 60));
  rc.mesh.lloyd = static_cast<int>(cfg.get_long("mesh.lloyd", 100));
  rc.mesh.grid_nx_e = static_cast<int>(cfg.get_long("mesh.grid_nx_e", 8));
  rc.mesh.grid_ny_e = static_cast<int>(cfg.get_long("mesh.grid_ny_e", 8));
  rc.mesh.grid_nx_a = static_cast<int>(cfg.get_long("mesh.grid_nx_a", 8));
  rc.mesh.grid_ny_a = static_cast<int>(cfg.get_long("mesh.grid_ny_a", 8));
  const int degree = static_cast<int>(cfg.get_long("run.degree", 2));
  rc.degree_elastic = static_cast<int>(cfg.get_long("run.degree_elastic", degree));
  rc.degree_acoustic = static_cast<int>(cfg.get_long("run.degree_acoustic", degree));
  rc.stab.alpha = cfg.get_double("run.alpha", 10.0);
  rc.stab.beta = cfg.get_double("run.beta", 10.0);
  const std::string dt = cfg.get_string("run.dt", "auto");
  if (dt == "auto") {
    rc.dt_auto = true;
  } else {
    rc.dt_auto = false;
    rc.dt = std::stod(dt);
    if (!(rc.dt > 0.0)) throw config_error("run.dt must be positive or 'auto'");
  }
  rc.safety = cfg.get_double("run.safety", 0.5);
  rc.T = cfg.get_double("run.T", -1.0);
  rc.energy_cadence = static_cast<int>(cfg.get_long("run.energy_cadence", 10));
  rc.snapshot_cadence = static_cast<int>(cfg.get_long("run.snapshot_cadence", 0));
  rc.probe_cadence = static_cast<int>(cfg.get_long("run.probe_cadence", 10));
  for (const std::string& pt : cfg.all("run.probe_point")) {
    std::istringstream ss(pt);
    double x = 0.0, y = 0.0;
    if (!(ss >> x >> y)) throw config_error("run.probe_point: expected 'x y'");
    rc.probe_points.push_back({x, y});
  }
  rc.probe_fieldmax = cfg.get_bool("run.probe_fieldmax", false);
  rc.source_sigma = cfg.get_double("run.source_sigma", 0.025);
  rc.out_dir = cfg.get_string("run.out", ".");
  rc.seed = static_cast<std::uint64_t>(cfg.get_long("run.seed", 42));
  rc.threads = static_cast<int>(cfg.get_long("run.threads", 0));  // 0: all cores
  rc.dump_matrices = cfg.get_bool("run.dump_matrices", false);
  rc.custom = cfg;
  return rc;
}

void cmd_run(const RunConfig& cfg) {
  const Scenario sc = scenario_by_name(cfg.scenario_name, cfg.source_sigma, cfg.custom);
  const PolyMesh mesh = build_mesh(cfg, sc);
  const double T = cfg.T > 0.0 ? cfg.T : sc.T;

  AssemblyOptions opts;
  opts.threads = cfg.threads;

  DgSpace space_e(mesh, SpaceKind::VectorElastic);
  DgSpace space_a(mesh, SpaceKind::ScalarAcoustic);
  SystemMatrices matrices = assemble_system(space_e, space_a, sc.material, cfg.stab, opts);
  const NormMatrices norms = assemble_norm_matrices(space_e, space_a, sc.material, cfg.stab, opts);

  double dt = cfg.dt;
  if (cfg.dt_auto) {
    dt = estimate_stable_dt(matrices, cfg.safety);
    // round down so that dt divides T
    const long n = std::max(1L, static_cast<long>(std::ceil(T / dt)));
    dt = T / static_cast<double>(n);
  }

  fs::create_directories(cfg.out_dir);
  if (cfg.dump_matrices) {
    dump_matrix(matrices.M_e1, cfg.out_dir + "/m_e1.txt");
    dump_matrix(matrices.M_e2, cfg.out_dir + "/m_e2.txt");
    dump_matrix(matrices.M_e3, cfg.out_dir + "/m_e3.txt");
    dump_matrix(matrices.A_e, cfg.out_dir + "/a_e.txt");
    dump_matrix(matrices.C_e, cfg.out_dir + "/c_e.txt");
    dump_matrix(matrices.M_a, cfg.out_dir + "/m_a.txt");
    dump_matrix(matrices.A_a, cfg.out_dir + "/a_a.txt");
  }

  std::ofstream energy_csv(cfg.out_dir + "/energy.csv");
  if (!energy_csv) throw io_error("cannot write " + cfg.out_dir + "/energy.csv");
  energy_csv << "t,E_elastic,E_acoustic,E_total\n";

  std::ofstream probes_csv(cfg.out_dir + "/probes.csv");
  if (!probes_csv) throw io_error("cannot write " + cfg.out_dir + "/probes.csv");
  {
    probes_csv << "t";
    for (std::size_t i = 0; i < cfg.probe_points.size(); ++i) {
      const int e = mesh.locate(cfg.probe_points[i]);
      if (e < 0) throw config_error("probe point " + std::to_string(i) + " lies outside the mesh");
      if (mesh.elements[e].region == Region::Elastic)
        probes_csv << ",u_x@p" << i << ",u_y@p" << i;
      else
        probes_csv << ",phi@p" << i;
    }
    if (cfg.probe_fieldmax) probes_csv << ",max_abs_u,max_abs_phi";
    probes_csv << "\n";
  }

  std::vector<int> probe_elems;
  for (std::size_t i = 0; i < cfg.probe_points.size(); ++i)
    probe_elems.push_back(mesh.locate(cfg.probe_points[i]));

  RunSetup setup;
  setup.space_e = std::move(space_e);
  setup.space_a = std::move(space_a);
  setup.matrices = std::move(matrices);
  setup.loads = assemble_load_parts(setup.space_e, setup.space_a, sc, cfg.stab, opts);
  setup.op = std::make_unique<LeapfrogOperator>(setup.matrices, dt);
  setup.state = initial_state(sc, setup.space_e, setup.space_a, dt, setup.matrices, setup.loads);
  setup.dt = dt;
  setup.n_steps = std::lround(T / dt);
  if (setup.n_steps < 1 || std::abs(setup.n_steps * dt - T) > 1e-9 * std::max(T, 1.0))
    throw config_error("run.dt must divide T");

  auto fieldmax = [&](const State& state, double& max_u, double& max_phi) {
    max_u = 0.0;
    max_phi = 0.0;
    for (int k = 0; k < setup.space_e.n_elements(); ++k) {
      const PolyElement& el = mesh.elements[setup.space_e.element_id(k)];
      for (const auto& t : el.subtriangles)
        for (int vi : t) {
          const Vec2 v = setup.space_e.eval_vector(state.u_curr, k, mesh.vertices[vi]);
          max_u = std::max({max_u, std::abs(v.x), std::abs(v.y)});
        }
    }
    for (int k = 0; k < setup.space_a.n_elements(); ++k) {
      const PolyElement& el = mesh.elements[setup.space_a.element_id(k)];
      for (const auto& t : el.subtriangles)
        for (int vi : t)
          max_phi = std::max(
              max_phi, std::abs(setup.space_a.eval_scalar(state.phi_curr, k, mesh.vertices[vi])));
    }
  };

  auto probe = [&](const StepInfo& info) {
    const bool last = info.n == setup.n_steps || info.n == 1;
    if (cfg.energy_cadence > 0 && (info.n % cfg.energy_cadence == 0 || last)) {
      const EnergySplit e = energy_split(info.state, setup.matrices, norms, dt);
      energy_csv << fmt(info.t) << ',' << fmt(e.elastic) << ',' << fmt(e.acoustic) << ','
                 << fmt(e.total) << "\n";
    }
    if (cfg.probe_cadence > 0 && (info.n % cfg.probe_cadence == 0 || last) &&
        (!cfg.probe_points.empty() || cfg.probe_fieldmax)) {
      probes_csv << fmt(info.t);
      for (std::size_t i = 0; i < probe_elems.size(); ++i) {
        const int e = probe_elems[i];
        if (mesh.elements[e].region == Region::Elastic) {
          const Vec2 v = setup.space_e.eval_vector(info.state.u_curr,
                                                   setup.space_e.local_index(e),
                                                   cfg.probe_points[i]);
          probes_csv << ',' << fmt(v.x) << ',' << fmt(v.y);
        } else {
          probes_csv << ',' << fmt(setup.space_a.eval_scalar(info.state.phi_curr,
                                                             setup.space_a.local_index(e),
                                                             cfg.probe_points[i]));
        }
      }
      if (cfg.probe_fieldmax) {
        double mu_val = 0.0, mp_val = 0.0;
        fieldmax(info.state, mu_val, mp_val);
        probes_csv << ',' << fmt(mu_val) << ',' << fmt(mp_val);
      }
      probes_csv << "\n";
    }
    if (cfg.snapshot_cadence > 0 && (info.n % cfg.snapshot_cadence == 0 || info.n == setup.n_steps)) {
      char name[64];
      std::snprintf(name, sizeof(name), "/u_%08ld.vtk", info.n);
      write_vtk_field(cfg.out_dir + name, setup.space_e, info.state.u_curr, "u");
      std::snprintf(name, sizeof(name), "/phi_%08ld.vtk", info.n);
      write_vtk_field(cfg.out_dir + name, setup.space_a, info.state.phi_curr, "phi");
    }
  };
  const int cadence = 1;  // the lambda filters by the individual cadences

  try {
    run_loop(setup, probe, cadence);
  } catch (const divergence_error& e) {
    energy_csv.flush();
    probes_csv.flush();
    std::ofstream marker(cfg.out_dir + "/DIVERGED");
    marker << "step " << e.step << "\n";
    throw;
  }
}

ConvergenceConfig ConvergenceConfig::from_config(const Config& cfg) {
  ConvergenceConfig cc;
  cc.scenario_name = cfg.get_string("converge.scenario", "test1");
  cc.study = cfg.get_string("converge.study", "h");
  for (double v : cfg.has("converge.elements") ? cfg.get_doubles("converge.elements")
                                               : std::vector<double>{})
    cc.elements.push_back(static_cast<int>(v));
  for (double v :
       cfg.has("converge.degrees") ? cfg.get_doubles("converge.degrees") : std::vector<double>{})
    cc.degrees.push_back(static_cast<int>(v));
  cc.dt_policy = cfg.get_string("converge.dt_policy", "fixed");
  cc.dt = cfg.get_double("converge.dt", 1e-4);
  cc.T = cfg.get_double("converge.T", -1.0);
  cc.stab.alpha = cfg.get_double("converge.alpha", 10.0);
  cc.stab.beta = cfg.get_double("converge.beta", 10.0);
  cc.lloyd = static_cast<int>(cfg.get_long("converge.lloyd", 100));
  cc.seed = static_cast<std::uint64_t>(cfg.get_long("converge.seed", 42));
  cc.threads = static_cast<int>(cfg.get_long("converge.threads", 0));  // 0: all cores
  cc.out_dir = cfg.get_string("converge.out", ".");
  cc.mesh_kind = cfg.get_string("converge.mesh_kind", "voronoi");
  return cc;
}

std::string cmd_converge(const ConvergenceConfig& cfg) {
  const Config empty;
  const Scenario sc = scenario_by_name(cfg.scenario_name, 0.025, empty);
  if (!sc.has_exact) throw config_error("convergence studies need a scenario with an exact solution");
  const double T = cfg.T > 0.0 ? cfg.T : sc.T;
  AssemblyOptions opts;
  opts.threads = cfg.threads;
  fs::create_directories(cfg.out_dir);

  auto make_voronoi = [&](int total, std::uint64_t seed) {
    const int half = std::max(1, total / 2);
    return generate_mesh(sc.domain, sc.interface_x, half, half, cfg.lloyd, seed);
  };

  std::ostringstream summary;
  if (cfg.study == "h") {
    if (cfg.elements.size() < 2)
      throw config_error("h-study: need at least 2 refinement levels (3 recommended)");
    const int degree = cfg.degrees.empty() ? 2 : cfg.degrees.front();
    std::vector<RateRow> rows;
    double h0 = 0.0, dt0 = cfg.dt;
    for (std::size_t lvl = 0; lvl < cfg.elements.size(); ++lvl) {
      PolyMesh mesh = make_voronoi(cfg.elements[lvl], cfg.seed + lvl);
      set_degrees(mesh, degree);
      const double h = mesh.max_diameter();
      double dt = cfg.dt;
      if (cfg.dt_policy == "proportional") {
        if (lvl == 0) h0 = h;
        dt = dt0 * h / h0;
        dt = T / std::max(1.0, std::round(T / dt));
      }
      RunSetup setup = prepare_run(sc, mesh, cfg.stab, dt, T, opts);
      const State fin = run_loop(setup);
      const NormReport err =
          errors_vs_exact(setup.space_e, setup.space_a, fin.u_curr, fin.phi_curr, sc, fin.t,
                          cfg.stab);
      RateRow row;
      row.h = h;
      row.dofs = setup.space_e.n_dofs() + setup.space_a.n_dofs();
      row.errors = {err.dg_e, err.dg_a, err.l2_e, err.l2_a};
      rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const RateRow& a, const RateRow& b) { return a.h > b.h; });
    const RateTable table = rate_table(rows);
    std::ofstream csv(cfg.out_dir + "/rates_h.csv");
    if (!csv) throw io_error("cannot write rates_h.csv");
    csv << "h,dofs,err_dG_u,err_dG_phi,err_L2_u,err_L2_phi\n";
    for (const auto& r : table.rows)
      csv << fmt(r.h) << ',' << r.dofs << ',' << fmt(r.errors[0]) << ',' << fmt(r.errors[1]) << ','
          << fmt(r.errors[2]) << ',' << fmt(r.errors[3]) << "\n";
    summary << table.summary();
  } else if (cfg.study == "p") {
    if (cfg.degrees.size() < 2) throw config_error("p-study: need at least 2 degrees");
    const int total = cfg.elements.empty() ? 300 : cfg.elements.front();
    PolyMesh mesh = make_voronoi(total, cfg.seed);
    std::ofstream csv(cfg.out_dir + "/rates_p.csv");
    if (!csv) throw io_error("cannot write rates_p.csv");
    csv << "p,dofs,err_dG_u,err_dG_phi,err_L2_u,err_L2_phi\n";
    summary << "p-study error ratios:";
    std::array<double, 4> prev{};
    for (std::size_t i = 0; i < cfg.degrees.size(); ++i) {
      set_degrees(mesh, cfg.degrees[i]);
      RunSetup setup = prepare_run(sc, mesh, cfg.stab, cfg.dt, T, opts);
      const State fin = run_loop(setup);
      const NormReport err =
          errors_vs_exact(setup.space_e, setup.space_a, fin.u_curr, fin.phi_curr, sc, fin.t,
                          cfg.stab);
      const std::array<double, 4> errs = {err.dg_e, err.dg_a, err.l2_e, err.l2_a};
      csv << cfg.degrees[i] << ',' << setup.space_e.n_dofs() + setup.space_a.n_dofs();
      for (double e : errs) csv << ',' << fmt(e);
      csv << "\n";
      if (i > 0) {
        summary << "  p" << cfg.degrees[i - 1] << "->p" << cfg.degrees[i] << ":";
        for (int c = 0; c < 4; ++c) summary << ' ' << fmt(prev[c] / errs[c]);
      }
      prev = errs;
    }
  } else {
    throw config_error("converge.study must be h or p");
  }
  std::cout << summary.str() << "\n";
  return summary.str();
}

}  // namespace eaw
