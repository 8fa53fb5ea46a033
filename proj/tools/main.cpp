#include <CLI11.hpp>
#include <iostream>

#include "eaw/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"High-order dG solver for coupled elasto-acoustic waves on polygonal meshes"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mesh_path;
  long seed = -1;
  int threads = -1;
  bool dump = false;

  // mesh gen
  auto* mesh_cmd = app.add_subcommand("mesh", "Mesh utilities");
  mesh_cmd->require_subcommand(1);
  eaw::MeshGenArgs gen_args;
  auto* gen = mesh_cmd->add_subcommand("gen", "Generate a polygonal mesh file");
  gen->add_option("--kind", gen_args.kind, "voronoi or grid");
  gen->add_option("--n-elastic", gen_args.n_elastic, "Voronoi cells in the elastic subdomain");
  gen->add_option("--n-acoustic", gen_args.n_acoustic, "Voronoi cells in the acoustic subdomain");
  gen->add_option("--lloyd", gen_args.lloyd, "Lloyd relaxation iterations");
  gen->add_option("--grid-nx-e", gen_args.grid_nx_e, "Grid cells along x, elastic side");
  gen->add_option("--grid-ny-e", gen_args.grid_ny_e, "Grid cells along y, elastic side");
  gen->add_option("--grid-nx-a", gen_args.grid_nx_a, "Grid cells along x, acoustic side");
  gen->add_option("--grid-ny-a", gen_args.grid_ny_a, "Grid cells along y, acoustic side");
  gen->add_option("--degree", gen_args.degree, "Polynomial degree tag");
  gen->add_option("--seed", gen_args.seed, "RNG seed");
  gen->add_option("-o,--out", gen_args.out_path, "Output mesh file");

  std::string info_path;
  auto* info = mesh_cmd->add_subcommand("info", "Print the mesh quality report");
  info->add_option("file", info_path, "Mesh file")->required();

  // run
  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides config)");
  run->add_option("--seed", seed, "RNG seed (overrides config)");
  run->add_option("--threads", threads, "Assembly threads (overrides config)");
  run->add_flag("--dump-matrices", dump, "Write coordinate-format matrix dumps");

  // converge
  auto* conv = app.add_subcommand("converge", "Run a refinement study from a config file");
  conv->add_option("--config", config_path, "Config file")->required();
  conv->add_option("--out", out_dir, "Output directory (overrides config)");
  conv->add_option("--seed", seed, "RNG seed (overrides config)");
  conv->add_option("--threads", threads, "Assembly threads (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      eaw::cmd_mesh_gen(gen_args);
    } else if (info->parsed()) {
      std::cout << eaw::cmd_mesh_info(info_path);
    } else if (run->parsed()) {
      eaw::Config cfg = eaw::Config::parse_file(config_path);
      if (!out_dir.empty()) cfg.set("run.out", out_dir);
      if (seed >= 0) cfg.set("run.seed", std::to_string(seed));
      if (threads > 0) cfg.set("run.threads", std::to_string(threads));
      if (dump) cfg.set("run.dump_matrices", "true");
      eaw::cmd_run(eaw::RunConfig::from_config(cfg));
    } else if (conv->parsed()) {
      eaw::Config cfg = eaw::Config::parse_file(config_path);
      if (!out_dir.empty()) cfg.set("converge.out", out_dir);
      if (seed >= 0) cfg.set("converge.seed", std::to_string(seed));
      if (threads > 0) cfg.set("converge.threads", std::to_string(threads));
      eaw::cmd_converge(eaw::ConvergenceConfig::from_config(cfg));
    }
  } catch (const eaw::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const eaw::divergence_error& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const eaw::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
