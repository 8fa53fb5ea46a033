#ifndef EAW_CLI_HPP
#define EAW_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eaw/analysis.hpp"
#include "eaw/config.hpp"

namespace eaw {

struct MeshGenArgs {
  std::string kind = "voronoi";  // voronoi | grid
  int n_elastic = 60;
  int n_acoustic = 60;
  int lloyd = 100;
  int grid_nx_e = 8, grid_ny_e = 8, grid_nx_a = 8, grid_ny_a = 8;
  Rect box{-1.0, 1.0, 0.0, 1.0};
  double interface_x = 0.0;
  int degree = 1;
  std::uint64_t seed = 42;
  std::string out_path = "mesh.txt";
};

void cmd_mesh_gen(const MeshGenArgs& args);
std::string cmd_mesh_info(const std::string& mesh_path);

struct RunConfig {
  std::string scenario_name = "test1";
  std::string mesh_file;  // when empty, generate
  MeshGenArgs mesh;
  int degree_elastic = 2;
  int degree_acoustic = 2;
  StabilizationParams stab;
  bool dt_auto = false;
  double dt = 1e-4;
  double safety = 0.5;
  double T = -1.0;  // <0: scenario default
  int energy_cadence = 10;
  int snapshot_cadence = 0;
  int probe_cadence = 10;
  std::vector<Vec2> probe_points;
  bool probe_fieldmax = false;
  double source_sigma = 0.025;
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  int threads = 0;  // 0: all cores
  bool dump_matrices = false;
  Config custom;  // custom-scenario term lists

  static RunConfig from_config(const Config& cfg);
};

/// Full experiment: writes energy.csv, probes.csv, VTK snapshots (and the
/// matrix dump when asked). On divergence, partial outputs stay on disk next
/// to a DIVERGED marker and the error propagates.
void cmd_run(const RunConfig& cfg);

struct ConvergenceConfig {
  std::string scenario_name = "test1";
  std::string study = "h";  // h | p
  std::vector<int> elements;
  std::vector<int> degrees;
  std::string dt_policy = "fixed";  // fixed | proportional
  double dt = 1e-4;
  double T = -1.0;
  StabilizationParams stab;
  int lloyd = 100;
  std::uint64_t seed = 42;
  int threads = 0;  // 0: all cores
  std::string out_dir = ".";
  std::string mesh_kind = "voronoi";

  static ConvergenceConfig from_config(const Config& cfg);
};

/// Refinement study: writes rates_h.csv / rates_p.csv and returns the
/// summary line that is also printed.
std::string cmd_converge(const ConvergenceConfig& cfg);

Scenario scenario_by_name(const std::string& name, double source_sigma, const Config& custom);

}  // namespace eaw

#endif
