#ifndef EAW_MESH_HPP
#define EAW_MESH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eaw/geometry.hpp"

namespace eaw {

enum class Region { Elastic, Acoustic };

enum class FaceKind {
  InteriorElastic,
  InteriorAcoustic,
  BoundaryElasticDirichlet,
  BoundaryAcousticDirichlet,
  Interface,
};

struct PolyElement {
  std::vector<int> vertex_ids;  // counter-clockwise
  Region region = Region::Elastic;
  int degree = 1;
  double diameter = 0.0;
  double area = 0.0;
  Vec2 centroid;
  // One simplex per face for convex cells (fan from the centroid, which is
  // stored as an auxiliary vertex); ear-clipping fallback otherwise.
  std::vector<std::array<int, 3>> subtriangles;
};

struct Face {
  int a = -1;  // endpoint vertex ids; normal points left -> right
  int b = -1;
  FaceKind kind = FaceKind::InteriorElastic;
  int left_element = -1;
  int right_element = -1;  // -1 on boundary faces
  Vec2 normal;             // unit, outward from left_element
  double length = 0.0;

  bool is_interior() const {
    return kind == FaceKind::InteriorElastic || kind == FaceKind::InteriorAcoustic;
  }
  bool is_boundary() const {
    return kind == FaceKind::BoundaryElasticDirichlet ||
           kind == FaceKind::BoundaryAcousticDirichlet;
  }
};

struct PolyMesh {
  std::vector<Vec2> vertices;
  // Vertices with id >= n_corner_vertices are auxiliary (element centroids
  // referenced by subtriangles); they are not serialized.
  int n_corner_vertices = 0;
  std::vector<PolyElement> elements;
  std::vector<Face> faces;
  Rect box;
  std::optional<double> interface_x;

  Polygon element_polygon(int e) const {
    Polygon p;
    p.reserve(elements[e].vertex_ids.size());
    for (int v : elements[e].vertex_ids) p.push_back(vertices[v]);
    return p;
  }
  std::array<Vec2, 3> triangle(const std::array<int, 3>& t) const {
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
  }
  double max_diameter() const;
  int count(FaceKind k) const;
  /// Element containing p (-1 if none).
  int locate(const Vec2& p) const;
};

struct QualityReport {
  int n_elements = 0;
  int n_faces = 0;
  int n_interior_elastic = 0;
  int n_interior_acoustic = 0;
  int n_boundary_elastic = 0;
  int n_boundary_acoustic = 0;
  int n_interface = 0;
  double total_area = 0.0;
  double elastic_area = 0.0;
  double acoustic_area = 0.0;
  double max_h = 0.0;
  double min_h = 0.0;
  // max over neighboring pairs of h+/h- and p+/p- (both >= 1)
  double max_neighbor_h_ratio = 1.0;
  double max_neighbor_p_ratio = 1.0;
  // min over elements and faces of d*|simplex| / (|F| * h), small values
  // signal shallow face simplices
  double min_simplex_height_ratio = 0.0;
  bool has_interior_pairs = false;
  std::string note;

  std::string to_string() const;
};

/// Clipped Voronoi cells of the given seeds inside a rectangle. Throws if a
/// cell degenerates (area below 1e-12 of the mean), reporting the cell id.
std::vector<Polygon> clipped_voronoi(const Rect& box, const std::vector<Vec2>& seeds);

/// Lloyd relaxation: seeds move to the centroid of their clipped cell.
std::vector<Vec2> lloyd_relax(const Rect& box, std::vector<Vec2> seeds, int iterations);

/// Voronoi+Lloyd mesh of the bi-domain; each subdomain is meshed separately
/// so no cell crosses the interface line. With n_elastic == n_acoustic, the
/// acoustic cells are the mirror image of the elastic ones, so traces on the
/// interface match vertex by vertex; otherwise hanging interface vertices are
/// resolved by face splitting.
PolyMesh generate_mesh(const Rect& box, double interface_x, int n_elastic, int n_acoustic,
                       int lloyd_iterations, std::uint64_t rng_seed, int degree = 1);

/// Structured rectangular mesh of the bi-domain (nx * ny cells per side).
/// Useful for exact-symmetry runs and hanging-node tests.
PolyMesh generate_grid_mesh(const Rect& box, double interface_x, int nx_e, int ny_e, int nx_a,
                            int ny_a, int degree = 1);

/// Assemble a PolyMesh from per-subdomain cell polygons: weld vertices, split
/// edges at hanging vertices, classify faces, subtriangulate, validate.
PolyMesh build_mesh_from_cells(const std::vector<Polygon>& elastic_cells,
                               const std::vector<Polygon>& acoustic_cells, const Rect& box,
                               std::optional<double> interface_x, int degree = 1);

/// (Re)derive faces and their kinds from element polygons. Throws on
/// topology errors (e.g. region change away from the interface line).
void classify_faces(PolyMesh& mesh);

/// Fan triangulation from the centroid; ear-clipping fallback for non-convex
/// elements. Throws with the element id if both fail.
void subtriangulate(PolyMesh& mesh, int element_id);

QualityReport quality_report(const PolyMesh& mesh);

PolyMesh read_mesh(const std::string& path);
void write_mesh(const PolyMesh& mesh, const std::string& path);

/// Uniform degree assignment, or per-region.
void set_degrees(PolyMesh& mesh, int degree);
void set_degrees(PolyMesh& mesh, int degree_elastic, int degree_acoustic);

}  // namespace eaw

#endif
