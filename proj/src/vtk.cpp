#include "eaw/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include "eaw/errors.hpp"

namespace eaw {

void write_vtk_field(const std::string& path, const DgSpace& space,
                     const Eigen::VectorXd& coeffs, const std::string& field_name) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write VTK file: " + path);
  const PolyMesh& mesh = space.mesh();

  // Per-element point blocks (vertices + centroid as used by the fans).
  std::vector<Vec2> points;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> point_elem;
  for (int k = 0; k < space.n_elements(); ++k) {
    const PolyElement& el = mesh.elements[space.element_id(k)];
    std::map<int, int> local;  // mesh vertex id -> point index
    auto point_of = [&](int v) {
      auto it = local.find(v);
      if (it != local.end()) return it->second;
      const int id = static_cast<int>(points.size());
      points.push_back(mesh.vertices[v]);
      point_elem.push_back(k);
      local.emplace(v, id);
      return id;
    };
    for (const auto& t : el.subtriangles)
      tris.push_back({point_of(t[0]), point_of(t[1]), point_of(t[2])});
  }

  char buf[160];
  out << "# vtk DataFile Version 3.0\n" << field_name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g 0\n", p.x, p.y);
    out << buf;
  }
  out << "CELLS " << tris.size() << " " << 4 * tris.size() << "\n";
  for (const auto& t : tris) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << tris.size() << "\n";
  for (std::size_t i = 0; i < tris.size(); ++i) out << "5\n";

  out << "POINT_DATA " << points.size() << "\n";
  if (space.kind() == SpaceKind::VectorElastic) {
    std::vector<Vec2> vals(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      vals[i] = space.eval_vector(coeffs, point_elem[i], points[i]);
    out << "VECTORS " << field_name << " double\n";
    for (const auto& v : vals) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g 0\n", v.x, v.y);
      out << buf;
    }
    for (int c = 0; c < 2; ++c) {
      out << "SCALARS " << field_name << (c == 0 ? "_x" : "_y") << " double 1\nLOOKUP_TABLE default\n";
      for (const auto& v : vals) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", c == 0 ? v.x : v.y);
        out << buf;
      }
    }
  } else {
    out << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g\n",
                    space.eval_scalar(coeffs, point_elem[i], points[i]));
      out << buf;
    }
  }
  if (!out) throw io_error("failed while writing VTK file: " + path);
}

}  // namespace eaw
