#include "eaw/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace eaw {

namespace {

constexpr double kWeldTol = 1e-9;
constexpr double kOnLineTol = 1e-12;

std::uint64_t pack_edge(int a, int b) {
  const std::uint32_t lo = static_cast<std::uint32_t>(std::min(a, b));
  const std::uint32_t hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

// Bucketed vertex index for welding and point-on-segment queries.
class VertexGrid {
 public:
  explicit VertexGrid(double cell) : cell_(cell) {}

  void insert(int id, const Vec2& p) {
    grid_[key(p)].push_back(id);
  }

  template <typename F>
  void for_each_near(const Vec2& lo, const Vec2& hi, F&& f) const {
    const long long i0 = idx(lo.x), i1 = idx(hi.x);
    const long long j0 = idx(lo.y), j1 = idx(hi.y);
    for (long long i = i0 - 1; i <= i1 + 1; ++i)
      for (long long j = j0 - 1; j <= j1 + 1; ++j) {
        auto it = grid_.find((static_cast<std::uint64_t>(i) << 32) ^
                             static_cast<std::uint64_t>(static_cast<std::uint32_t>(j)));
        if (it == grid_.end()) continue;
        for (int id : it->second) f(id);
      }
  }

 private:
  long long idx(double v) const { return static_cast<long long>(std::floor(v / cell_)); }
  std::uint64_t key(const Vec2& p) const {
    return (static_cast<std::uint64_t>(idx(p.x)) << 32) ^
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(idx(p.y)));
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> grid_;
};

class VertexWelder {
 public:
  int id_of(const Vec2& p, std::vector<Vec2>& vertices) {
    const long long ix = std::llround(p.x / kWeldTol);
    const long long iy = std::llround(p.y / kWeldTol);
    for (long long i = ix - 1; i <= ix + 1; ++i)
      for (long long j = iy - 1; j <= iy + 1; ++j) {
        auto it = buckets_.find(key(i, j));
        if (it == buckets_.end()) continue;
        for (int id : it->second)
          if (dist(vertices[id], p) <= kWeldTol) return id;
      }
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(p);
    buckets_[key(ix, iy)].push_back(id);
    return id;
  }

 private:
  static std::uint64_t key(long long i, long long j) {
    return (static_cast<std::uint64_t>(i) << 32) ^
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
  }
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

void compute_element_metrics(PolyMesh& mesh) {
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    PolyElement& el = mesh.elements[e];
    const Polygon poly = mesh.element_polygon(static_cast<int>(e));
    if (poly.size() < 3)
      throw std::runtime_error("element " + std::to_string(e) + " has fewer than 3 vertices");
    el.area = polygon_area(poly);
    if (el.area <= 0.0)
      throw std::runtime_error("element " + std::to_string(e) +
                               " is not counter-clockwise or has non-positive area");
    el.centroid = polygon_centroid(poly);
    el.diameter = polygon_diameter(poly);
  }
  double mean = 0.0;
  for (const auto& el : mesh.elements) mean += el.area;
  mean /= static_cast<double>(mesh.elements.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e)
    if (mesh.elements[e].area < 1e-12 * mean)
      throw std::runtime_error("degenerate cell " + std::to_string(e) + ": area " +
                               std::to_string(mesh.elements[e].area) +
                               " below 1e-12 of the mean cell area");
}

// Insert every vertex lying in the interior of an element edge into that
// element's vertex loop. Makes hanging nodes explicit so that elementary
// edges match one-to-one across neighboring elements.
void split_edges_at_hanging_vertices(PolyMesh& mesh) {
  // grid cell from the average edge length: sliver edges must not shrink the
  // buckets, or long edges would sweep quadratically many of them
  double edge_sum = 0.0;
  std::size_t edge_count = 0;
  for (const auto& el : mesh.elements) {
    const std::size_t n = el.vertex_ids.size();
    for (std::size_t i = 0; i < n; ++i) {
      edge_sum +=
          dist(mesh.vertices[el.vertex_ids[i]], mesh.vertices[el.vertex_ids[(i + 1) % n]]);
      ++edge_count;
    }
  }
  const double cell = std::max(edge_sum / std::max<std::size_t>(edge_count, 1) * 0.5,
                               64.0 * kWeldTol);
  VertexGrid grid(cell);
  for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v)
    grid.insert(v, mesh.vertices[v]);

  for (auto& el : mesh.elements) {
    std::vector<int> out;
    const std::size_t n = el.vertex_ids.size();
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int va = el.vertex_ids[i];
      const int vb = el.vertex_ids[(i + 1) % n];
      const Vec2 a = mesh.vertices[va];
      const Vec2 b = mesh.vertices[vb];
      out.push_back(va);
      const double len = dist(a, b);
      if (len <= kWeldTol) continue;
      const Vec2 lo{std::min(a.x, b.x), std::min(a.y, b.y)};
      const Vec2 hi{std::max(a.x, b.x), std::max(a.y, b.y)};
      std::vector<std::pair<double, int>> on_edge;
      grid.for_each_near(lo, hi, [&](int id) {
        if (id == va || id == vb) return;
        double t = 0.0;
        if (point_segment_distance(mesh.vertices[id], a, b, &t) > kWeldTol) return;
        const double margin = kWeldTol / len;
        if (t <= margin || t >= 1.0 - margin) return;
        on_edge.emplace_back(t, id);
      });
      std::sort(on_edge.begin(), on_edge.end());
      for (const auto& [t, id] : on_edge)
        if (out.back() != id) out.push_back(id);
    }
    el.vertex_ids = std::move(out);
  }
}

}  // namespace

double PolyMesh::max_diameter() const {
  double h = 0.0;
  for (const auto& el : elements) h = std::max(h, el.diameter);
  return h;
}

int PolyMesh::count(FaceKind k) const {
  int n = 0;
  for (const auto& f : faces)
    if (f.kind == k) ++n;
  return n;
}

int PolyMesh::locate(const Vec2& p) const {
  for (std::size_t e = 0; e < elements.size(); ++e) {
    bool maybe = true;
    Polygon poly = element_polygon(static_cast<int>(e));
    double xmin = poly[0].x, xmax = poly[0].x, ymin = poly[0].y, ymax = poly[0].y;
    for (const auto& v : poly) {
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, v.y);
      ymax = std::max(ymax, v.y);
    }
    if (p.x < xmin - 1e-12 || p.x > xmax + 1e-12 || p.y < ymin - 1e-12 || p.y > ymax + 1e-12)
      maybe = false;
    if (maybe && point_in_polygon(p, poly)) return static_cast<int>(e);
  }
  return -1;
}

void classify_faces(PolyMesh& mesh) {
  split_edges_at_hanging_vertices(mesh);

  struct Incidence {
    int element;
    int a, b;  // directed edge as traversed by the element (CCW)
  };
  std::unordered_map<std::uint64_t, std::vector<Incidence>> edge_map;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const auto& ids = mesh.elements[e].vertex_ids;
    const std::size_t n = ids.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int a = ids[i];
      const int b = ids[(i + 1) % n];
      edge_map[pack_edge(a, b)].push_back({e, a, b});
    }
  }

  const double ifx = mesh.interface_x.value_or(std::numeric_limits<double>::quiet_NaN());

  mesh.faces.clear();
  mesh.faces.reserve(edge_map.size());
  // Deterministic face order: sorted by (min id, max id).
  std::vector<std::uint64_t> keys;
  keys.reserve(edge_map.size());
  for (const auto& kv : edge_map) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());

  for (std::uint64_t key : keys) {
    const auto& inc = edge_map[key];
    Face f;
    if (inc.size() == 1) {
      const auto& i0 = inc[0];
      f.a = i0.a;
      f.b = i0.b;
      f.left_element = i0.element;
      f.right_element = -1;
      const Vec2 pa = mesh.vertices[f.a], pb = mesh.vertices[f.b];
      const bool on_box =
          (std::abs(pa.x - mesh.box.xmin) <= kOnLineTol && std::abs(pb.x - mesh.box.xmin) <= kOnLineTol) ||
          (std::abs(pa.x - mesh.box.xmax) <= kOnLineTol && std::abs(pb.x - mesh.box.xmax) <= kOnLineTol) ||
          (std::abs(pa.y - mesh.box.ymin) <= kOnLineTol && std::abs(pb.y - mesh.box.ymin) <= kOnLineTol) ||
          (std::abs(pa.y - mesh.box.ymax) <= kOnLineTol && std::abs(pb.y - mesh.box.ymax) <= kOnLineTol);
      if (!on_box)
        throw std::runtime_error("topology error: single-sided face (" + std::to_string(f.a) +
                                 "," + std::to_string(f.b) + ") not on the domain boundary");
      f.kind = mesh.elements[i0.element].region == Region::Elastic
                   ? FaceKind::BoundaryElasticDirichlet
                   : FaceKind::BoundaryAcousticDirichlet;
    } else if (inc.size() == 2) {
      const auto& i0 = inc[0];
      const auto& i1 = inc[1];
      if (i0.a == i1.a)
        throw std::runtime_error("topology error: elements " + std::to_string(i0.element) +
                                 " and " + std::to_string(i1.element) +
                                 " traverse a shared edge in the same direction");
      const Region r0 = mesh.elements[i0.element].region;
      const Region r1 = mesh.elements[i1.element].region;
      if (r0 == r1) {
        // canonical orientation: lower element id on the left
        const Incidence& left = i0.element < i1.element ? i0 : i1;
        const Incidence& right = i0.element < i1.element ? i1 : i0;
        f.a = left.a;
        f.b = left.b;
        f.left_element = left.element;
        f.right_element = right.element;
        f.kind = r0 == Region::Elastic ? FaceKind::InteriorElastic : FaceKind::InteriorAcoustic;
      } else {
        const Incidence& el_side = r0 == Region::Elastic ? i0 : i1;
        const Incidence& ac_side = r0 == Region::Elastic ? i1 : i0;
        const Vec2 pa = mesh.vertices[el_side.a], pb = mesh.vertices[el_side.b];
        if (!mesh.interface_x || std::abs(pa.x - ifx) > kOnLineTol ||
            std::abs(pb.x - ifx) > kOnLineTol)
          throw std::runtime_error(
              "topology error: elements " + std::to_string(i0.element) + " and " +
              std::to_string(i1.element) +
              " of different regions share a face away from the interface line");
        f.a = el_side.a;
        f.b = el_side.b;
        f.left_element = el_side.element;
        f.right_element = ac_side.element;
        f.kind = FaceKind::Interface;
      }
    } else {
      throw std::runtime_error("topology error: edge shared by " + std::to_string(inc.size()) +
                               " elements");
    }
    const Vec2 pa = mesh.vertices[f.a], pb = mesh.vertices[f.b];
    f.length = dist(pa, pb);
    if (f.length <= 0.0) throw std::runtime_error("topology error: zero-length face");
    f.normal = Vec2{(pb.y - pa.y) / f.length, -(pb.x - pa.x) / f.length};
    mesh.faces.push_back(f);
  }
}

void subtriangulate(PolyMesh& mesh, int element_id) {
  PolyElement& el = mesh.elements[element_id];
  el.subtriangles.clear();
  const std::size_t n = el.vertex_ids.size();
  const Polygon poly = mesh.element_polygon(element_id);

  // Fan from the centroid, one simplex per (elementary) face.
  bool fan_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if (cross(a - el.centroid, b - el.centroid) <= 0.0) {
      fan_ok = false;
      break;
    }
  }
  if (fan_ok) {
    const int cid = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(el.centroid);
    for (std::size_t i = 0; i < n; ++i)
      el.subtriangles.push_back({cid, el.vertex_ids[i], el.vertex_ids[(i + 1) % n]});
    return;
  }

  // Ear clipping fallback (non-convex but simple polygons).
  std::vector<int> ids = el.vertex_ids;
  const double eps = 1e-14 * el.area;
  while (ids.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t ip = (i + ids.size() - 1) % ids.size();
      const std::size_t in = (i + 1) % ids.size();
      const Vec2& a = mesh.vertices[ids[ip]];
      const Vec2& b = mesh.vertices[ids[i]];
      const Vec2& c = mesh.vertices[ids[in]];
      if (cross(b - a, c - a) <= eps) continue;
      bool empty = true;
      for (std::size_t j = 0; j < ids.size() && empty; ++j) {
        if (j == ip || j == i || j == in) continue;
        const Vec2& p = mesh.vertices[ids[j]];
        const double d0 = cross(b - a, p - a);
        const double d1 = cross(c - b, p - b);
        const double d2 = cross(a - c, p - c);
        if (d0 > 0.0 && d1 > 0.0 && d2 > 0.0) empty = false;
      }
      if (!empty) continue;
      el.subtriangles.push_back({ids[ip], ids[i], ids[in]});
      ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped)
      throw std::runtime_error("subtriangulation failed for element " +
                               std::to_string(element_id));
  }
  el.subtriangles.push_back({ids[0], ids[1], ids[2]});
}

namespace {

void finalize_mesh(PolyMesh& mesh) {
  compute_element_metrics(mesh);

  // Derive the interface abscissa when absent: the regions must meet along a
  // vertical line.
  bool has_e = false, has_a = false;
  double e_max = -std::numeric_limits<double>::max();
  double a_min = std::numeric_limits<double>::max();
  for (const auto& el : mesh.elements) {
    for (int v : el.vertex_ids) {
      const double x = mesh.vertices[v].x;
      if (el.region == Region::Elastic) e_max = std::max(e_max, x);
      else a_min = std::min(a_min, x);
    }
    (el.region == Region::Elastic ? has_e : has_a) = true;
  }
  if (has_e && has_a && !mesh.interface_x) {
    if (std::abs(e_max - a_min) > 1e-9)
      throw std::runtime_error("regions do not meet along a vertical interface line");
    mesh.interface_x = e_max;
  }

  classify_faces(mesh);

  mesh.n_corner_vertices = static_cast<int>(mesh.vertices.size());
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) subtriangulate(mesh, e);

  // Area closure check.
  double total = 0.0;
  for (const auto& el : mesh.elements) total += el.area;
  const double box_area = mesh.box.area();
  if (box_area > 0.0 && std::abs(total - box_area) > 1e-10 * box_area)
    throw std::runtime_error("mesh does not tile the domain: total cell area " +
                             std::to_string(total) + " vs box area " + std::to_string(box_area));
}

Vec2 snap_point(Vec2 p, const Rect& box, std::optional<double> ifx) {
  if (std::abs(p.x - box.xmin) <= kWeldTol) p.x = box.xmin;
  if (std::abs(p.x - box.xmax) <= kWeldTol) p.x = box.xmax;
  if (std::abs(p.y - box.ymin) <= kWeldTol) p.y = box.ymin;
  if (std::abs(p.y - box.ymax) <= kWeldTol) p.y = box.ymax;
  if (ifx && std::abs(p.x - *ifx) <= kWeldTol) p.x = *ifx;
  return p;
}

}  // namespace

PolyMesh build_mesh_from_cells(const std::vector<Polygon>& elastic_cells,
                               const std::vector<Polygon>& acoustic_cells, const Rect& box,
                               std::optional<double> interface_x, int degree) {
  PolyMesh mesh;
  mesh.box = box;
  mesh.interface_x = interface_x;
  VertexWelder welder;
  auto add_cells = [&](const std::vector<Polygon>& cells, Region region) {
    for (const Polygon& poly : cells) {
      PolyElement el;
      el.region = region;
      el.degree = degree;
      el.vertex_ids.reserve(poly.size());
      for (const Vec2& p : poly) {
        const int id = welder.id_of(snap_point(p, box, interface_x), mesh.vertices);
        if (el.vertex_ids.empty() || el.vertex_ids.back() != id) el.vertex_ids.push_back(id);
      }
      while (el.vertex_ids.size() > 1 && el.vertex_ids.front() == el.vertex_ids.back())
        el.vertex_ids.pop_back();
      mesh.elements.push_back(std::move(el));
    }
  };
  add_cells(elastic_cells, Region::Elastic);
  add_cells(acoustic_cells, Region::Acoustic);
  finalize_mesh(mesh);
  return mesh;
}

std::vector<Polygon> clipped_voronoi(const Rect& box, const std::vector<Vec2>& seeds) {
  const int n = static_cast<int>(seeds.size());
  std::vector<Polygon> cells(n);
  const Polygon box_poly = box.corners();
  std::vector<std::pair<double, int>> order;
  order.reserve(n > 0 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) {
    Polygon cell = box_poly;
    order.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      order.emplace_back(dist(seeds[i], seeds[j]), j);
    }
    // usually only a few nearest seeds matter: sort a small prefix first and
    // fall back to the full sort only if the cutoff is not reached
    const std::size_t prefix = std::min<std::size_t>(order.size(), 48);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(prefix),
                      order.end());
    bool sorted_all = prefix == order.size();
    double radius = 0.0;
    for (const Vec2& v : cell) radius = std::max(radius, dist(v, seeds[i]));
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (!sorted_all && k == prefix) {
        std::sort(order.begin() + static_cast<std::ptrdiff_t>(prefix), order.end());
        sorted_all = true;
      }
      const auto [d, j] = order[k];
      if (d > 2.0 * radius) break;
      if (d < 1e-14)
        throw std::runtime_error("degenerate cell " + std::to_string(i) +
                                 ": coincident seeds " + std::to_string(i) + " and " +
                                 std::to_string(j));
      const Vec2 mid = 0.5 * (seeds[i] + seeds[j]);
      cell = clip_halfplane(cell, mid, seeds[j] - seeds[i]);
      if (cell.size() < 3)
        throw std::runtime_error("degenerate cell " + std::to_string(i) + ": clipped away");
      radius = 0.0;
      for (const Vec2& v : cell) radius = std::max(radius, dist(v, seeds[i]));
    }
    cells[i] = std::move(cell);
  }
  double mean = 0.0;
  std::vector<double> areas(n);
  for (int i = 0; i < n; ++i) {
    areas[i] = polygon_area(cells[i]);
    mean += areas[i];
  }
  mean /= std::max(1, n);
  for (int i = 0; i < n; ++i)
    if (areas[i] < 1e-12 * mean)
      throw std::runtime_error("degenerate cell " + std::to_string(i) + ": area " +
                               std::to_string(areas[i]) + " below 1e-12 of the mean");
  return cells;
}

std::vector<Vec2> lloyd_relax(const Rect& box, std::vector<Vec2> seeds, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    const std::vector<Polygon> cells = clipped_voronoi(box, seeds);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = polygon_centroid(cells[i]);
  }
  return seeds;
}

PolyMesh generate_mesh(const Rect& box, double interface_x, int n_elastic, int n_acoustic,
                       int lloyd_iterations, std::uint64_t rng_seed, int degree) {
  if (n_elastic < 1 || n_acoustic < 1)
    throw std::invalid_argument("generate_mesh: need at least one cell per subdomain");
  if (!(interface_x > box.xmin && interface_x < box.xmax))
    throw std::invalid_argument("generate_mesh: interface must lie strictly inside the box");

  const Rect ebox{box.xmin, interface_x, box.ymin, box.ymax};
  const Rect abox{interface_x, box.xmax, box.ymin, box.ymax};

  Rng rng(rng_seed);
  std::vector<Vec2> eseeds(n_elastic);
  for (auto& s : eseeds) s = {rng.uniform(ebox.xmin, ebox.xmax), rng.uniform(ebox.ymin, ebox.ymax)};
  eseeds = lloyd_relax(ebox, std::move(eseeds), lloyd_iterations);
  std::vector<Polygon> ecells = clipped_voronoi(ebox, eseeds);

  std::vector<Polygon> acells;
  if (n_acoustic == n_elastic) {
    // Mirror image of the elastic cells: interface traces then match vertex
    // by vertex (exactly when interface_x == 0).
    acells.reserve(ecells.size());
    for (const Polygon& cell : ecells) {
      Polygon m(cell.size());
      for (std::size_t k = 0; k < cell.size(); ++k) {
        const Vec2& p = cell[cell.size() - 1 - k];
        m[k] = {2.0 * interface_x - p.x, p.y};
      }
      acells.push_back(std::move(m));
    }
  } else {
    Rng arng(rng_seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<Vec2> aseeds(n_acoustic);
    for (auto& s : aseeds)
      s = {arng.uniform(abox.xmin, abox.xmax), arng.uniform(abox.ymin, abox.ymax)};
    aseeds = lloyd_relax(abox, std::move(aseeds), lloyd_iterations);
    acells = clipped_voronoi(abox, aseeds);
  }

  return build_mesh_from_cells(ecells, acells, box, interface_x, degree);
}

PolyMesh generate_grid_mesh(const Rect& box, double interface_x, int nx_e, int ny_e, int nx_a,
                            int ny_a, int degree) {
  if (nx_e < 1 || ny_e < 1 || nx_a < 1 || ny_a < 1)
    throw std::invalid_argument("generate_grid_mesh: all cell counts must be >= 1");
  if (!(interface_x > box.xmin && interface_x < box.xmax))
    throw std::invalid_argument("generate_grid_mesh: interface must lie strictly inside the box");

  auto coords = [](double lo, double hi, int n) {
    std::vector<double> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = lo + (hi - lo) * (static_cast<double>(i) / n);
    c.front() = lo;
    c.back() = hi;
    return c;
  };
  auto cells_of = [&](double lo, double hi, int nx, int ny) {
    const std::vector<double> xs = coords(lo, hi, nx);
    const std::vector<double> ys = coords(box.ymin, box.ymax, ny);
    std::vector<Polygon> cells;
    cells.reserve(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        cells.push_back({{xs[i], ys[j]}, {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]}, {xs[i], ys[j + 1]}});
    return cells;
  };
  return build_mesh_from_cells(cells_of(box.xmin, interface_x, nx_e, ny_e),
                               cells_of(interface_x, box.xmax, nx_a, ny_a), box, interface_x,
                               degree);
}

QualityReport quality_report(const PolyMesh& mesh) {
  QualityReport r;
  r.n_elements = static_cast<int>(mesh.elements.size());
  r.n_faces = static_cast<int>(mesh.faces.size());
  r.n_interior_elastic = mesh.count(FaceKind::InteriorElastic);
  r.n_interior_acoustic = mesh.count(FaceKind::InteriorAcoustic);
  r.n_boundary_elastic = mesh.count(FaceKind::BoundaryElasticDirichlet);
  r.n_boundary_acoustic = mesh.count(FaceKind::BoundaryAcousticDirichlet);
  r.n_interface = mesh.count(FaceKind::Interface);
  r.min_h = std::numeric_limits<double>::max();
  for (const auto& el : mesh.elements) {
    r.total_area += el.area;
    (el.region == Region::Elastic ? r.elastic_area : r.acoustic_area) += el.area;
    r.max_h = std::max(r.max_h, el.diameter);
    r.min_h = std::min(r.min_h, el.diameter);
  }
  r.min_simplex_height_ratio = std::numeric_limits<double>::max();
  for (const auto& f : mesh.faces) {
    const Vec2& a = mesh.vertices[f.a];
    const Vec2& b = mesh.vertices[f.b];
    for (int side = 0; side < 2; ++side) {
      const int e = side == 0 ? f.left_element : f.right_element;
      if (e < 0) continue;
      const PolyElement& el = mesh.elements[e];
      const double tri_area = 0.5 * std::abs(cross(a - el.centroid, b - el.centroid));
      r.min_simplex_height_ratio =
          std::min(r.min_simplex_height_ratio, 2.0 * tri_area / (f.length * el.diameter));
    }
    if (f.right_element >= 0) {
      r.has_interior_pairs = true;
      const PolyElement& el = mesh.elements[f.left_element];
      const PolyElement& er = mesh.elements[f.right_element];
      const double hr = el.diameter / er.diameter;
      const double pr = static_cast<double>(el.degree) / er.degree;
      r.max_neighbor_h_ratio = std::max({r.max_neighbor_h_ratio, hr, 1.0 / hr});
      r.max_neighbor_p_ratio = std::max({r.max_neighbor_p_ratio, pr, 1.0 / pr});
    }
  }
  if (!r.has_interior_pairs) {
    r.note = "no interior pairs";
    r.max_neighbor_h_ratio = 1.0;
    r.max_neighbor_p_ratio = 1.0;
  }
  if (r.min_simplex_height_ratio == std::numeric_limits<double>::max())
    r.min_simplex_height_ratio = 0.0;
  return r;
}

std::string QualityReport::to_string() const {
  char buf[1024];
  std::snprintf(buf, sizeof(buf),
                "elements: %d (areas: elastic %.12g, acoustic %.12g, total %.12g)\n"
                "faces: %d (interior e/a %d/%d, boundary e/a %d/%d, interface %d)\n"
                "h: [%.6g, %.6g]\n"
                "neighbor ratios: h %.6g, p %.6g%s\n"
                "min simplex height ratio: %.6g%s\n",
                n_elements, elastic_area, acoustic_area, total_area, n_faces, n_interior_elastic,
                n_interior_acoustic, n_boundary_elastic, n_boundary_acoustic, n_interface, min_h,
                max_h, max_neighbor_h_ratio, max_neighbor_p_ratio,
                has_interior_pairs ? "" : " (no interior pairs)", min_simplex_height_ratio,
                min_simplex_height_ratio < 0.05 ? "  [flag: shallow face simplices]" : "");
  return buf;
}

void set_degrees(PolyMesh& mesh, int degree) { set_degrees(mesh, degree, degree); }

void set_degrees(PolyMesh& mesh, int degree_elastic, int degree_acoustic) {
  if (degree_elastic < 0 || degree_acoustic < 0)
    throw std::invalid_argument("set_degrees: degrees must be non-negative");
  for (auto& el : mesh.elements)
    el.degree = el.region == Region::Elastic ? degree_elastic : degree_acoustic;
}

PolyMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  auto fail = [&](int line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
  };
  int lineno = 0;
  std::string line;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) fail(lineno, "unexpected end of file");
    ++lineno;
    return line;
  };

  if (next_line() != "polymesh 2d v1") fail(lineno, "bad header, expected 'polymesh 2d v1'");

  PolyMesh mesh;
  {
    std::istringstream ss(next_line());
    std::string tag;
    long long n = -1;
    if (!(ss >> tag >> n) || tag != "vertices" || n < 0) fail(lineno, "expected 'vertices N'");
    mesh.vertices.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
      std::istringstream vs(next_line());
      double x = 0.0, y = 0.0;
      if (!(vs >> x >> y)) fail(lineno, "expected 'x y'");
      if (!std::isfinite(x) || !std::isfinite(y)) fail(lineno, "non-finite vertex coordinate");
      mesh.vertices.push_back({x, y});
    }
  }
  {
    std::istringstream ss(next_line());
    std::string tag;
    long long m = -1;
    if (!(ss >> tag >> m) || tag != "elements" || m < 0) fail(lineno, "expected 'elements M'");
    mesh.elements.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
      std::istringstream es(next_line());
      std::string region;
      int degree = 0;
      long long k = 0;
      if (!(es >> region >> degree >> k)) fail(lineno, "expected 'region degree k id...'");
      if (region != "e" && region != "a") fail(lineno, "region tag must be 'e' or 'a'");
      if (degree < 1) fail(lineno, "degree must be >= 1");
      if (k < 3) fail(lineno, "element needs at least 3 vertices");
      PolyElement el;
      el.region = region == "e" ? Region::Elastic : Region::Acoustic;
      el.degree = degree;
      for (long long j = 0; j < k; ++j) {
        long long id = -1;
        if (!(es >> id)) fail(lineno, "missing vertex id");
        if (id < 0 || id >= static_cast<long long>(mesh.vertices.size()))
          fail(lineno, "vertex id " + std::to_string(id) + " out of range");
        el.vertex_ids.push_back(static_cast<int>(id));
      }
      mesh.elements.push_back(std::move(el));
    }
  }
  if (mesh.elements.empty()) throw std::runtime_error(path + ": mesh has no elements");

  double xmin = std::numeric_limits<double>::max(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& v : mesh.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  mesh.box = {xmin, xmax, ymin, ymax};
  try {
    finalize_mesh(mesh);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return mesh;
}

void write_mesh(const PolyMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  const int nv = mesh.n_corner_vertices > 0 ? mesh.n_corner_vertices
                                            : static_cast<int>(mesh.vertices.size());
  char buf[96];
  out << "polymesh 2d v1\n";
  out << "vertices " << nv << "\n";
  for (int i = 0; i < nv; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", mesh.vertices[i].x, mesh.vertices[i].y);
    out << buf;
  }
  out << "elements " << mesh.elements.size() << "\n";
  for (const auto& el : mesh.elements) {
    out << (el.region == Region::Elastic ? 'e' : 'a') << ' ' << el.degree << ' '
        << el.vertex_ids.size();
    for (int id : el.vertex_ids) out << ' ' << id;
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing mesh file: " + path);
}

}  // namespace eaw
