#include "evoch/surface.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "evoch/errors.hpp"

namespace evoch {

void SurfaceMesh::rebuild_cache() {
  const bool have_ref = elem_cache.size() == triangles.size();
  std::vector<ElementCache> cache(triangles.size());
  for (int k = 0; k < n_triangles(); ++k) {
    const auto& tri = triangles[k];
    const Eigen::Vector3d& x0 = vertices_cur[tri[0]];
    const Eigen::Vector3d& x1 = vertices_cur[tri[1]];
    const Eigen::Vector3d& x2 = vertices_cur[tri[2]];
    const Eigen::Vector3d cross = (x1 - x0).cross(x2 - x0);
    const double two_area = cross.norm();
    ElementCache& c = cache[k];
    c.area_cur = 0.5 * two_area;
    if (have_ref) {
      c.area_ref = elem_cache[k].area_ref;
    } else {
      const Eigen::Vector3d& p0 = vertices_ref[tri[0]];
      const Eigen::Vector3d& p1 = vertices_ref[tri[1]];
      const Eigen::Vector3d& p2 = vertices_ref[tri[2]];
      c.area_ref = 0.5 * (p1 - p0).cross(p2 - p0).norm();
    }
    if (!(c.area_ref > 0.0))
      throw GeometryError("element " + std::to_string(k) + " has zero reference area");
    if (c.area_cur < 1e-14 * c.area_ref)
      throw GeometryError("element " + std::to_string(k) + " degenerated at t=" +
                          std::to_string(time) + " (area " + std::to_string(c.area_cur) + ")");
    c.normal = cross / two_area;
    // grad chi_i = n x (x_{i+2} - x_{i+1}) / (2A), exact for affine fields
    c.grad[0] = c.normal.cross(x2 - x1) / two_area;
    c.grad[1] = c.normal.cross(x0 - x2) / two_area;
    c.grad[2] = c.normal.cross(x1 - x0) / two_area;
  }
  elem_cache = std::move(cache);
}

void SurfaceMesh::validate_closed() const {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& tri : triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      if (a == b) throw GeometryError("degenerate triangle edge");
      if (++directed[{a, b}] > 1)
        throw GeometryError("directed edge repeated: mesh not consistently oriented");
    }
  }
  for (const auto& [edge, count] : directed) {
    (void)count;
    auto rev = directed.find({edge.second, edge.first});
    if (rev == directed.end())
      throw GeometryError("boundary edge found: mesh is not closed");
  }
}

double SurfaceMesh::total_area() const {
  double a = 0.0;
  for (const auto& c : elem_cache) a += c.area_cur;
  return a;
}

double SurfaceMesh::total_area_ref() const {
  double a = 0.0;
  for (const auto& c : elem_cache) a += c.area_ref;
  return a;
}

namespace {

SurfaceMesh build_icosphere(int refinement) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < refinement; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Eigen::Vector3d m = (verts[a] + verts[b]).normalized();
      const int idx = static_cast<int>(verts.size());
      verts.push_back(m);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({ab, f[1], bc});
      next.push_back({ca, bc, f[2]});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  SurfaceMesh mesh;
  mesh.vertices_ref = verts;
  mesh.vertices_cur = std::move(verts);
  mesh.triangles = std::move(faces);
  mesh.time = 0.0;
  mesh.rebuild_cache();
  mesh.validate_closed();
  return mesh;
}

}  // namespace

SurfaceMesh build_reference_surface(SurfacePreset preset, int refinement) {
  if (refinement < 0 || refinement > 7)
    throw ConfigError("surface refinement must be in [0,7], got " + std::to_string(refinement));
  switch (preset) {
    case SurfacePreset::UnitSphere:
      return build_icosphere(refinement);
  }
  throw ConfigError("unknown surface preset");
}

SurfaceMesh advance_mesh(const SurfaceMesh& mesh, const FlowField& flow, double t) {
  SurfaceMesh out = mesh;
  out.time = t;
  for (int i = 0; i < mesh.n_vertices(); ++i)
    out.vertices_cur[i] = flow.position(mesh.vertices_ref[i], t);
  out.rebuild_cache();
  return out;
}

std::vector<double> density(const SurfaceMesh& mesh) {
  std::vector<double> rho(mesh.n_triangles());
  for (int k = 0; k < mesh.n_triangles(); ++k)
    rho[k] = mesh.elem_cache[k].area_ref / mesh.elem_cache[k].area_cur;
  return rho;
}

Eigen::Vector3d tangential_gradient(const SurfaceMesh& mesh, const Eigen::VectorXd& nodal,
                                    int element) {
  const auto& tri = mesh.triangles[element];
  const auto& c = mesh.elem_cache[element];
  return nodal[tri[0]] * c.grad[0] + nodal[tri[1]] * c.grad[1] + nodal[tri[2]] * c.grad[2];
}

}  // namespace evoch
