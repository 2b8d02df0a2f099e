#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "evoch/flow.hpp"

namespace evoch {

/// Per-triangle geometry on the current configuration. Shape gradients are
/// the constant in-plane gradients of the P1 hat functions.
struct ElementCache {
  double area_cur = 0.0;
  double area_ref = 0.0;
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();
  std::array<Eigen::Vector3d, 3> grad{};
};

/// Triangulated closed surface carrying both the reference (t=0) and the
/// current vertex positions. Vertices move with the flow map; connectivity
/// and reference data never change, which realizes the transported P1 basis
/// (material derivative of every hat function is zero).
struct SurfaceMesh {
  std::vector<Eigen::Vector3d> vertices_ref;
  std::vector<Eigen::Vector3d> vertices_cur;
  std::vector<std::array<int, 3>> triangles;
  std::vector<ElementCache> elem_cache;
  double time = 0.0;

  int n_vertices() const { return static_cast<int>(vertices_ref.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  /// Recompute elem_cache from vertices_cur. Throws GeometryError when an
  /// element area falls below 1e-14 of its reference area.
  void rebuild_cache();

  /// Closed orientable manifold check: every directed edge appears exactly
  /// once and its reverse exactly once. Throws GeometryError otherwise.
  void validate_closed() const;

  double total_area() const;
  double total_area_ref() const;

  /// Element area ratio J = (current area)/(reference area).
  double area_ratio(int element) const {
    return elem_cache[element].area_cur / elem_cache[element].area_ref;
  }

  Eigen::Vector3d quad_point(int element, const Eigen::Vector3d& bary) const {
    const auto& tri = triangles[element];
    return bary[0] * vertices_cur[tri[0]] + bary[1] * vertices_cur[tri[1]] +
           bary[2] * vertices_cur[tri[2]];
  }
};

enum class SurfacePreset { UnitSphere };

/// Icosphere with `refinement` subdivision levels; vertices on |x| = 1.
SurfaceMesh build_reference_surface(SurfacePreset preset, int refinement);

/// Mesh transported to time t: vertices_cur[i] = Phi(vertices_ref[i], t).
SurfaceMesh advance_mesh(const SurfaceMesh& mesh, const FlowField& flow, double t);

/// Per-element transported density, rho = (reference area)/(current area) = 1/J.
std::vector<double> density(const SurfaceMesh& mesh);

/// Constant in-plane gradient of the P1 interpolant on one element.
Eigen::Vector3d tangential_gradient(const SurfaceMesh& mesh, const Eigen::VectorXd& nodal,
                                    int element);

}  // namespace evoch
