#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "panelint/geometry.hpp"

namespace panelint {

enum class MeshFormat { OFF, JSON };

struct SurfaceMesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::optional<std::vector<Vec3>> node_normals;

  Panel panel(size_t t) const;
  // Triangles incident to each node.
  std::vector<std::vector<int>> node_triangles() const;
  // Sorted, deduplicated edge neighbours of each node.
  std::vector<std::vector<int>> node_neighbors() const;
  // Divergence-theorem volume; negative for inward orientation.
  double signed_volume() const;
  double total_area() const;
};

class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

// Throws MeshError naming the offending triangle.
void validate_mesh(const SurfaceMesh& mesh);

MeshFormat format_from_path(const std::string& path);
SurfaceMesh load_mesh(const std::string& path, MeshFormat format);
SurfaceMesh load_mesh(const std::string& path);
void save_mesh(const SurfaceMesh& mesh, const std::string& path, MeshFormat format);

SurfaceMesh parse_off(const std::string& text);
SurfaceMesh parse_mesh_json(const std::string& text);
std::string to_off(const SurfaceMesh& mesh);
std::string to_mesh_json(const SurfaceMesh& mesh);

// Icosahedron refined by midpoint subdivision, projected to the unit sphere.
SurfaceMesh generate_sphere_mesh(int subdivisions);
// Icosahedron faces split into frequency^2 triangles, projected to the unit sphere;
// 10 f^2 + 2 nodes.
SurfaceMesh generate_geodesic_sphere(int frequency);
SurfaceMesh generate_torus_mesh(double major, double minor, int n_u, int n_v);

}  // namespace panelint
