#pragma once

#include <array>
#include <vector>

#include "panelint/types.hpp"

namespace panelint {

struct Panel {
  Vec3 v1, v2, v3;
  Vec3 normal;

  // Normal from the vertex order; throws DomainError for zero area.
  static Panel from_vertices(const Vec3& a, const Vec3& b, const Vec3& c);
  double area() const;
  double diameter() const;
  Vec3 centroid() const { return (v1 + v2 + v3) / 3.0; }
  const Vec3& vertex(int i) const { return i == 0 ? v1 : (i == 1 ? v2 : v3); }
};

struct Target {
  Vec3 x;
  Vec3 n;
};

struct PlanarTriangle {
  Vec2 p1, p2, p3;
  // perm[k] is the input index that became vertex k.
  std::array<int, 3> perm{0, 1, 2};

  const Vec2& vertex(int i) const { return i == 0 ? p1 : (i == 1 ? p2 : p3); }
  double signed_area() const;
};

struct NormalizedFrame {
  Mat3 rotation;
  Vec3 translation;  // frame point = rotation * world + translation
  double c = 0.0;
  // Mapped panel vertices in the input order (z dropped).
  std::array<Vec2, 3> mapped;
  PlanarTriangle planar_triangle;
  Vec3 rotated_target_normal;

  Vec3 to_frame(const Vec3& y) const { return rotation * y + translation; }
};

struct EdgeGeometry {
  double d = 0.0;
  double phi = 0.0;
  bool foot_on_edge = false;
  int sign_toward_first_vertex = 1;
  Vec2 foot;
  double t_a = 0.0, t_b = 0.0;  // edge endpoints along u = (-sin phi, cos phi)
  int start_sign = 1;           // arccos sign whose crossing enters the triangle
};

enum class EdgeActivity : int { Inactive = -1, Split = 0, Active = 1 };

struct AngleBoundary {
  int sign = 1;
  double d = 0.0;
  double phi = 0.0;

  double theta(double r) const;
};

struct AngularSegment {
  AngleBoundary start, end;
};

struct PolarSlab {
  double r_lo = 0.0, r_hi = 0.0;
  bool full_circle = false;
  std::vector<AngularSegment> segments;
  std::array<EdgeActivity, 3> activity{};
};

struct PolarDecomposition {
  std::vector<PolarSlab> slabs;
};

// Rotation taking unit vector n to (0,0,1).
Mat3 rotation_to_z(const Vec3& n);

NormalizedFrame normalize_frame(const Panel& panel, const Target& target);

// Frame with the target at the origin and `up` mapped to (0,0,1); the panel
// vertices are projected orthogonally onto the z = 0 plane.
NormalizedFrame projected_frame(const Panel& panel, const Vec3& origin, const Vec3& up);

PlanarTriangle orient_planar(const Vec2& p1, const Vec2& p2, const Vec2& p3);

std::array<EdgeGeometry, 3> edge_geometry(const PlanarTriangle& tri);

std::vector<double> critical_radii(const PlanarTriangle& tri);

bool point_in_triangle(const Vec2& p, const PlanarTriangle& tri, double tol = 1e-12);

PolarDecomposition decompose_polar(const PlanarTriangle& tri);

// Edge activities on (0, R1), (R1, R2), ..., (Rlast, inf).
std::vector<std::array<EdgeActivity, 3>> activity_sequence(const PlanarTriangle& tri);

}  // namespace panelint
