#pragma once

#include <functional>
#include <vector>

#include "panelint/geometry.hpp"
#include "panelint/mesh.hpp"

namespace panelint {

struct FundamentalForm {
  double k11 = 0.0, k12 = 0.0, k22 = 0.0;
  // In-plane unit vectors (world coordinates) the entries refer to.
  Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY();

  Mat2 matrix() const;
  // Same form expressed in another orthonormal tangent basis.
  FundamentalForm in_basis(const Vec3& f1, const Vec3& f2) const;
  // Eigenvalues, ascending.
  Vec2 principal() const;
  FundamentalForm operator*(double k) const;
};

struct SdfProbe {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<Mat3(const Vec3&)> hessian;
};

SdfProbe sphere_probe(const Vec3& center = Vec3::Zero(), double radius = 1.0);
SdfProbe plane_probe(const Vec3& normal, double offset);  // normal . x + offset
SdfProbe torus_probe(double major, double minor);         // axis z, centred at origin
SdfProbe cylinder_probe(double radius, const Vec3& axis);  // through the origin
SdfProbe scaled_probe(const SdfProbe& p, double scale);
SdfProbe negated_probe(const SdfProbe& p);

Mat3 shape_operator(const SdfProbe& probe, const Vec3& x);
FundamentalForm fundamental_form_from_shape(const Mat3& S, const NormalizedFrame& frame);
// Form at a surface point, in the tangent basis of rotation_to_z(grad F).
FundamentalForm probe_fundamental_form(const SdfProbe& probe, const Vec3& x);

std::vector<Vec3> estimate_normals(const SurfaceMesh& mesh);

// Least-squares quadratic graph fit over the 1-ring (2-ring when the 1-ring has
// fewer than 8 nodes) in the frame where the node normal is +z.
FundamentalForm estimate_fundamental_form(const SurfaceMesh& mesh, int node,
                                          const std::vector<Vec3>& normals,
                                          const std::vector<std::vector<int>>& neighbors);
FundamentalForm estimate_fundamental_form(const SurfaceMesh& mesh, int node);
std::vector<FundamentalForm> estimate_fundamental_forms(const SurfaceMesh& mesh,
                                                        const std::vector<Vec3>& normals);

// Direct finite-difference system for grad n at a node from three neighbours.
// Only a diagnostic: its conditioning degrades as the mesh is refined.
struct GradientSystem {
  Eigen::Matrix<double, 9, 9> matrix;
  Eigen::Matrix<double, 9, 1> rhs;
  double condition = 0.0;
  Mat3 solve() const;
};
GradientSystem normal_gradient_system(const SurfaceMesh& mesh, int node,
                                      const std::vector<Vec3>& normals);

}  // namespace panelint
