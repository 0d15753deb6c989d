#pragma once

#include <functional>

#include "panelint/geometry.hpp"

namespace panelint {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

struct OracleOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  int max_depth = 40;
  // Vertex index (0..2) toward which the first levels are pre-refined, or -1.
  int singular_corner = -1;
  long max_evaluations = 200'000'000;
};

using PlanarIntegrand = std::function<double(const Vec2&)>;
using SurfaceIntegrand = std::function<double(const Vec3&)>;

// Global adaptive 4-way subdivision. The error of a cell is the difference
// between its rule value and the sum of the rule over its four children.
QuadratureResult adaptive_triangle(const PlanarIntegrand& f, const PlanarTriangle& tri,
                                   const OracleOptions& opt = {});

struct Chart {
  Vec3 anchor;
  // Displacement dy = y - anchor of the surface point and the partial
  // derivatives of y; dy is computed without cancellation near the anchor.
  std::function<void(const Vec2& uv, Vec3& dy, Vec3& du, Vec3& dv)> eval;
};

Chart flat_chart(const Vec3& v1, const Vec3& v2, const Vec3& v3);
// Central projection of the flat triangle onto the sphere |y - center| = radius,
// anchored at the projection of v1.
Chart sphere_chart(const Vec3& v1, const Vec3& v2, const Vec3& v3, const Vec3& center = Vec3::Zero(),
                   double radius = 1.0);

// Integral of f over the chart image of the reference triangle (0,0),(1,0),(0,1).
QuadratureResult adaptive_patch(const SurfaceIntegrand& f, const Chart& chart,
                                const OracleOptions& opt = {});
// Same, with f receiving the displacement y - chart.anchor.
QuadratureResult adaptive_patch_local(const SurfaceIntegrand& f, const Chart& chart,
                                      const OracleOptions& opt = {});

// Duffy map collapsing an edge of the unit square onto tri.vertex(corner),
// integrated by nested adaptive Gauss-Kronrod.
double duffy_triangle(const PlanarIntegrand& f, const PlanarTriangle& tri, int corner,
                      double tol = 1e-12);

PlanarTriangle raw_triangle(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace panelint
