#pragma once

#include <variant>

#include "panelint/curvature.hpp"
#include "panelint/panel_integrals.hpp"

namespace panelint {

// Primitive in theta of cos^a sin^b / sin(theta + theta2)^(a+b-1), a+b in {2,3}.
double vertex_angular_primitive(int a, int b, double theta, double theta2);

// On-boundary target: target.n must be the surface normal at target.x and
// `form` the second fundamental form there. p must have degree <= 1.
// Dispatches to qsa_vertex when the target is a panel vertex.
double qsa_on_boundary(const Panel& panel, const Target& target, const FundamentalForm& form,
                       const PanelPolynomial& p);
// Polar-decomposition path, also valid for vertex targets.
double qsa_on_boundary_general(const Panel& panel, const Target& target,
                               const FundamentalForm& form, const PanelPolynomial& p);
double qsa_vertex(const Panel& panel, const Target& target, const FundamentalForm& form,
                  const PanelPolynomial& p);

// Off-boundary target x with surface foot point `foot`, outward normal `foot_normal`
// and form at the foot; c = (x - foot) . foot_normal.
double qsa_off_boundary(const Panel& panel, const Target& target, const Vec3& foot,
                        const Vec3& foot_normal, const FundamentalForm& form,
                        const PanelPolynomial& p);

struct FootPoint {
  Vec3 foot;
  Vec3 normal;
  double c = 0.0;
};

FootPoint foot_point(const SdfProbe& probe, const Vec3& x, int max_iter = 50);

// Max |s| over the projected panel, in the tangent frame at `origin`.
double qsa_epsilon(const Panel& panel, const Vec3& origin, const Vec3& normal);

}  // namespace panelint
