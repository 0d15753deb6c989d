#pragma once

#include <array>

#include "panelint/geometry.hpp"

namespace panelint {

// Monomial index for total degree <= 3, ordered
// 1, s1, s2, s1^2, s1 s2, s2^2, s1^3, s1^2 s2, s1 s2^2, s2^3.
int monomial_index(int a, int b);
inline constexpr std::array<std::array<int, 2>, 10> kMonomials{{
    {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}};

struct BivariatePoly {
  std::array<double, 10> c{};

  double operator()(double s1, double s2) const;
  int degree() const;
  BivariatePoly operator*(const BivariatePoly& o) const;  // throws above degree 3
  BivariatePoly operator+(const BivariatePoly& o) const;
  BivariatePoly operator*(double k) const;
};

// Quadratic in the panel's affine coordinates (u, v), y = V1 + u (V2-V1) + v (V3-V1);
// the barycentric weights are (1-u-v, u, v).
struct PanelPolynomial {
  // 1, u, v, u^2, u v, v^2
  std::array<double, 6> a{};

  static PanelPolynomial constant(double k);
  static PanelPolynomial vertex_basis(int i);
  static PanelPolynomial vertex_values(double g1, double g2, double g3);
  // Restriction of y -> g0 + g . y to the panel.
  static PanelPolynomial world_affine(const Panel& panel, double g0, const Vec3& g);

  int degree() const;
  double operator()(double u, double v) const;
  PanelPolynomial operator+(const PanelPolynomial& o) const;
  PanelPolynomial operator*(double k) const;

  // Monomials in (s1, s2) for the triangle whose vertices V1, V2, V3 map to q1, q2, q3.
  BivariatePoly to_planar(const Vec2& q1, const Vec2& q2, const Vec2& q3) const;
};

struct MomentSet {
  // K-kernel moments, indexed like kMonomials:
  // i0, ix, iy, ixx, ixy, iyy, ixxx, ixxy, ixyy, iyyy
  std::array<double, 10> k{};
  double j0 = 0.0, jx = 0.0, jy = 0.0;

  double i0() const { return k[0]; }
  double ix() const { return k[1]; }
  double iy() const { return k[2]; }
  double ixx() const { return k[3]; }
  double ixy() const { return k[4]; }
  double iyy() const { return k[5]; }
  double ixxx() const { return k[6]; }
  double ixxy() const { return k[7]; }
  double ixyy() const { return k[8]; }
  double iyyy() const { return k[9]; }
};

// Integrals of s1^a s2^b / (s1^2+s2^2+c^2)^{3/2} over the decomposed triangle
// for min_degree <= a+b <= max_degree; other entries are left at zero.
MomentSet compute_k_moments(const PolarDecomposition& dec, double c, int max_degree,
                            int min_degree = 0);

// Integrals of {1, s1, s2} / (s1^2+s2^2+c^2)^{1/2}.
MomentSet compute_g_moments(const PolarDecomposition& dec, double c);

double contract_k(const MomentSet& m, const BivariatePoly& poly);

// K(x,y) = (x-y).n(x) / (4 pi |x-y|^3)
double integrate_k_panel(const Panel& panel, const Target& target, const PanelPolynomial& p);

// G(x,y) = -1 / (4 pi |x-y|)
double integrate_g_panel(const Panel& panel, const Target& target, const PanelPolynomial& p);

// Same integrals for all three vertex basis functions at once.
std::array<double, 3> integrate_k_panel_basis(const Panel& panel, const Target& target);
std::array<double, 3> integrate_g_panel_basis(const Panel& panel, const Target& target);

// Integral of grad_x G(x,y) = (x-y) / (4 pi |x-y|^3) against each vertex basis function.
std::array<Vec3, 3> integrate_grad_g_panel_basis(const Panel& panel, const Vec3& x);

}  // namespace panelint
