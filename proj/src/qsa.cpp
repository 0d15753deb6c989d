#include "panelint/qsa.hpp"

#include <cmath>

#include "panelint/radial.hpp"

namespace panelint {

namespace {

// atanh(cos t2 - sin t2 tan(t/2))
double vertex_atanh(double t, double t2) {
  return std::atanh(std::cos(t2) - std::sin(t2) * std::tan(0.5 * t));
}

double log_tan_half(double t, double t2) { return std::log(std::tan(0.5 * (t + t2))); }

BivariatePoly quadratic_numerator(const FundamentalForm& K) {
  BivariatePoly q;
  q.c[monomial_index(2, 0)] = -0.5 * K.k11;
  q.c[monomial_index(1, 1)] = -K.k12;
  q.c[monomial_index(0, 2)] = -0.5 * K.k22;
  return q;
}

void check_linear(const PanelPolynomial& p) {
  if (p.degree() > 1) throw DomainError("QSA supports densities of degree <= 1");
}

}  // namespace

double vertex_angular_primitive(int a, int b, double t, double t2) {
  const double s2 = std::sin(t2), c2 = std::cos(t2);
  switch (a * 4 + b) {
    case 5:  // (1,1)
      return std::sin(t - t2) - 0.5 * std::sin(2.0 * t2) * log_tan_half(t, t2);
    case 8:  // (2,0)
      return std::cos(t - t2) + c2 * c2 * log_tan_half(t, t2);
    case 2:  // (0,2)
      return -std::cos(t - t2) + s2 * s2 * log_tan_half(t, t2);
    case 9:  // (2,1)
      return 0.25 * (-2.0 * (c2 + 3.0 * std::cos(3.0 * t2)) * vertex_atanh(t, t2) +
                     (2.0 * std::sin(2.0 * t - t2) + s2 + 3.0 * std::sin(3.0 * t2)) /
                         std::sin(t + t2));
    case 6:  // (1,2)
      return 0.25 * (-2.0 * (s2 - 3.0 * std::sin(3.0 * t2)) * vertex_atanh(t, t2) -
                     (2.0 * std::cos(2.0 * t - t2) + c2 - 3.0 * std::cos(3.0 * t2)) /
                         std::sin(t + t2));
    case 12:  // (3,0)
      return -std::sin(t - 2.0 * t2) - 6.0 * c2 * c2 * s2 * vertex_atanh(t, t2) -
             c2 * c2 * c2 / std::sin(t + t2);
    case 3:  // (0,3)
      return -std::cos(t - 2.0 * t2) - 6.0 * c2 * s2 * s2 * vertex_atanh(t, t2) +
             s2 * s2 * s2 / std::sin(t + t2);
  }
  throw DomainError("vertex angular primitive defined for a+b in {2,3} only");
}

double qsa_on_boundary_general(const Panel& panel, const Target& target,
                               const FundamentalForm& form, const PanelPolynomial& p) {
  check_linear(p);
  const NormalizedFrame f = projected_frame(panel, target.x, target.n);
  const FundamentalForm K =
      form.in_basis(f.rotation.row(0).transpose(), f.rotation.row(1).transpose());
  const BivariatePoly poly =
      quadratic_numerator(K) * p.to_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
  const MomentSet m = compute_k_moments(decompose_polar(f.planar_triangle), 0.0, 3, 2);
  return contract_k(m, poly) / kFourPi;
}

double qsa_vertex(const Panel& panel, const Target& target, const FundamentalForm& form,
                  const PanelPolynomial& p) {
  check_linear(p);
  const NormalizedFrame f = projected_frame(panel, target.x, target.n);
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (f.mapped[i].squaredNorm() < f.mapped[k].squaredNorm()) k = i;
  const double diam = panel.diameter();
  if (f.mapped[k].norm() > 1e-12 * diam || (panel.vertex(k) - target.x).norm() > 1e-12 * diam)
    throw DomainError("qsa_vertex: target is not a panel vertex");

  int i2 = (k + 1) % 3, i3 = (k + 2) % 3;
  auto cross2 = [](const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); };
  if (cross2(f.mapped[i2], f.mapped[i3]) < 0.0) std::swap(i2, i3);

  // In-plane rotation taking pV2 to the positive s1 axis.
  const double alpha = std::atan2(f.mapped[i2].y(), f.mapped[i2].x());
  Mat2 Q;
  Q << std::cos(alpha), std::sin(alpha), -std::sin(alpha), std::cos(alpha);
  std::array<Vec2, 3> q;
  for (int i = 0; i < 3; ++i) q[i] = Q * f.mapped[i];
  q[k] = Vec2::Zero();
  const Vec2 v2 = q[i2], v3 = q[i3];
  const double L = v2.x();
  const double theta_end = std::atan2(v3.y(), v3.x());
  const Vec2 a = -v2, b = v3 - v2;
  const double theta2 = std::atan2(std::abs(cross2(a, b)), a.dot(b));
  if (!(theta_end > 0.0) || !(theta2 > 0.0) || !(theta2 < kPi))
    throw DomainError("qsa_vertex: degenerate projected triangle");

  // Rotated in-plane basis vectors in world coordinates.
  const Vec3 w1 = f.rotation.row(0).transpose(), w2 = f.rotation.row(1).transpose();
  const Vec3 g1 = Q(0, 0) * w1 + Q(0, 1) * w2;
  const Vec3 g2 = Q(1, 0) * w1 + Q(1, 1) * w2;
  const FundamentalForm K = form.in_basis(g1, g2);
  const BivariatePoly poly = quadratic_numerator(K) * p.to_planar(q[0], q[1], q[2]);

  const double h = L * std::sin(theta2);
  double total = 0.0;
  for (int idx = 3; idx < 10; ++idx) {
    if (poly.c[idx] == 0.0) continue;
    const int ea = kMonomials[idx][0], eb = kMonomials[idx][1];
    const int n = ea + eb;
    const double scale = std::pow(h, n - 1) / (n - 1);
    total += poly.c[idx] * scale *
             (vertex_angular_primitive(ea, eb, theta_end, theta2) -
              vertex_angular_primitive(ea, eb, 0.0, theta2));
  }
  return total / kFourPi;
}

double qsa_on_boundary(const Panel& panel, const Target& target, const FundamentalForm& form,
                       const PanelPolynomial& p) {
  const double tol = 1e-12 * panel.diameter();
  for (int i = 0; i < 3; ++i)
    if ((panel.vertex(i) - target.x).norm() <= tol) return qsa_vertex(panel, target, form, p);
  return qsa_on_boundary_general(panel, target, form, p);
}

double qsa_off_boundary(const Panel& panel, const Target& target, const Vec3& foot,
                        const Vec3& foot_normal, const FundamentalForm& form,
                        const PanelPolynomial& p) {
  check_linear(p);
  const double c = (target.x - foot).dot(foot_normal);
  if (std::abs(c) < kRadialClamp)
    throw DomainError("qsa_off_boundary: target on the surface, use the on-boundary path");
  const NormalizedFrame f = projected_frame(panel, foot, foot_normal);
  const FundamentalForm K =
      form.in_basis(f.rotation.row(0).transpose(), f.rotation.row(1).transpose());
  const Vec3 n = f.rotation * target.n;
  BivariatePoly num = quadratic_numerator(K) * n.z();
  num.c[0] = c * n.z();
  num.c[1] = -n.x();
  num.c[2] = -n.y();
  const BivariatePoly poly = num * p.to_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
  const MomentSet m = compute_k_moments(decompose_polar(f.planar_triangle), c, 3);
  return contract_k(m, poly) / kFourPi;
}

FootPoint foot_point(const SdfProbe& probe, const Vec3& x, int max_iter) {
  Vec3 y = x;
  for (int it = 0; it < max_iter; ++it) {
    const double F = probe.value(y);
    const Vec3 g = probe.gradient(y);
    if (std::abs(F) < 1e-12) break;
    y -= F * g / g.squaredNorm();
  }
  // Refine so that x - y is along the normal at y.
  for (int it = 0; it < max_iter; ++it) {
    const Vec3 n = probe.gradient(y).normalized();
    const Vec3 t = (x - y) - n * n.dot(x - y);
    Vec3 z = y + t;
    for (int k = 0; k < max_iter; ++k) {
      const double F = probe.value(z);
      if (std::abs(F) < 1e-13) break;
      const Vec3 g = probe.gradient(z);
      z -= F * g / g.squaredNorm();
    }
    const double step = (z - y).norm();
    y = z;
    if (step < 1e-14 * (1.0 + x.norm())) break;
  }
  if (!(std::abs(probe.value(y)) < 1e-10)) throw DomainError("foot point iteration did not converge");
  FootPoint fp;
  fp.foot = y;
  fp.normal = probe.gradient(y).normalized();
  fp.c = (x - y).dot(fp.normal);
  return fp;
}

double qsa_epsilon(const Panel& panel, const Vec3& origin, const Vec3& normal) {
  const NormalizedFrame f = projected_frame(panel, origin, normal);
  double e = 0.0;
  for (const Vec2& v : f.mapped) e = std::max(e, v.norm());
  return e;
}

}  // namespace panelint
