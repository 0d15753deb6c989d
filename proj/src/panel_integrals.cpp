#include "panelint/panel_integrals.hpp"

#include <cmath>

#include "panelint/radial.hpp"

namespace panelint {

namespace {

// Cubic in q = sqrt(r^2 - d^2).
using QPoly = std::array<double, 4>;

QPoly qmul(const QPoly& a, const QPoly& b) {
  QPoly out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) out[i + j] += a[i] * b[j];
  return out;
}

QPoly qadd(const QPoly& a, const QPoly& b, double kb = 1.0) {
  QPoly out;
  for (int i = 0; i < 4; ++i) out[i] = a[i] + kb * b[i];
  return out;
}

// r^n times the theta-antiderivative of cos^a sin^b, evaluated on a boundary,
// split as theta_coef * theta * r^n + poly(q).
struct AngularTerm {
  double theta_coef = 0.0;
  QPoly poly{};
};

AngularTerm angular_term(int a, int b, const AngleBoundary& bd, double cp, double sp) {
  const double d = bd.d;
  const QPoly X{d * cp, -bd.sign * sp, 0.0, 0.0};
  const QPoly Y{d * sp, bd.sign * cp, 0.0, 0.0};
  const QPoly R2{d * d, 0.0, 1.0, 0.0};
  AngularTerm t;
  switch (a * 4 + b) {
    case 0: t.theta_coef = 1.0; break;
    case 4: t.poly = Y; break;
    case 1: t.poly = qadd(QPoly{}, X, -1.0); break;
    case 8: t.theta_coef = 0.5; t.poly = qadd(QPoly{}, qmul(X, Y), 0.5); break;
    case 2: t.theta_coef = 0.5; t.poly = qadd(QPoly{}, qmul(X, Y), -0.5); break;
    case 5: t.poly = qadd(QPoly{}, qmul(Y, Y), 0.5); break;
    case 12: t.poly = qadd(qmul(R2, Y), qmul(qmul(Y, Y), Y), -1.0 / 3.0); break;
    case 9: t.poly = qadd(QPoly{}, qmul(qmul(X, X), X), -1.0 / 3.0); break;
    case 6: t.poly = qadd(QPoly{}, qmul(qmul(Y, Y), Y), 1.0 / 3.0); break;
    case 3: t.poly = qadd(qadd(QPoly{}, qmul(R2, X), -1.0), qmul(qmul(X, X), X), 1.0 / 3.0);
            break;
  }
  return t;
}

struct Interval {
  double lo, hi, c;
};

double rad(RadialKind k, const Interval& iv, double d) {
  return definite_radial(k, iv.lo, iv.hi, iv.c, d);
}

// Definite radial integrals of one boundary over one slab, computed on demand.
class RadialCache {
 public:
  // Slab radii and d come from different expressions; rounding of the order of
  // the slab size can put lo marginally below d.
  RadialCache(const Interval& iv, double d) : iv_(iv), d_(d) {
    if (iv_.lo < d_ && d_ - iv_.lo <= 1e-10 * iv_.hi) iv_.lo = d_;
  }
  double operator()(RadialKind k) {
    const int i = static_cast<int>(k);
    if (!have_[i]) {
      val_[i] = rad(k, iv_, d_);
      have_[i] = true;
    }
    return val_[i];
  }

 private:
  Interval iv_;
  double d_;
  std::array<double, 9> val_{};
  std::array<bool, 9> have_{};
};

// Integral over the slab of r * (r^n theta(r)) / rho^3 with theta = sign acos(d/r) + phi.
double k_theta(int n, const AngleBoundary& bd, RadialCache& rc) {
  double v = 0.0;
  if (n == 0) {
    if (bd.phi != 0.0) v += bd.phi * rc(RadialKind::R1);
    v += bd.sign * rc(RadialKind::R2);
  } else {
    if (bd.phi != 0.0) v += bd.phi * rc(RadialKind::R4);
    v += bd.sign * rc(RadialKind::R5);
  }
  return v;
}

double k_poly(const QPoly& p, double d, RadialCache& rc) {
  double v = 0.0;
  if (p[0] != 0.0) v += p[0] * rc(RadialKind::R1);
  if (p[1] != 0.0) v += p[1] * rc(RadialKind::R3);
  if (p[2] != 0.0) {
    v += p[2] * rc(RadialKind::R4);
    if (d != 0.0) v -= p[2] * d * d * rc(RadialKind::R1);
  }
  if (p[3] != 0.0) v += p[3] * rc(RadialKind::R6cubic);
  return v;
}

// Multiple of 2 pi that brings theta_end - theta_start into (0, 2 pi] mid-slab.
double branch_wrap(const AngularSegment& seg, double rm) {
  const double sweep = seg.end.theta(rm) - seg.start.theta(rm);
  return 2.0 * kPi * std::floor((2.0 * kPi - sweep) / (2.0 * kPi));
}

}  // namespace

int monomial_index(int a, int b) {
  const int n = a + b;
  return n * (n + 1) / 2 + b;
}

double BivariatePoly::operator()(double s1, double s2) const {
  double v = 0.0;
  for (int i = 0; i < 10; ++i)
    if (c[i] != 0.0) v += c[i] * std::pow(s1, kMonomials[i][0]) * std::pow(s2, kMonomials[i][1]);
  return v;
}

int BivariatePoly::degree() const {
  int deg = 0;
  for (int i = 0; i < 10; ++i)
    if (c[i] != 0.0) deg = std::max(deg, kMonomials[i][0] + kMonomials[i][1]);
  return deg;
}

BivariatePoly BivariatePoly::operator*(const BivariatePoly& o) const {
  BivariatePoly out;
  for (int i = 0; i < 10; ++i) {
    if (c[i] == 0.0) continue;
    for (int j = 0; j < 10; ++j) {
      if (o.c[j] == 0.0) continue;
      const int a = kMonomials[i][0] + kMonomials[j][0];
      const int b = kMonomials[i][1] + kMonomials[j][1];
      if (a + b > 3) throw DomainError("polynomial product exceeds degree 3");
      out.c[monomial_index(a, b)] += c[i] * o.c[j];
    }
  }
  return out;
}

BivariatePoly BivariatePoly::operator+(const BivariatePoly& o) const {
  BivariatePoly out;
  for (int i = 0; i < 10; ++i) out.c[i] = c[i] + o.c[i];
  return out;
}

BivariatePoly BivariatePoly::operator*(double k) const {
  BivariatePoly out;
  for (int i = 0; i < 10; ++i) out.c[i] = c[i] * k;
  return out;
}

PanelPolynomial PanelPolynomial::constant(double k) {
  PanelPolynomial p;
  p.a[0] = k;
  return p;
}

PanelPolynomial PanelPolynomial::vertex_basis(int i) {
  PanelPolynomial p;
  if (i == 0) {
    p.a = {1.0, -1.0, -1.0, 0.0, 0.0, 0.0};
  } else if (i == 1) {
    p.a[1] = 1.0;
  } else {
    p.a[2] = 1.0;
  }
  return p;
}

PanelPolynomial PanelPolynomial::vertex_values(double g1, double g2, double g3) {
  PanelPolynomial p;
  p.a[0] = g1;
  p.a[1] = g2 - g1;
  p.a[2] = g3 - g1;
  return p;
}

PanelPolynomial PanelPolynomial::world_affine(const Panel& panel, double g0, const Vec3& g) {
  return vertex_values(g0 + g.dot(panel.v1), g0 + g.dot(panel.v2), g0 + g.dot(panel.v3));
}

int PanelPolynomial::degree() const {
  if (a[3] != 0.0 || a[4] != 0.0 || a[5] != 0.0) return 2;
  if (a[1] != 0.0 || a[2] != 0.0) return 1;
  return 0;
}

double PanelPolynomial::operator()(double u, double v) const {
  return a[0] + a[1] * u + a[2] * v + a[3] * u * u + a[4] * u * v + a[5] * v * v;
}

PanelPolynomial PanelPolynomial::operator+(const PanelPolynomial& o) const {
  PanelPolynomial out;
  for (int i = 0; i < 6; ++i) out.a[i] = a[i] + o.a[i];
  return out;
}

PanelPolynomial PanelPolynomial::operator*(double k) const {
  PanelPolynomial out;
  for (int i = 0; i < 6; ++i) out.a[i] = a[i] * k;
  return out;
}

BivariatePoly PanelPolynomial::to_planar(const Vec2& q1, const Vec2& q2, const Vec2& q3) const {
  Mat2 A;
  A.col(0) = q2 - q1;
  A.col(1) = q3 - q1;
  const Mat2 Ai = A.inverse();
  const Vec2 off = -Ai * q1;
  BivariatePoly u, v, one;
  one.c[0] = 1.0;
  u.c[0] = off.x();
  u.c[1] = Ai(0, 0);
  u.c[2] = Ai(0, 1);
  v.c[0] = off.y();
  v.c[1] = Ai(1, 0);
  v.c[2] = Ai(1, 1);
  BivariatePoly out = one * a[0] + u * a[1] + v * a[2];
  if (degree() == 2) out = out + (u * u) * a[3] + (u * v) * a[4] + (v * v) * a[5];
  return out;
}

MomentSet compute_k_moments(const PolarDecomposition& dec, double c, int max_degree,
                            int min_degree) {
  MomentSet m;
  c = std::abs(c);
  for (const PolarSlab& slab : dec.slabs) {
    const Interval iv{slab.r_lo, slab.r_hi, c};
    RadialCache centred(iv, 0.0);
    auto theta_radial = [&](int n) { return centred(n == 0 ? RadialKind::R1 : RadialKind::R4); };
    if (slab.full_circle) {
      for (int idx = 0; idx < 10; ++idx) {
        const int a = kMonomials[idx][0], b = kMonomials[idx][1], n = a + b;
        if (n < min_degree || n > max_degree) continue;
        if (n == 0) m.k[idx] += 2.0 * kPi * theta_radial(0);
        else if (n == 2 && a != 1) m.k[idx] += kPi * theta_radial(2);
      }
      continue;
    }
    const double rm = 0.5 * (slab.r_lo + slab.r_hi);
    for (const AngularSegment& seg : slab.segments) {
      for (int e = 0; e < 2; ++e) {
        const AngleBoundary& bd = e == 0 ? seg.end : seg.start;
        const double sgn = e == 0 ? 1.0 : -1.0;
        const double cp = std::cos(bd.phi), sp = std::sin(bd.phi);
        RadialCache rc(iv, bd.d);
        for (int idx = 0; idx < 10; ++idx) {
          const int a = kMonomials[idx][0], b = kMonomials[idx][1], n = a + b;
          if (n < min_degree || n > max_degree) continue;
          const AngularTerm t = angular_term(a, b, bd, cp, sp);
          double v = k_poly(t.poly, bd.d, rc);
          if (t.theta_coef != 0.0) v += t.theta_coef * k_theta(n, bd, rc);
          m.k[idx] += sgn * v;
        }
      }
      const double w = branch_wrap(seg, rm);
      if (w == 0.0) continue;
      for (int idx = 0; idx < 10; ++idx) {
        const int a = kMonomials[idx][0], b = kMonomials[idx][1], n = a + b;
        if (n < min_degree || n > max_degree) continue;
        if (n == 0) m.k[idx] += w * theta_radial(0);
        else if (n == 2 && a != 1) m.k[idx] += w * 0.5 * theta_radial(2);
      }
    }
  }
  return m;
}

MomentSet compute_g_moments(const PolarDecomposition& dec, double c) {
  MomentSet m;
  c = std::abs(c);
  for (const PolarSlab& slab : dec.slabs) {
    const Interval iv{slab.r_lo, slab.r_hi, c};
    if (slab.full_circle) {
      m.j0 += 2.0 * kPi * rad(RadialKind::J1, iv, 0.0);
      continue;
    }
    const double rm = 0.5 * (slab.r_lo + slab.r_hi);
    for (const AngularSegment& seg : slab.segments) {
      for (int e = 0; e < 2; ++e) {
        const AngleBoundary& bd = e == 0 ? seg.end : seg.start;
        const double sgn = e == 0 ? 1.0 : -1.0;
        const double cp = std::cos(bd.phi), sp = std::sin(bd.phi);
        RadialCache rc(iv, bd.d);
        double j0 = bd.sign * rc(RadialKind::J2);
        if (bd.phi != 0.0) j0 += bd.phi * rc(RadialKind::J1);
        // r * sin(theta) = d sin(phi) + s cos(phi) q, -r * cos(theta) likewise.
        const double j1 = bd.d != 0.0 ? rc(RadialKind::J1) : 0.0;
        const double j3 = rc(RadialKind::J3);
        const double jx = bd.d * sp * j1 + bd.sign * cp * j3;
        const double jy = -(bd.d * cp * j1 - bd.sign * sp * j3);
        m.j0 += sgn * j0;
        m.jx += sgn * jx;
        m.jy += sgn * jy;
      }
      const double w = branch_wrap(seg, rm);
      if (w != 0.0) m.j0 += w * rad(RadialKind::J1, iv, 0.0);
    }
  }
  return m;
}

double contract_k(const MomentSet& m, const BivariatePoly& poly) {
  double v = 0.0;
  for (int i = 0; i < 10; ++i)
    if (poly.c[i] != 0.0) v += poly.c[i] * m.k[i];
  return v;
}

namespace {

BivariatePoly k_numerator(const NormalizedFrame& f) {
  BivariatePoly num;
  const Vec3& n = f.rotated_target_normal;
  num.c[0] = f.c * n.z();
  num.c[1] = -n.x();
  num.c[2] = -n.y();
  return num;
}

double clamp_c(double c) { return std::abs(c) < kRadialClamp ? 0.0 : c; }

void check_k_divergence(const NormalizedFrame& f) {
  if (clamp_c(f.c) == 0.0 && point_in_triangle(Vec2::Zero(), f.planar_triangle))
    throw DivergentIntegral(
        "K-kernel panel integral diverges: target lies on the flat panel (use QSA)");
}

}  // namespace

double integrate_k_panel(const Panel& panel, const Target& target, const PanelPolynomial& p) {
  const NormalizedFrame f = normalize_frame(panel, target);
  check_k_divergence(f);
  const BivariatePoly poly = k_numerator(f) * p.to_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
  const PolarDecomposition dec = decompose_polar(f.planar_triangle);
  const MomentSet m = compute_k_moments(dec, f.c, poly.degree());
  return contract_k(m, poly) / kFourPi;
}

std::array<double, 3> integrate_k_panel_basis(const Panel& panel, const Target& target) {
  const NormalizedFrame f = normalize_frame(panel, target);
  check_k_divergence(f);
  const PolarDecomposition dec = decompose_polar(f.planar_triangle);
  const MomentSet m = compute_k_moments(dec, f.c, 2);
  const BivariatePoly num = k_numerator(f);
  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i) {
    const BivariatePoly poly =
        num * PanelPolynomial::vertex_basis(i).to_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
    out[i] = contract_k(m, poly) / kFourPi;
  }
  return out;
}

double integrate_g_panel(const Panel& panel, const Target& target, const PanelPolynomial& p) {
  if (p.degree() > 1) throw DomainError("G-kernel panel integrals support degree <= 1");
  const NormalizedFrame f = normalize_frame(panel, target);
  const BivariatePoly poly = p.to_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
  const MomentSet m = compute_g_moments(decompose_polar(f.planar_triangle), f.c);
  return -(poly.c[0] * m.j0 + poly.c[1] * m.jx + poly.c[2] * m.jy) / kFourPi;
}

std::array<double, 3> integrate_g_panel_basis(const Panel& panel, const Target& target) {
  const NormalizedFrame f = normalize_frame(panel, target);
  const MomentSet m = compute_g_moments(decompose_polar(f.planar_triangle), f.c);
  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i) {
    const BivariatePoly poly =
        PanelPolynomial::vertex_basis(i).to_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
    out[i] = -(poly.c[0] * m.j0 + poly.c[1] * m.jx + poly.c[2] * m.jy) / kFourPi;
  }
  return out;
}

std::array<Vec3, 3> integrate_grad_g_panel_basis(const Panel& panel, const Vec3& x) {
  const NormalizedFrame f = normalize_frame(panel, Target{x, panel.normal});
  check_k_divergence(f);
  const MomentSet m = compute_k_moments(decompose_polar(f.planar_triangle), f.c, 2);
  std::array<Vec3, 3> out;
  for (int i = 0; i < 3; ++i) {
    const BivariatePoly phi =
        PanelPolynomial::vertex_basis(i).to_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
    BivariatePoly s1, s2;
    s1.c[1] = 1.0;
    s2.c[2] = 1.0;
    const Vec3 local(-contract_k(m, s1 * phi), -contract_k(m, s2 * phi), f.c * contract_k(m, phi));
    out[i] = f.rotation.transpose() * local / kFourPi;
  }
  return out;
}

}  // namespace panelint
