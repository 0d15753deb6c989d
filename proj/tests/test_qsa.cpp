#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "panelint/oracle.hpp"
#include "panelint/qsa.hpp"

using namespace panelint;

namespace {

double angular_integrand(int a, int b, double t, double t2) {
  return std::pow(std::cos(t), a) * std::pow(std::sin(t), b) / std::pow(std::sin(t + t2), a + b - 1);
}

// Panel with vertices on the unit sphere near `pole`, diameter about `size`.
Panel sphere_panel(std::mt19937_64& rng, const Vec3& pole, double size) {
  std::uniform_real_distribution<double> U(-1, 1);
  const Vec3 u = pole.unitOrthogonal(), w = pole.cross(u);
  for (;;) {
    Vec3 v[3];
    v[0] = pole;
    for (int i = 1; i < 3; ++i) v[i] = (pole + size * (U(rng) * u + U(rng) * w)).normalized();
    if ((v[1] - v[0]).cross(v[2] - v[0]).dot(pole) < 0) std::swap(v[1], v[2]);
    const Panel p = Panel::from_vertices(v[0], v[1], v[2]);
    if (p.area() > 0.05 * size * size) return p;
  }
}

// K over the spherical patch above the panel, target at the patch point over vertex 0.
double curved_oracle(const Panel& p, const Vec3& x, const Vec3& n, int corner = -1) {
  const Chart ch = sphere_chart(p.v1, p.v2, p.v3);
  OracleOptions o;
  o.rel_tol = 1e-11;
  o.abs_tol = 0;
  o.singular_corner = corner;
  const Vec3 off = x - ch.anchor;
  return adaptive_patch_local(
             [&](const Vec3& dy) {
               const Vec3 d = off - dy;
               return d.dot(n) / (kFourPi * std::pow(d.norm(), 3));
             },
             ch, o)
      .value;
}

}  // namespace

TEST_CASE("vertex angular primitives differentiate to their integrands") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> T2(0.2, 2.5);
  const int pairs[7][2] = {{2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
  for (const auto& ab : pairs)
    for (int i = 0; i < 100; ++i) {
      const double t2 = T2(rng);
      const double t = std::uniform_real_distribution<double>(0.05, kPi - t2 - 0.05)(rng);
      const double h = 1e-5;
      const double fd = (vertex_angular_primitive(ab[0], ab[1], t + h, t2) -
                         vertex_angular_primitive(ab[0], ab[1], t - h, t2)) /
                        (2 * h);
      const double f = angular_integrand(ab[0], ab[1], t, t2);
      CHECK_MESSAGE(std::abs(fd - f) < 1e-6 * std::max(1.0, std::abs(f)), ab[0] << "," << ab[1]);
    }
  CHECK(vertex_angular_primitive(2, 1, 0.7, 0.9) - vertex_angular_primitive(2, 1, 0.7, 0.9) == 0.0);
  CHECK_THROWS_AS(vertex_angular_primitive(1, 0, 0.3, 0.4), DomainError);
}

TEST_CASE("vertex angular primitives against quadrature") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const int pairs[7][2] = {{2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
  for (const auto& ab : pairs) {
    const double t2 = 0.8, t1 = 1.9;
    const double q = ts.integrate([&](double t) { return angular_integrand(ab[0], ab[1], t, t2); }, 0.0, t1);
    const double v = vertex_angular_primitive(ab[0], ab[1], t1, t2) -
                     vertex_angular_primitive(ab[0], ab[1], 0.0, t2);
    CHECK(std::abs(v - q) < 1e-10 * std::max(1.0, std::abs(q)));
  }
}

TEST_CASE("flat form gives zero on the boundary") {
  const Panel p = Panel::from_vertices(Vec3(0, 0, 0), Vec3(1, 0.1, 0.2), Vec3(0.2, 1, -0.1));
  FundamentalForm zero;
  zero.k11 = zero.k12 = zero.k22 = 0;
  CHECK(qsa_on_boundary(p, Target{p.v1, p.normal}, zero, PanelPolynomial::constant(1)) == 0.0);
  CHECK(qsa_on_boundary(p, Target{p.centroid(), p.normal}, zero, PanelPolynomial::constant(1)) == 0.0);
}

TEST_CASE("vertex path agrees with the general path") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const Vec3 pole = Vec3(U(rng), U(rng), U(rng)).normalized();
    const Panel p = sphere_panel(rng, pole, std::pow(10.0, -3 + 2 * (U(rng) + 1) / 2));
    const FundamentalForm f = probe_fundamental_form(sphere_probe(), pole);
    const Target t{pole, pole};
    const auto poly = PanelPolynomial::vertex_values(U(rng), U(rng), U(rng));
    const double a = qsa_vertex(p, t, f, poly), b = qsa_on_boundary_general(p, t, f, poly);
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
    CHECK(qsa_on_boundary(p, t, f, poly) == a);
  }
  const Panel p = Panel::from_vertices(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
  CHECK_THROWS_AS(qsa_vertex(p, Target{Vec3(0.2, 0.2, 0), Vec3::UnitZ()}, FundamentalForm{},
                             PanelPolynomial::constant(1)),
                  DomainError);
}

TEST_CASE("vertex QSA converges to the curved patch integral") {
  std::mt19937_64 rng(19);
  const FundamentalForm f = probe_fundamental_form(sphere_probe(), Vec3::UnitZ());
  double err_big = 0, err_small = 0;
  for (int i = 0; i < 10; ++i) {
    for (double size : {1e-1, 1e-2}) {
      const Panel p = sphere_panel(rng, Vec3::UnitZ(), size);
      const double exact = curved_oracle(p, p.v1, p.v1, 0);
      const double q = qsa_vertex(p, Target{p.v1, p.v1}, f, PanelPolynomial::constant(1));
      const double e = std::abs(q - exact);
      CHECK(e < std::abs(exact));
      (size > 0.05 ? err_big : err_small) = std::max(size > 0.05 ? err_big : err_small, e);
    }
  }
  // Absolute error of order diam^3 (the integral itself is of order diam).
  const double slope = std::log10(err_big / err_small);
  CHECK(slope > 2.0);
  CHECK(slope < 4.0);
}

TEST_CASE("off-boundary QSA with a flat form reduces to the flat integral") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const Panel p = Panel::from_vertices(Vec3(U(rng), U(rng), U(rng)), Vec3(U(rng), U(rng), U(rng)),
                                         Vec3(U(rng), U(rng), U(rng)));
    if (p.area() < 0.05) continue;
    const Vec3 foot = p.centroid() + 0.2 * Vec3(U(rng), U(rng), U(rng));
    const Vec3 fn = (p.normal + 0.3 * Vec3(U(rng), U(rng), U(rng))).normalized();
    const Target t{foot + 0.05 * fn, Vec3(U(rng), U(rng), U(rng)).normalized()};
    FundamentalForm zero;
    zero.k11 = zero.k12 = zero.k22 = 0;
    // Panel projected onto the tangent plane at the foot; vertex values carry over.
    auto proj = [&](const Vec3& v) { return Vec3(v - fn * fn.dot(v - foot)); };
    const Panel pp = Panel::from_vertices(proj(p.v1), proj(p.v2), proj(p.v3));
    const auto poly = PanelPolynomial::vertex_values(U(rng), U(rng), U(rng));
    const double a = qsa_off_boundary(p, t, foot, fn, zero, poly);
    const double b = integrate_k_panel(pp, t, poly);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(b), 1e-3));
  }
}

TEST_CASE("off-boundary QSA near a sphere patch") {
  // At fixed h = 1e-3 the panel is larger than h and the error does not shrink
  // cleanly with diam; QSA must still beat the flat integral by a wide margin.
  std::mt19937_64 rng(37);
  const Vec3 n(0, 0, 1);
  const FundamentalForm f = probe_fundamental_form(sphere_probe(), n);
  for (double size : {4e-2, 2e-2, 1e-2}) {
    double wq = 0, wf = 0;
    for (int i = 0; i < 5; ++i) {
      const Panel p = sphere_panel(rng, Vec3(0.3 * size, 0.2 * size, 1).normalized(), size);
      for (double h : {1e-3, -1e-3}) {
        const Vec3 x = (1 + h) * n;
        const Target t{x, n};
        const double exact = curved_oracle(p, x, n);
        const double q = qsa_off_boundary(p, t, n, n, f, PanelPolynomial::constant(1));
        CHECK(std::abs(q - exact) < 2e-3 * std::max(std::abs(exact), 0.1));
        wq = std::max(wq, std::abs(q - exact));
        wf = std::max(wf, std::abs(integrate_k_panel(p, t, PanelPolynomial::constant(1)) - exact));
      }
    }
    CHECK(5 * wq < wf);
  }
}

TEST_CASE("foot points") {
  FootPoint s = foot_point(sphere_probe(), Vec3(0, 0, 1.5));
  CHECK((s.foot - Vec3(0, 0, 1)).norm() < 1e-14);
  CHECK(s.c == doctest::Approx(0.5));
  FootPoint pl = foot_point(plane_probe(Vec3(0, 0, 1), 0), Vec3(3, 4, -2));
  CHECK((pl.foot - Vec3(3, 4, 0)).norm() < 1e-14);
  CHECK(pl.c == doctest::Approx(-2));
  const SdfProbe tor = torus_probe(0.4, 0.2);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0, 2 * kPi), H(-0.05, 0.05);
  for (int i = 0; i < 50; ++i) {
    const double u = U(rng), v = U(rng);
    const Vec3 x((0.4 + (0.2 + H(rng)) * std::cos(v)) * std::cos(u),
                 (0.4 + (0.2 + H(rng)) * std::cos(v)) * std::sin(u), (0.2 + H(rng)) * std::sin(v));
    const FootPoint fp = foot_point(tor, x);
    CHECK(std::abs(tor.value(fp.foot)) < 1e-10);
    CHECK((x - fp.foot).cross(fp.normal).norm() < 1e-9);
  }
}

TEST_CASE("densities above degree one are rejected") {
  const Panel p = Panel::from_vertices(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
  PanelPolynomial q;
  q.a[3] = 1;
  CHECK_THROWS_AS(qsa_on_boundary(p, Target{p.v1, p.normal}, FundamentalForm{}, q), DomainError);
}
