#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "panelint/geometry.hpp"

using namespace panelint;

namespace {

PlanarTriangle reference_triangle() { return orient_planar(Vec2(0, 2), Vec2(-2, -1), Vec2(3, 0)); }

double sweep(const AngularSegment& s, double r, double rm) {
  const double w0 = s.end.theta(rm) - s.start.theta(rm);
  const double wrap = 2 * M_PI * std::floor((2 * M_PI - w0) / (2 * M_PI));
  return s.end.theta(r) - s.start.theta(r) + wrap;
}

double polar_area(const PolarDecomposition& dec) {
  using boost::math::quadrature::gauss_kronrod;
  double a = 0;
  for (const PolarSlab& sl : dec.slabs) {
    const double rm = 0.5 * (sl.r_lo + sl.r_hi);
    auto f = [&](double r) {
      if (sl.full_circle) return 2 * M_PI * r;
      double s = 0;
      for (const auto& seg : sl.segments) s += sweep(seg, r, rm);
      return s * r;
    };
    a += gauss_kronrod<double, 61>::integrate(f, sl.r_lo, sl.r_hi, 10, 1e-14);
  }
  return a;
}

Vec2 rot(const Vec2& p, double a) {
  return Vec2(std::cos(a) * p.x() - std::sin(a) * p.y(), std::sin(a) * p.x() + std::cos(a) * p.y());
}

}  // namespace

TEST_CASE("normalize_frame identity case") {
  const Panel p = Panel::from_vertices(Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(-1, -1, 0));
  const NormalizedFrame f = normalize_frame(p, Target{Vec3(0, 0, 1), Vec3(0, 0, 1)});
  CHECK((f.rotation - Mat3::Identity()).norm() < 1e-15);
  CHECK(f.c == doctest::Approx(1.0));
}

TEST_CASE("normalize_frame preserves distances and maps the target to the z axis") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (int i = 0; i < 200; ++i) {
    const Vec3 a(N(rng), N(rng), N(rng)), b(N(rng), N(rng), N(rng)), c(N(rng), N(rng), N(rng));
    const Panel p = Panel::from_vertices(a, b, c);
    const Target t{Vec3(N(rng), N(rng), N(rng)), Vec3(N(rng), N(rng), N(rng)).normalized()};
    const NormalizedFrame f = normalize_frame(p, t);
    CHECK((f.rotation * f.rotation.transpose() - Mat3::Identity()).norm() < 1e-12);
    CHECK((f.rotation * p.normal - Vec3::UnitZ()).norm() < 1e-12);
    const Vec3 xt = f.to_frame(t.x);
    CHECK((xt - Vec3(0, 0, f.c)).norm() < 1e-12);
    for (int k = 0; k < 3; ++k) {
      const Vec3 y = f.to_frame(p.vertex(k));
      CHECK(std::abs(y.z()) < 1e-12);
      CHECK((y - xt).norm() == doctest::Approx((p.vertex(k) - t.x).norm()).epsilon(1e-12));
    }
  }
}

TEST_CASE("anti-parallel normal") {
  const Panel p = Panel::from_vertices(Vec3(0, 0, 0), Vec3(0, 1, 0), Vec3(1, 0, 0));
  CHECK((p.normal - Vec3(0, 0, -1)).norm() < 1e-15);
  const Mat3 R = rotation_to_z(p.normal);
  CHECK((R * p.normal - Vec3::UnitZ()).norm() < 1e-12);
  CHECK((R * R.transpose() - Mat3::Identity()).norm() < 1e-12);
  CHECK(R.determinant() == doctest::Approx(1.0));
}

TEST_CASE("orient_planar") {
  const PlanarTriangle t = reference_triangle();
  CHECK(t.p1 == Vec2(0, 2));
  CHECK(t.p2 == Vec2(-2, -1));
  CHECK(t.p3 == Vec2(3, 0));
  const PlanarTriangle cw = orient_planar(Vec2(1, 0), Vec2(1, 1), Vec2(2, 0));
  CHECK(cw.signed_area() > 0);
  const PlanarTriangle tie = orient_planar(Vec2(3, 1), Vec2(1, 0), Vec2(0, 1));
  CHECK(tie.p1 == Vec2(1, 0));
  CHECK(tie.perm[0] == 1);
  CHECK_THROWS_AS(orient_planar(Vec2(0, 0), Vec2(1, 1), Vec2(2, 2)), DomainError);
}

TEST_CASE("edge geometry") {
  const auto e = edge_geometry(reference_triangle());
  CHECK(e[1].d == doctest::Approx(0.5883484054145521));
  CHECK(e[1].foot.x() == doctest::Approx(0.1153846).epsilon(1e-6));
  CHECK(e[1].foot.y() == doctest::Approx(-0.5769231).epsilon(1e-6));
  CHECK(e[1].foot_on_edge);

  const auto x = edge_geometry(orient_planar(Vec2(1, 0), Vec2(2, 0), Vec2(1.5, 1)));
  CHECK(x[0].d == 0.0);
  CHECK(std::abs(std::abs(x[0].phi) - M_PI / 2) < 1e-15);

  const PlanarTriangle rt = orient_planar(Vec2(0, 1), Vec2(1, 0), Vec2(1, 1));
  const auto r = edge_geometry(rt);
  int k = -1;
  for (int i = 0; i < 3; ++i)
    if (std::abs(r[i].d - std::sqrt(0.5)) < 1e-14) k = i;
  REQUIRE(k >= 0);
  CHECK((r[k].foot - Vec2(0.5, 0.5)).norm() < 1e-15);
  CHECK(r[k].foot_on_edge);

  // The stored sign reproduces the angle of the edge's first vertex.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const PlanarTriangle t = orient_planar(Vec2(U(rng), U(rng)), Vec2(U(rng), U(rng)), Vec2(U(rng), U(rng)));
    const auto g = edge_geometry(t);
    for (int j = 0; j < 3; ++j) {
      const Vec2& v = t.vertex(j);
      const AngleBoundary b{g[j].sign_toward_first_vertex, g[j].d, g[j].phi};
      const double th = b.theta(v.norm());
      CHECK((v.norm() * Vec2(std::cos(th), std::sin(th)) - v).norm() < 1e-9);
    }
  }
}

TEST_CASE("critical radii") {
  const auto r = critical_radii(reference_triangle());
  const double expect[] = {0.5883, 1.1094, 1.6641, 2.0, 2.2361, 3.0};
  REQUIRE(r.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(r[i] == doctest::Approx(expect[i]).epsilon(1e-4));

  const PlanarTriangle eq = orient_planar(Vec2(1, 0), rot(Vec2(1, 0), 2 * M_PI / 3), rot(Vec2(1, 0), 4 * M_PI / 3));
  CHECK(critical_radii(eq).size() == 2);

  // Obtuse triangle: the foot of the line through the long side's neighbours lies off the edge.
  const PlanarTriangle ob = orient_planar(Vec2(1, 0), Vec2(3, 0.2), Vec2(4, 0.1));
  CHECK(critical_radii(ob).size() == 3);
}

TEST_CASE("point_in_triangle") {
  const PlanarTriangle t = reference_triangle();
  const Vec2 g = (t.p1 + t.p2 + t.p3) / 3;
  CHECK(point_in_triangle(g, t));
  CHECK(point_in_triangle(t.p2, t));
  const Vec2 m = 0.5 * (t.p2 + t.p3);
  CHECK_FALSE(point_in_triangle(2 * m - g, t));
}

TEST_CASE("reference triangle activity sequence and area") {
  using A = EdgeActivity;
  const auto seq = activity_sequence(reference_triangle());
  const std::vector<std::array<A, 3>> expect = {
      {A::Inactive, A::Inactive, A::Inactive}, {A::Inactive, A::Split, A::Inactive},
      {A::Split, A::Split, A::Inactive},       {A::Split, A::Split, A::Split},
      {A::Active, A::Split, A::Active},        {A::Inactive, A::Active, A::Active},
      {A::Inactive, A::Inactive, A::Inactive}};
  CHECK(seq == expect);
  CHECK(polar_area(decompose_polar(reference_triangle())) == doctest::Approx(6.5).epsilon(1e-10));
}

TEST_CASE("origin inside gives a full circle first slab") {
  const PlanarTriangle t = orient_planar(Vec2(1, 0.2), Vec2(-1, 1), Vec2(-0.5, -1));
  const auto dec = decompose_polar(t);
  REQUIRE(!dec.slabs.empty());
  CHECK(dec.slabs[0].r_lo == 0.0);
  CHECK(dec.slabs[0].full_circle);
}

TEST_CASE("area oracle and slab invariants on random triangles") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 300; ++i) {
    PlanarTriangle t = orient_planar(Vec2(U(rng), U(rng)), Vec2(U(rng), U(rng)), Vec2(U(rng), U(rng)));
    if (std::abs(t.signed_area()) < 1e-3) continue;
    const auto dec = decompose_polar(t);
    CHECK(polar_area(dec) == doctest::Approx(t.signed_area()).epsilon(1e-10));
    for (size_t s = 1; s < dec.slabs.size(); ++s) CHECK(dec.slabs[s].r_lo == dec.slabs[s - 1].r_hi);
    for (const auto& sl : dec.slabs) {
      if (sl.full_circle) continue;
      for (int j = 1; j <= 10; ++j) {
        const double r = sl.r_lo + (sl.r_hi - sl.r_lo) * j / 11.0;
        const double rm = 0.5 * (sl.r_lo + sl.r_hi);
        for (const auto& seg : sl.segments) {
          const double a = seg.start.theta(r);
          const double w = sweep(seg, r, rm);
          const double mid = a + 0.5 * w;
          CHECK(point_in_triangle(r * Vec2(std::cos(mid), std::sin(mid)), t, 1e-10));
          const double eps = 1e-6;
          if (w > 4 * eps && w < 2 * M_PI - 4 * eps) {
            CHECK_FALSE(point_in_triangle(r * Vec2(std::cos(a - eps), std::sin(a - eps)), t, 1e-10));
            CHECK_FALSE(point_in_triangle(r * Vec2(std::cos(a + w + eps), std::sin(a + w + eps)), t, 1e-10));
          }
        }
      }
    }
  }
}

TEST_CASE("rotation about the origin leaves slabs unchanged") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 50; ++i) {
    const Vec2 a(U(rng), U(rng)), b(U(rng), U(rng)), c(U(rng), U(rng));
    const double ang = U(rng);
    const auto d1 = decompose_polar(orient_planar(a, b, c));
    const auto d2 = decompose_polar(orient_planar(rot(a, ang), rot(b, ang), rot(c, ang)));
    REQUIRE(d1.slabs.size() == d2.slabs.size());
    for (size_t s = 0; s < d1.slabs.size(); ++s) {
      CHECK(std::abs(d1.slabs[s].r_lo - d2.slabs[s].r_lo) < 1e-12);
      CHECK(std::abs(d1.slabs[s].r_hi - d2.slabs[s].r_hi) < 1e-12);
      const double rm = 0.5 * (d1.slabs[s].r_lo + d1.slabs[s].r_hi);
      double w1 = 0, w2 = 0;
      for (const auto& g : d1.slabs[s].segments) w1 += sweep(g, rm, rm);
      for (const auto& g : d2.slabs[s].segments) w2 += sweep(g, rm, rm);
      CHECK(std::abs(w1 - w2) < 1e-12);
    }
  }
}
