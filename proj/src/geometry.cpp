#include "panelint/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace panelint {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double wrap_2pi(double t) {
  t = std::fmod(t, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

struct Crossing {
  double theta;
  AngleBoundary b;
  bool start;
};

// Crossings of the circle of radius r with the triangle edges.
std::array<EdgeActivity, 3> crossings_at(const std::array<EdgeGeometry, 3>& edges, double r,
                                         std::vector<Crossing>* out) {
  std::array<EdgeActivity, 3> act{};
  for (int k = 0; k < 3; ++k) {
    const EdgeGeometry& e = edges[k];
    int count = 0;
    if (r > e.d) {
      const double q = std::sqrt(r * r - e.d * e.d);
      for (int s : {1, -1}) {
        const double t = s * q;
        if (t < e.t_a || t > e.t_b) continue;
        ++count;
        if (out) {
          AngleBoundary b{s, e.d, e.phi};
          out->push_back({wrap_2pi(b.theta(r)), b, s == e.start_sign});
        }
      }
    }
    act[k] = count == 0 ? EdgeActivity::Inactive
                        : (count == 1 ? EdgeActivity::Active : EdgeActivity::Split);
  }
  return act;
}

}  // namespace

Panel Panel::from_vertices(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double len = n.norm();
  const double scale = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), (c - b).squaredNorm()});
  if (!(len > 1e-15 * scale) || !std::isfinite(len)) throw DomainError("degenerate panel");
  return Panel{a, b, c, n / len};
}

double Panel::area() const { return 0.5 * (v2 - v1).cross(v3 - v1).norm(); }

double Panel::diameter() const {
  return std::max({(v2 - v1).norm(), (v3 - v1).norm(), (v3 - v2).norm()});
}

double PlanarTriangle::signed_area() const { return 0.5 * cross2(p2 - p1, p3 - p1); }

double AngleBoundary::theta(double r) const {
  double x = d / r;
  x = std::min(1.0, std::max(-1.0, x));
  return sign * std::acos(x) + phi;
}

Mat3 rotation_to_z(const Vec3& n_in) {
  const Vec3 n = n_in.normalized();
  Mat3 flip = Mat3::Identity();
  Vec3 m = n;
  if (n.z() < 0.0) {
    flip.diagonal() << 1.0, -1.0, -1.0;
    m = flip * n;
  }
  const Vec3 v(m.y(), -m.x(), 0.0);  // m x e_z
  Mat3 vx;
  vx << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  const Mat3 rod = Mat3::Identity() + vx + vx * vx / (1.0 + m.z());
  return rod * flip;
}

NormalizedFrame normalize_frame(const Panel& panel, const Target& target) {
  NormalizedFrame f;
  f.rotation = rotation_to_z(panel.normal);
  f.c = panel.normal.dot(target.x - panel.v1);
  f.translation = -f.rotation * target.x + Vec3(0.0, 0.0, f.c);
  for (int i = 0; i < 3; ++i) {
    const Vec3 y = f.rotation * (panel.vertex(i) - target.x);
    f.mapped[i] = Vec2(y.x(), y.y());
  }
  f.planar_triangle = orient_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
  f.rotated_target_normal = f.rotation * target.n;
  return f;
}

NormalizedFrame projected_frame(const Panel& panel, const Vec3& origin, const Vec3& up) {
  NormalizedFrame f;
  f.rotation = rotation_to_z(up);
  f.c = 0.0;
  f.translation = -f.rotation * origin;
  for (int i = 0; i < 3; ++i) {
    const Vec3 y = f.rotation * (panel.vertex(i) - origin);
    f.mapped[i] = Vec2(y.x(), y.y());
  }
  f.planar_triangle = orient_planar(f.mapped[0], f.mapped[1], f.mapped[2]);
  f.rotated_target_normal = Vec3::UnitZ();
  return f;
}

PlanarTriangle orient_planar(const Vec2& p1, const Vec2& p2, const Vec2& p3) {
  const std::array<Vec2, 3> p{p1, p2, p3};
  const double a = cross2(p2 - p1, p3 - p1);
  const double scale =
      std::max({(p2 - p1).squaredNorm(), (p3 - p1).squaredNorm(), (p3 - p2).squaredNorm()});
  if (!(std::abs(a) > 1e-15 * scale)) throw DomainError("degenerate planar triangle");

  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (p[i].squaredNorm() < p[k].squaredNorm()) k = i;

  std::array<int, 3> order;
  if (a > 0.0)
    order = {k, (k + 1) % 3, (k + 2) % 3};
  else
    order = {k, (k + 2) % 3, (k + 1) % 3};

  PlanarTriangle t;
  t.p1 = p[order[0]];
  t.p2 = p[order[1]];
  t.p3 = p[order[2]];
  t.perm = order;
  return t;
}

std::array<EdgeGeometry, 3> edge_geometry(const PlanarTriangle& tri) {
  std::array<EdgeGeometry, 3> out;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = tri.vertex(k);
    const Vec2& b = tri.vertex((k + 1) % 3);
    const Vec2 e = b - a;
    const Vec2 o = Vec2(e.y(), -e.x()) / e.norm();
    double h = o.dot(a);  // signed distance of the line, positive when the origin is inside
    EdgeGeometry g;
    if (std::abs(h) < 1e-14) h = 0.0;
    g.d = std::abs(h);
    g.foot = h * o;
    g.phi = g.d > 0.0 ? std::atan2(g.foot.y(), g.foot.x()) : std::atan2(o.y(), o.x());
    g.start_sign = h >= 0.0 ? 1 : -1;
    const Vec2 u(-std::sin(g.phi), std::cos(g.phi));
    const double ta = (a - g.foot).dot(u);
    const double tb = (b - g.foot).dot(u);
    g.t_a = std::min(ta, tb);
    g.t_b = std::max(ta, tb);
    g.foot_on_edge = g.t_a <= 0.0 && g.t_b >= 0.0;
    g.sign_toward_first_vertex = ta >= 0.0 ? 1 : -1;
    out[k] = g;
  }
  return out;
}

namespace {

// Sorted distinct critical radii; at most six.
struct RadiusList {
  std::array<double, 6> r{};
  int n = 0;
};

RadiusList radii_from(const PlanarTriangle& tri, const std::array<EdgeGeometry, 3>& edges) {
  RadiusList raw;
  for (int i = 0; i < 3; ++i) raw.r[raw.n++] = tri.vertex(i).norm();
  for (const EdgeGeometry& e : edges)
    if (e.foot_on_edge) raw.r[raw.n++] = e.d;
  std::sort(raw.r.begin(), raw.r.begin() + raw.n);
  const double tol = 1e-12 * raw.r[raw.n - 1];
  RadiusList out;
  for (int i = 0; i < raw.n; ++i)
    if (out.n == 0 || raw.r[i] - out.r[out.n - 1] > tol) out.r[out.n++] = raw.r[i];
  return out;
}

}  // namespace

std::vector<double> critical_radii(const PlanarTriangle& tri) {
  const RadiusList l = radii_from(tri, edge_geometry(tri));
  return std::vector<double>(l.r.begin(), l.r.begin() + l.n);
}

bool point_in_triangle(const Vec2& p, const PlanarTriangle& t, double tol) {
  const double a = cross2(t.p2 - t.p1, t.p3 - t.p1);
  const double l1 = cross2(t.p2 - p, t.p3 - p) / a;
  const double l2 = cross2(t.p3 - p, t.p1 - p) / a;
  const double l3 = 1.0 - l1 - l2;
  return l1 >= -tol && l2 >= -tol && l3 >= -tol;
}

PolarDecomposition decompose_polar(const PlanarTriangle& tri) {
  const auto edges = edge_geometry(tri);
  const RadiusList radii = radii_from(tri, edges);
  std::array<double, 7> bounds;
  size_t nb = 0;
  if (point_in_triangle(Vec2::Zero(), tri)) bounds[nb++] = 0.0;
  for (int i = 0; i < radii.n; ++i)
    if (nb == 0 || radii.r[i] > bounds[nb - 1]) bounds[nb++] = radii.r[i];

  PolarDecomposition dec;
  dec.slabs.reserve(nb);
  std::vector<Crossing> cr;
  cr.reserve(6);
  for (size_t i = 0; i + 1 < nb; ++i) {
    PolarSlab slab;
    slab.r_lo = bounds[i];
    slab.r_hi = bounds[i + 1];
    const double rm = 0.5 * (slab.r_lo + slab.r_hi);
    cr.clear();
    slab.activity = crossings_at(edges, rm, &cr);
    if (cr.empty()) {
      if (!point_in_triangle(Vec2(rm, 0.0), tri)) continue;
      slab.full_circle = true;
      dec.slabs.push_back(slab);
      continue;
    }
    std::sort(cr.begin(), cr.end(),
              [](const Crossing& a, const Crossing& b) { return a.theta < b.theta; });
    const size_t n = cr.size();
    for (size_t s = 0; s < n; ++s) {
      if (!cr[s].start) continue;
      for (size_t k = 1; k < n; ++k) {
        const Crossing& e = cr[(s + k) % n];
        if (!e.start) {
          slab.segments.push_back({cr[s].b, e.b});
          break;
        }
      }
    }
    dec.slabs.push_back(slab);
  }
  return dec;
}

std::vector<std::array<EdgeActivity, 3>> activity_sequence(const PlanarTriangle& tri) {
  const auto edges = edge_geometry(tri);
  const std::vector<double> radii = critical_radii(tri);
  std::vector<std::array<EdgeActivity, 3>> seq;
  double lo = 0.0;
  for (double r : radii) {
    if (r > lo) seq.push_back(crossings_at(edges, 0.5 * (lo + r), nullptr));
    lo = r;
  }
  seq.push_back(crossings_at(edges, lo + 1.0 + lo, nullptr));
  return seq;
}

}  // namespace panelint
