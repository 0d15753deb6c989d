#include "panelint/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <vector>

namespace panelint {

namespace {

// Symmetric 16-point rule, exact for degree 8 on the reference triangle
// (weights sum to 1/2).
struct RulePoint {
  double l1, l2, w;
};

std::vector<RulePoint> make_rule() {
  std::vector<RulePoint> r;
  auto add3 = [&](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    r.push_back({a, a, w});
    r.push_back({a, b, w});
    r.push_back({b, a, w});
  };
  auto add6 = [&](double a, double b, double w) {
    const double c = 1.0 - a - b;
    r.push_back({a, b, w});
    r.push_back({b, a, w});
    r.push_back({a, c, w});
    r.push_back({c, a, w});
    r.push_back({b, c, w});
    r.push_back({c, b, w});
  };
  r.push_back({1.0 / 3.0, 1.0 / 3.0, 0.0721578038388935841255455552445323});
  add3(0.170569307751760206622293501491464, 0.0516086852673591251408957751460645);
  add3(0.0505472283170309754584235505965989, 0.0162292488115990401554629641708902);
  add3(0.459292588292723156028815514494169, 0.0475458171336423123969480521942921);
  add6(0.008394777409957605337213834539296, 0.263112829634638113421785786284643,
       0.0136151570872174971324223450369544);
  return r;
}

const std::vector<RulePoint>& rule() {
  static const std::vector<RulePoint> r = make_rule();
  return r;
}

struct Cell {
  Vec2 a, b, c;
  int depth;
  double coarse;  // rule on the cell
  double fine;    // rule summed over the four children
  std::array<double, 4> child{};
  double err;
};

struct ByErr {
  bool operator()(const Cell& x, const Cell& y) const { return x.err < y.err; }
};

class Integrator {
 public:
  Integrator(const PlanarIntegrand& f, long budget) : f_(f), budget_(budget) {}

  double apply(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double jac = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    double s = 0.0;
    for (const RulePoint& p : rule()) s += p.w * f_(a + p.l1 * (b - a) + p.l2 * (c - a));
    evals_ += static_cast<long>(rule().size());
    return s * jac;
  }

  static std::array<std::array<Vec2, 3>, 4> split(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    return {{{a, ab, ca}, {ab, b, bc}, {ca, bc, c}, {ab, bc, ca}}};
  }

  Cell make(const Vec2& a, const Vec2& b, const Vec2& c, int depth, double coarse) {
    Cell cell{a, b, c, depth, coarse, 0.0, {}, 0.0};
    const auto kids = split(a, b, c);
    for (int i = 0; i < 4; ++i) {
      cell.child[i] = apply(kids[i][0], kids[i][1], kids[i][2]);
      cell.fine += cell.child[i];
    }
    cell.err = std::abs(cell.fine - cell.coarse);
    if (!std::isfinite(cell.err)) cell.err = std::numeric_limits<double>::infinity();
    return cell;
  }

  long evals() const { return evals_; }
  bool exhausted() const { return evals_ > budget_; }

 private:
  const PlanarIntegrand& f_;
  long budget_;
  long evals_ = 0;
};

}  // namespace

PlanarTriangle raw_triangle(const Vec2& a, const Vec2& b, const Vec2& c) {
  PlanarTriangle t;
  t.p1 = a;
  t.p2 = b;
  t.p3 = c;
  return t;
}

QuadratureResult adaptive_triangle(const PlanarIntegrand& f, const PlanarTriangle& tri,
                                   const OracleOptions& opt) {
  Integrator in(f, opt.max_evaluations);
  std::priority_queue<Cell, std::vector<Cell>, ByErr> heap;

  // Graded start: repeatedly split the cell touching the flagged corner.
  struct Seed {
    Vec2 a, b, c;
    int depth;
  };
  std::vector<Seed> seeds;
  if (opt.singular_corner >= 0) {
    Vec2 a = tri.vertex(opt.singular_corner);
    Vec2 b = tri.vertex((opt.singular_corner + 1) % 3);
    Vec2 c = tri.vertex((opt.singular_corner + 2) % 3);
    for (int level = 1; level <= 6; ++level) {
      const auto kids = Integrator::split(a, b, c);
      for (int i = 1; i < 4; ++i) seeds.push_back({kids[i][0], kids[i][1], kids[i][2], level});
      a = kids[0][0];
      b = kids[0][1];
      c = kids[0][2];
    }
    seeds.push_back({a, b, c, 6});
  } else {
    seeds.push_back({tri.p1, tri.p2, tri.p3, 0});
  }

  double total = 0.0, err = 0.0;
  for (const Seed& s : seeds) {
    Cell cell = in.make(s.a, s.b, s.c, s.depth, in.apply(s.a, s.b, s.c));
    total += cell.fine;
    err += cell.err;
    heap.push(cell);
  }

  QuadratureResult res;
  while (true) {
    const double tol = std::max(opt.rel_tol * std::abs(total), opt.abs_tol);
    if (err <= tol) {
      res.converged = true;
      break;
    }
    if (heap.empty() || in.exhausted() || !std::isfinite(total)) break;
    Cell top = heap.top();
    if (top.depth >= opt.max_depth) break;
    heap.pop();
    total -= top.fine;
    err -= top.err;
    const auto kids = Integrator::split(top.a, top.b, top.c);
    for (int i = 0; i < 4; ++i) {
      Cell cell = in.make(kids[i][0], kids[i][1], kids[i][2], top.depth + 1, top.child[i]);
      total += cell.fine;
      err += cell.err;
      heap.push(cell);
    }
    // Resum occasionally to keep the running totals free of drift.
    if ((in.evals() & 0xFFFF) < 1024) {
      auto copy = heap;
      double t = 0.0, e = 0.0;
      while (!copy.empty()) {
        t += copy.top().fine;
        e += copy.top().err;
        copy.pop();
      }
      total = t;
      err = e;
    }
  }
  res.value = total;
  res.error_estimate = err;
  res.evaluations = in.evals();
  return res;
}

Chart flat_chart(const Vec3& v1, const Vec3& v2, const Vec3& v3) {
  const Vec3 e1 = v2 - v1, e2 = v3 - v1;
  return Chart{v1, [=](const Vec2& uv, Vec3& dy, Vec3& du, Vec3& dv) {
    dy = uv.x() * e1 + uv.y() * e2;
    du = e1;
    dv = e2;
  }};
}

Chart sphere_chart(const Vec3& v1, const Vec3& v2, const Vec3& v3, const Vec3& center,
                   double radius) {
  const Vec3 a = v1 - center, e1 = v2 - v1, e2 = v3 - v1;
  const double la = a.norm();
  const Vec3 ah = a / la;
  return Chart{center + radius * ah, [=](const Vec2& uv, Vec3& dy, Vec3& du, Vec3& dv) {
    const Vec3 w = uv.x() * e1 + uv.y() * e2;
    const Vec3 p = a + w;
    const double len = p.norm();
    const Vec3 ph = p / len;
    // p/|p| - a/|a| = w/|p| + a (1/|p| - 1/|a|)
    const double dinv = -(2.0 * a.dot(w) + w.squaredNorm()) / (len * la * (la + len));
    dy = radius * (w / len + a * dinv);
    du = radius * (e1 - ph * ph.dot(e1)) / len;
    dv = radius * (e2 - ph * ph.dot(e2)) / len;
  }};
}

QuadratureResult adaptive_patch_local(const SurfaceIntegrand& f, const Chart& chart,
                                      const OracleOptions& opt) {
  const PlanarIntegrand g = [&](const Vec2& uv) {
    Vec3 dy, du, dv;
    chart.eval(uv, dy, du, dv);
    return f(dy) * du.cross(dv).norm();
  };
  return adaptive_triangle(g, raw_triangle(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)), opt);
}

QuadratureResult adaptive_patch(const SurfaceIntegrand& f, const Chart& chart,
                                const OracleOptions& opt) {
  const Vec3 anchor = chart.anchor;
  return adaptive_patch_local([&](const Vec3& dy) { return f(anchor + dy); }, chart, opt);
}

double duffy_triangle(const PlanarIntegrand& f, const PlanarTriangle& tri, int corner,
                      double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const Vec2 c = tri.vertex(corner);
  const Vec2 a = tri.vertex((corner + 1) % 3);
  const Vec2 b = tri.vertex((corner + 2) % 3);
  const double area2 = std::abs((a - c).x() * (b - c).y() - (a - c).y() * (b - c).x());
  auto inner = [&](double eta) {
    const Vec2 dir = (a - c) + eta * (b - a);
    auto g = [&](double xi) { return f(c + xi * dir) * xi; };
    return gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15, tol);
  };
  return area2 * gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 15, tol);
}

}  // namespace panelint
