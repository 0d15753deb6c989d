#include "panelint/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "panelint/bem.hpp"
#include "panelint/curvature.hpp"
#include "panelint/mesh.hpp"
#include "panelint/oracle.hpp"
#include "panelint/panel_integrals.hpp"
#include "panelint/qsa.hpp"

namespace panelint::cli {

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "' in '" + s + "'");
    }
  }
  return out;
}

struct NamedProbe {
  SdfProbe probe;
  std::string kind;
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

NamedProbe parse_probe(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::vector<double> a =
      colon == std::string::npos ? std::vector<double>{} : parse_list(text.substr(colon + 1));
  NamedProbe p;
  p.kind = name;
  if (name == "sphere" && (a.empty() || a.size() == 4)) {
    if (!a.empty()) {
      p.center = Vec3(a[0], a[1], a[2]);
      p.radius = a[3];
    }
    p.probe = sphere_probe(p.center, p.radius);
  } else if (name == "plane" && a.size() == 4) {
    p.probe = plane_probe(Vec3(a[0], a[1], a[2]).normalized(), a[3]);
  } else if (name == "torus" && a.size() == 2) {
    p.probe = torus_probe(a[0], a[1]);
  } else {
    throw UsageError("bad surface '" + text +
                     "' (sphere, sphere:cx,cy,cz,r, plane:nx,ny,nz,offset, torus:R,r)");
  }
  return p;
}

PanelPolynomial parse_poly(const std::string& s, const Panel& p) {
  if (s == "one") return PanelPolynomial::constant(1.0);
  if (s == "yx") return PanelPolynomial::world_affine(p, 0.0, Vec3::UnitX());
  if (s.rfind("vertex:", 0) == 0) {
    const auto v = parse_list(s.substr(7));
    if (v.size() != 3) throw UsageError("vertex: needs three values");
    return PanelPolynomial::vertex_values(v[0], v[1], v[2]);
  }
  const auto v = parse_list(s);
  if (v.size() != 1) throw UsageError("bad density '" + s + "' (one, yx, <number>, vertex:a,b,c)");
  return PanelPolynomial::constant(v[0]);
}

SingularStrategy strategy_or_usage(const std::string& s) {
  try {
    return parse_strategy(s);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

// Maps exceptions from a command body to exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DivergentIntegral& e) {
    err << "error: " << e.what() << "; rerun with --method qsa --sdf <surface>\n";
    return kDivergent;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

void emit(const std::optional<std::string>& path, std::ostream& out, const std::string& text) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + *path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + *path + "'");
}

double oracle_value(const Panel& p, const Target& t, const PanelPolynomial& poly, bool k_kernel,
                    const std::optional<NamedProbe>& sdf, double tol, bool* converged) {
  const bool curved = sdf && sdf->kind == "sphere";
  const Chart chart = curved ? sphere_chart(p.v1, p.v2, p.v3, sdf->center, sdf->radius)
                             : flat_chart(p.v1, p.v2, p.v3);
  const Vec3 off = t.x - chart.anchor;
  OracleOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = 0.0;
  for (int k = 0; k < 3; ++k)
    if ((t.x - p.vertex(k)).norm() <= 1e-14 * p.diameter()) opt.singular_corner = k;
  const PlanarIntegrand f = [&](const Vec2& uv) {
    Vec3 dy, du, dv;
    chart.eval(uv, dy, du, dv);
    const Vec3 d = off - dy;
    const double r = d.norm();
    const double ker = k_kernel ? d.dot(t.n) / (kFourPi * r * r * r) : -1.0 / (kFourPi * r);
    return ker * poly(uv.x(), uv.y()) * du.cross(dv).norm();
  };
  const QuadratureResult q = adaptive_triangle(f, raw_triangle(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)), opt);
  if (converged) *converged = q.converged;
  return q.value;
}

std::string csv_header(const std::string& cmd) { return "# panelint " + cmd + " v1\n"; }

// Signed solid angle of the closed triangle set seen from x, in units of 4 pi.
double winding_number(const BemModel& m, const Vec3& x) {
  double w = 0.0;
  for (const Panel& p : m.panels) {
    const Vec3 a = p.v1 - x, b = p.v2 - x, c = p.v3 - x;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    if (std::min({la, lb, lc}) < 1e-12) return 0.0;  // on the boundary: not in the domain
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    w += 2.0 * std::atan2(num, den);
  }
  return w / kFourPi;
}

}  // namespace

int run_tri_integrate(const TriIntegrateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.kernel != "K" && o.kernel != "G") throw UsageError("--kernel must be K or G");
    const bool k_kernel = o.kernel == "K";
    const Panel p = Panel::from_vertices(o.v1, o.v2, o.v3);
    if (!(o.normal.norm() > 0.0)) throw UsageError("--normal must be nonzero");
    Target t{o.target, o.normal.normalized()};
    const PanelPolynomial poly = parse_poly(o.poly, p);
    std::optional<NamedProbe> sdf;
    if (o.sdf) sdf = parse_probe(*o.sdf);

    nlohmann::ordered_json j;
    j["kernel"] = o.kernel;
    j["method"] = o.method;
    const auto t0 = std::chrono::steady_clock::now();
    double value = 0.0;
    if (o.method == "analytic") {
      value = k_kernel ? integrate_k_panel(p, t, poly) : integrate_g_panel(p, t, poly);
    } else if (o.method == "qsa") {
      if (!k_kernel) throw UsageError("--method qsa applies to the K kernel");
      if (!sdf) throw UsageError("--method qsa needs --sdf");
      const FootPoint fp = foot_point(sdf->probe, t.x);
      if (std::abs(fp.c) <= 1e-14 * std::max(1.0, p.diameter())) {
        t.n = fp.normal;
        value = qsa_on_boundary(p, t, probe_fundamental_form(sdf->probe, t.x), poly);
        j["target_on_surface"] = true;
      } else {
        value = qsa_off_boundary(p, t, fp.foot, fp.normal,
                                 probe_fundamental_form(sdf->probe, fp.foot), poly);
        j["target_on_surface"] = false;
        j["height"] = fp.c;
      }
    } else if (o.method == "oracle") {
      bool conv = false;
      value = oracle_value(p, t, poly, k_kernel, sdf, o.oracle_tol, &conv);
      j["oracle_converged"] = conv;
    } else {
      throw UsageError("--method must be analytic, qsa or oracle");
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    j["value"] = value;
    if (o.check && o.method != "oracle") {
      bool conv = false;
      const double ref = oracle_value(p, t, poly, k_kernel, sdf, o.oracle_tol, &conv);
      j["oracle"] = ref;
      j["oracle_converged"] = conv;
      j["oracle_surface"] = sdf && sdf->kind == "sphere" ? "sphere" : "flat";
      j["rel_diff"] = std::abs(value - ref) / std::abs(ref);
    }
    out << j.dump() << "\n";
    err << "time_ms=" << ms << "\n";
    return kOk;
  });
}

int run_sweep_near_singular(const NearSweepOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto& c = o.config;
    const auto rows = near_singular_sweep(c);
    std::ostringstream s;
    s << csv_header("sweep-near-singular");
    s << "# kernel=" << (c.kernel == KernelKind::K ? "K" : "G")
      << " poly=" << (c.density == SweepDensity::One ? "one" : "yx") << " trials=" << c.trials
      << " seed=" << c.seed << " coord_range=" << fmt(c.coord_range) << " c_range=" << fmt(c.c_lo)
      << "," << fmt(c.c_hi) << " oracle_tol=" << fmt(c.oracle_tol) << "\n";
    s << "trial,diameter,smallest_angle,value_method,value_oracle,rel_diff\n";
    double worst = 0.0;
    int unconverged = 0;
    for (const auto& r : rows) {
      s << r.trial << "," << fmt(r.diameter) << "," << fmt(r.smallest_angle) << ","
        << fmt(r.value_method) << "," << fmt(r.value_oracle) << "," << fmt(r.rel_diff) << "\n";
      worst = std::max(worst, r.rel_diff);
      unconverged += !r.oracle_converged;
    }
    s << "# max_rel_diff=" << fmt(worst) << " oracle_unconverged=" << unconverged << "\n";
    emit(o.output, out, s.str());
    return kOk;
  });
}

int run_sweep_singular(const SingularSweepOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto& c = o.config;
    const auto rows = singular_sweep(c);
    std::ostringstream s;
    s << csv_header("sweep-singular");
    s << "# trials=" << c.trials << " seed=" << c.seed << " coord_range=" << fmt(c.range_lo) << ","
      << fmt(c.range_hi) << " oracle_tol=" << fmt(c.oracle_tol) << "\n";
    s << "trial,method,diameter,smallest_angle,value_method,value_oracle,rel_diff\n";
    for (const auto& r : rows)
      for (int m = 0; m < 4; ++m)
        s << r.trial << "," << singular_method_name(static_cast<SingularMethod>(m)) << ","
          << fmt(r.diameter) << "," << fmt(r.smallest_angle) << "," << fmt(r.value[m]) << ","
          << fmt(r.oracle) << "," << fmt(r.rel_diff[m]) << "\n";
    std::vector<double> d;
    for (const auto& r : rows) d.push_back(r.diameter);
    for (int m : {0, 2, 3}) {
      std::vector<double> e;
      for (const auto& r : rows) e.push_back(r.rel_diff[m]);
      const SlopeFit f = binned_slope(d, e, o.bins);
      s << "# fit method=" << singular_method_name(static_cast<SingularMethod>(m))
        << " bins=" << o.bins << " slope=" << fmt(f.slope) << " intercept=" << fmt(f.intercept)
        << "\n";
    }
    emit(o.output, out, s.str());
    return kOk;
  });
}

int run_sphere_test(const SphereTestOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<SingularStrategy> strategies;
    for (const auto& name : o.strategies) strategies.push_back(strategy_or_usage(name));
    std::vector<std::pair<std::string, SurfaceMesh>> meshes;
    for (int s : o.subdivisions) meshes.emplace_back("icosphere-" + std::to_string(s), generate_sphere_mesh(s));
    for (int f : o.geodesic) meshes.emplace_back("geodesic-" + std::to_string(f), generate_geodesic_sphere(f));
    if (meshes.empty()) throw UsageError("no meshes requested");
    std::ostringstream s;
    s << csv_header("sphere-test");
    s << "strategy,mesh,n_nodes,max_rel_error\n";
    for (const auto& [name, mesh] : meshes) {
      const BemModel m = build_model({BemSurface{mesh, sphere_probe(), false}});
      const auto far = far_row_sums(m);
      for (SingularStrategy st : strategies) {
        const auto r = sphere_identity_from_parts(far, incident_row_sums(m, st));
        s << strategy_name(st) << "," << name << "," << m.mesh.nodes.size() << ","
          << fmt(r.max_rel_error) << "\n";
      }
    }
    emit(o.output, out, s.str());
    return kOk;
  });
}

int run_curvature(const CurvatureOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!!o.mesh + !!o.sphere + !!o.torus != 1)
      throw UsageError("give exactly one of --mesh, --sphere, --torus");
    SurfaceMesh mesh;
    std::optional<SdfProbe> probe;
    if (o.mesh) {
      mesh = load_mesh(*o.mesh);
    } else if (o.sphere) {
      mesh = generate_sphere_mesh(*o.sphere);
      probe = sphere_probe();
    } else {
      const auto& a = *o.torus;
      if (a.size() != 4) throw UsageError("--torus needs R,r,n_u,n_v");
      mesh = generate_torus_mesh(a[0], a[1], static_cast<int>(a[2]), static_cast<int>(a[3]));
      probe = torus_probe(a[0], a[1]);
    }
    validate_mesh(mesh);
    const auto normals = estimate_normals(mesh);
    const auto forms = estimate_fundamental_forms(mesh, normals);
    std::ostringstream s;
    s << csv_header("curvature");
    s << "node,x,y,z,k11,k12,k22,kappa_min,kappa_max";
    if (probe) s << ",exact_min,exact_max";
    s << "\n";
    for (size_t i = 0; i < mesh.nodes.size(); ++i) {
      const Vec3& x = mesh.nodes[i];
      const FundamentalForm& f = forms[i];
      const Vec2 k = f.principal();
      s << i << "," << fmt(x.x()) << "," << fmt(x.y()) << "," << fmt(x.z()) << "," << fmt(f.k11)
        << "," << fmt(f.k12) << "," << fmt(f.k22) << "," << fmt(k[0]) << "," << fmt(k[1]);
      if (probe) {
        const Vec2 e = probe_fundamental_form(*probe, x).principal();
        s << "," << fmt(e[0]) << "," << fmt(e[1]);
      }
      s << "\n";
    }
    emit(o.output, out, s.str());
    return kOk;
  });
}

int run_bem(const BemOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<BemSurface> surfaces;
    if (o.sphere) surfaces.push_back(BemSurface{generate_sphere_mesh(*o.sphere), sphere_probe(), false});
    for (const auto& path : o.meshes) {
      SurfaceMesh mesh = load_mesh(path);
      validate_mesh(mesh);
      surfaces.push_back(BemSurface{std::move(mesh), std::nullopt, !surfaces.empty()});
    }
    std::optional<std::array<double, 2>> torus;
    if (o.torus) {
      const auto& a = *o.torus;
      if (a.size() != 4) throw UsageError("--torus needs R,r,n_u,n_v");
      surfaces.push_back(BemSurface{
          generate_torus_mesh(a[0], a[1], static_cast<int>(a[2]), static_cast<int>(a[3])),
          torus_probe(a[0], a[1]), !surfaces.empty()});
      torus = std::array<double, 2>{a[0], a[1]};
    }
    if (surfaces.empty()) throw UsageError("no surfaces: give --sphere, --mesh or --torus");
    BoundaryData bc;
    if (o.bc == "x1-flux") bc = x1_flux_data;
    else if (o.bc == "cos-phi") bc = cos_phi_flux_data;
    else throw UsageError("--bc must be x1-flux or cos-phi");
    const SingularStrategy st = strategy_or_usage(o.strategy);
    Regularization reg;
    if (o.regularization == "pin") reg = Regularization::PinNode;
    else if (o.regularization == "mean") reg = Regularization::MeanZero;
    else throw UsageError("--regularization must be pin or mean");
    if (o.grid < 0 || o.probes < 0) throw UsageError("--grid and --probes must be >= 0");

    const BemModel model = build_model(surfaces);
    const BemSystem sys = assemble(model, st, bc);
    const BemSolution sol = solve(model, sys, reg);
    if (sol.rhs_projection > 1e-10)
      err << "warning: boundary data has net flux (relative part " << fmt(sol.rhs_projection)
          << "); its area-weighted mean was removed\n";

    auto in_domain = [&](const Vec3& x) { return std::abs(winding_number(model, x)) > 0.5; };

    nlohmann::ordered_json j;
    j["bc"] = o.bc;
    j["strategy"] = o.strategy;
    j["regularization"] = o.regularization;
    j["nodes"] = model.mesh.nodes.size();
    j["residual"] = sol.residual;
    j["rhs_projection"] = sol.rhs_projection;
    j["bordered"] = sol.bordered;
    j["offset"] = sol.offset;

    if (o.bc == "x1-flux" && o.probes > 0) {
      std::vector<Vec3> pts;
      for (const Vec3& p : interior_probe_points(4 * o.probes, 0.6, o.seed))
        if (static_cast<int>(pts.size()) < o.probes && in_domain(p)) pts.push_back(p);
      const auto u = evaluate_potential(model, sol, pts);
      const LinearAgreement a = x1_agreement(pts, u);
      j["x1_agreement"] = {{"probes", pts.size()}, {"offset", a.offset}, {"max_error", a.max_error}};
      err << "x1 max_error=" << fmt(a.max_error) << "\n";
    }
    if (torus) {
      const double delta = 0.01;
      const auto r = orthogonality_diagnostic(model, sol.gamma, torus_samples((*torus)[0], (*torus)[1]), delta);
      j["torus_orthogonality"] = {{"samples", r.ratio.size()}, {"delta", delta}, {"worst", r.worst}, {"mean", r.mean}};
      err << "torus orthogonality worst=" << fmt(r.worst) << " mean=" << fmt(r.mean) << "\n";
      const double enclose = (*torus)[0] + (*torus)[1];
      if (o.sphere && enclose < 0.8) {
        const FluxResult f = sphere_flux(model, sol.gamma, Vec3::Zero(), 0.5 * (1.0 + enclose), 3);
        j["torus_flux"] = {{"net", f.net}, {"absolute", f.absolute}};
      }
    }
    std::vector<double> gamma(sol.gamma.data(), sol.gamma.data() + sol.gamma.size());
    j["gamma"] = gamma;

    std::ostringstream s;
    s << csv_header("bem");
    s << "x,y,z,u\n";
    if (o.grid > 0) {
      std::vector<Vec3> pts;
      for (int a = 0; a < o.grid; ++a)
        for (int b = 0; b < o.grid; ++b) {
          const double h = o.grid > 1 ? 2.0 / (o.grid - 1) : 0.0;
          const Vec3 x(-1.0 + a * h, -1.0 + b * h, 0.0);
          if (in_domain(x)) pts.push_back(x);
        }
      const auto u = evaluate_potential(model, sol, pts);
      for (size_t k = 0; k < pts.size(); ++k)
        s << fmt(pts[k].x()) << "," << fmt(pts[k].y()) << "," << fmt(pts[k].z()) << "," << fmt(u[k]) << "\n";
    }
    emit(o.output, out, s.str());
    if (o.json) emit(o.json, out, j.dump(1) + "\n");
    return kOk;
  });
}

}  // namespace panelint::cli
