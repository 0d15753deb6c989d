#include "panelint/bem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace panelint {

const char* strategy_name(SingularStrategy s) {
  switch (s) {
    case SingularStrategy::QSA: return "qsa";
    case SingularStrategy::Zero: return "zero";
    case SingularStrategy::Centroid: return "centroid";
    case SingularStrategy::CentroidStar: return "centroid-star";
  }
  return "?";
}

SingularStrategy parse_strategy(const std::string& name) {
  if (name == "qsa") return SingularStrategy::QSA;
  if (name == "zero") return SingularStrategy::Zero;
  if (name == "centroid") return SingularStrategy::Centroid;
  if (name == "centroid-star") return SingularStrategy::CentroidStar;
  throw DomainError("unknown strategy '" + name + "'");
}

BemModel build_model(const std::vector<BemSurface>& surfaces, bool use_probe_geometry) {
  BemModel m;
  for (size_t s = 0; s < surfaces.size(); ++s) {
    SurfaceMesh mesh = surfaces[s].mesh;
    std::optional<SdfProbe> probe = surfaces[s].probe;
    if (surfaces[s].reverse) {
      for (auto& tr : mesh.triangles) std::swap(tr[1], tr[2]);
      if (probe) probe = negated_probe(*probe);
    }
    std::vector<Vec3> normals;
    std::vector<FundamentalForm> forms;
    if (probe && use_probe_geometry) {
      for (const Vec3& x : mesh.nodes) {
        normals.push_back(probe->gradient(x).normalized());
        forms.push_back(probe_fundamental_form(*probe, x));
      }
    } else {
      normals = estimate_normals(mesh);
      forms = estimate_fundamental_forms(mesh, normals);
    }
    const int offset = static_cast<int>(m.mesh.nodes.size());
    for (size_t i = 0; i < mesh.nodes.size(); ++i) {
      m.mesh.nodes.push_back(mesh.nodes[i]);
      m.normals.push_back(normals[i]);
      m.forms.push_back(forms[i]);
      m.node_surface.push_back(static_cast<int>(s));
    }
    for (const auto& tr : mesh.triangles) {
      m.mesh.triangles.push_back({tr[0] + offset, tr[1] + offset, tr[2] + offset});
      m.triangle_surface.push_back(static_cast<int>(s));
    }
    m.probes.push_back(probe);
  }
  validate_mesh(m.mesh);
  for (size_t t = 0; t < m.mesh.triangles.size(); ++t) m.panels.push_back(m.mesh.panel(t));
  m.node_triangles = m.mesh.node_triangles();
  m.node_weights.assign(m.mesh.nodes.size(), 0.0);
  for (size_t t = 0; t < m.panels.size(); ++t)
    for (int v : m.mesh.triangles[t]) m.node_weights[v] += m.panels[t].area() / 3.0;
  return m;
}

namespace {

double k_point(const Vec3& x, const Vec3& n, const Vec3& y) {
  const Vec3 d = x - y;
  const double r = d.norm();
  return d.dot(n) / (kFourPi * r * r * r);
}

}  // namespace

std::array<double, 3> incident_contribution(const BemModel& model, SingularStrategy strategy,
                                            int node, int tri) {
  const Panel& panel = model.panels[tri];
  const Target target{model.mesh.nodes[node], model.normals[node]};
  std::array<double, 3> out{0.0, 0.0, 0.0};
  switch (strategy) {
    case SingularStrategy::Zero:
      break;
    case SingularStrategy::QSA:
      for (int k = 0; k < 3; ++k)
        out[k] = qsa_on_boundary(panel, target, model.forms[node], PanelPolynomial::vertex_basis(k));
      break;
    case SingularStrategy::Centroid: {
      const double v = k_point(target.x, target.n, panel.centroid()) * panel.area() / 3.0;
      out = {v, v, v};
      break;
    }
    case SingularStrategy::CentroidStar: {
      const auto& probe = model.probes[model.triangle_surface[tri]];
      if (!probe) throw DomainError("centroid-star strategy requires a surface probe");
      const Vec3 y = foot_point(*probe, panel.centroid()).foot;
      const double v = k_point(target.x, target.n, y) * panel.area() / 3.0;
      out = {v, v, v};
      break;
    }
  }
  return out;
}

BemSystem assemble(const BemModel& model, SingularStrategy strategy, const BoundaryData& b) {
  const int n = static_cast<int>(model.mesh.nodes.size());
  BemSystem sys;
  sys.matrix = Eigen::MatrixXd::Zero(n, n);
  sys.rhs.resize(n);
  std::vector<char> incident(model.panels.size(), 0);
  for (int i = 0; i < n; ++i) {
    for (int t : model.node_triangles[i]) incident[t] = 1;
    const Target target{model.mesh.nodes[i], model.normals[i]};
    for (size_t t = 0; t < model.panels.size(); ++t) {
      const auto& tr = model.mesh.triangles[t];
      std::array<double, 3> v;
      if (incident[t]) {
        v = incident_contribution(model, strategy, i, static_cast<int>(t));
      } else {
        try {
          v = integrate_k_panel_basis(model.panels[t], target);
        } catch (const DivergentIntegral&) {
          v = incident_contribution(model, strategy, i, static_cast<int>(t));
        }
      }
      for (int k = 0; k < 3; ++k) sys.matrix(i, tr[k]) += v[k];
    }
    sys.matrix(i, i) -= 0.5;
    sys.rhs(i) = b(model.mesh.nodes[i], model.normals[i], model.node_surface[i]);
    for (int t : model.node_triangles[i]) incident[t] = 0;
  }
  return sys;
}

std::vector<double> far_row_sums(const BemModel& model) {
  const int n = static_cast<int>(model.mesh.nodes.size());
  std::vector<double> out(n, 0.0);
  std::vector<char> incident(model.panels.size(), 0);
  const PanelPolynomial one = PanelPolynomial::constant(1.0);
  for (int i = 0; i < n; ++i) {
    for (int t : model.node_triangles[i]) incident[t] = 1;
    const Target target{model.mesh.nodes[i], model.normals[i]};
    double s = 0.0;
    for (size_t t = 0; t < model.panels.size(); ++t)
      if (!incident[t]) s += integrate_k_panel(model.panels[t], target, one);
    out[i] = s;
    for (int t : model.node_triangles[i]) incident[t] = 0;
  }
  return out;
}

std::vector<double> incident_row_sums(const BemModel& model, SingularStrategy strategy) {
  const int n = static_cast<int>(model.mesh.nodes.size());
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int t : model.node_triangles[i]) {
      const auto v = incident_contribution(model, strategy, i, t);
      out[i] += v[0] + v[1] + v[2];
    }
  return out;
}

SphereIdentityResult sphere_identity_from_parts(const std::vector<double>& far,
                                                const std::vector<double>& incident) {
  SphereIdentityResult r;
  for (size_t i = 0; i < far.size(); ++i) {
    const double s = far[i] + incident[i];
    r.row_sums.push_back(s);
    r.rel_errors.push_back(std::abs(s - 0.5) / 0.5);
    r.max_rel_error = std::max(r.max_rel_error, r.rel_errors.back());
  }
  return r;
}

SphereIdentityResult sphere_identity_test(const BemModel& model, SingularStrategy strategy) {
  return sphere_identity_from_parts(far_row_sums(model), incident_row_sums(model, strategy));
}

namespace {

// u(x_i) at every node (rows of the G matrix applied to gamma).
Eigen::VectorXd nodal_potential(const BemModel& model, const Eigen::VectorXd& gamma, int only = -1) {
  const int n = static_cast<int>(model.mesh.nodes.size());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (only >= 0 && i != only) continue;
    const Target t{model.mesh.nodes[i], model.normals[i]};
    for (size_t p = 0; p < model.panels.size(); ++p) {
      const auto v = integrate_g_panel_basis(model.panels[p], t);
      const auto& tr = model.mesh.triangles[p];
      for (int k = 0; k < 3; ++k) u(i) += v[k] * gamma(tr[k]);
    }
  }
  return u;
}

}  // namespace

BemSolution solve(const BemModel& model, const BemSystem& system, Regularization reg) {
  const int n = static_cast<int>(system.matrix.rows());
  const Eigen::Map<const Eigen::VectorXd> w(model.node_weights.data(), n);
  BemSolution sol;
  Eigen::VectorXd b = system.rhs;
  b.array() -= w.dot(b) / w.sum();
  const double bnorm = system.rhs.norm();
  sol.rhs_projection = bnorm > 0.0 ? (b - system.rhs).norm() / bnorm : 0.0;

  auto residual = [&](const Eigen::VectorXd& g) {
    const double r = (system.matrix * g - b).norm();
    return b.norm() > 0.0 ? r / b.norm() : r;
  };
  sol.gamma = system.matrix.partialPivLu().solve(b);
  if (!sol.gamma.allFinite() || !(residual(sol.gamma) < 1e-8)) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n + 1, n + 1);
    B.topLeftCorner(n, n) = system.matrix;
    B.block(0, n, n, 1).setOnes();
    B.block(n, 0, 1, n) = (w / w.maxCoeff()).transpose();
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n + 1);
    full.head(n) = b;
    sol.gamma = B.partialPivLu().solve(full).head(n);
    sol.bordered = true;
  }
  if (!sol.gamma.allFinite()) throw DomainError("BEM system is singular after regularization");
  sol.residual = residual(sol.gamma);

  if (reg == Regularization::PinNode) {
    sol.offset = -nodal_potential(model, sol.gamma, 0)(0);
  } else {
    sol.offset = -w.dot(nodal_potential(model, sol.gamma)) / w.sum();
  }
  return sol;
}

std::vector<double> evaluate_potential(const BemModel& model, const Eigen::VectorXd& gamma,
                                       const std::vector<Vec3>& points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const Vec3& z : points) {
    double u = 0.0;
    for (size_t t = 0; t < model.panels.size(); ++t) {
      const auto& tr = model.mesh.triangles[t];
      const auto v = integrate_g_panel_basis(model.panels[t], Target{z, Vec3::UnitZ()});
      for (int k = 0; k < 3; ++k) u += v[k] * gamma(tr[k]);
    }
    out.push_back(u);
  }
  return out;
}

std::vector<double> evaluate_potential(const BemModel& model, const BemSolution& sol,
                                       const std::vector<Vec3>& points) {
  std::vector<double> u = evaluate_potential(model, sol.gamma, points);
  for (double& x : u) x += sol.offset;
  return u;
}

std::vector<Vec3> evaluate_gradient(const BemModel& model, const Eigen::VectorXd& gamma,
                                    const std::vector<Vec3>& points) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Vec3& z : points) {
    Vec3 g = Vec3::Zero();
    for (size_t t = 0; t < model.panels.size(); ++t) {
      const auto& tr = model.mesh.triangles[t];
      const auto v = integrate_grad_g_panel_basis(model.panels[t], z);
      for (int k = 0; k < 3; ++k) g += v[k] * gamma(tr[k]);
    }
    out.push_back(g);
  }
  return out;
}

double x1_flux_data(const Vec3& x, const Vec3&, int surface) {
  return surface == 0 ? x.x() : 0.0;
}

double cos_phi_flux_data(const Vec3& x, const Vec3&, int surface) {
  if (surface != 0) return 0.0;
  const double r = std::hypot(x.x(), x.y());
  return r > 0.0 ? x.x() / r : 0.0;  // cos(atan2(x2, x1)); poles get 0
}

std::vector<Vec3> interior_probe_points(int n, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-radius, radius);
  std::vector<Vec3> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Vec3 p(U(rng), U(rng), U(rng));
    if (p.norm() < radius) pts.push_back(p);
  }
  return pts;
}

LinearAgreement x1_agreement(const std::vector<Vec3>& points, const std::vector<double>& u) {
  if (points.size() != u.size() || points.empty()) throw DomainError("x1_agreement: bad input");
  LinearAgreement a;
  double scale = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    a.offset += u[i] - points[i].x();
    scale = std::max(scale, std::abs(points[i].x()));
  }
  a.offset /= static_cast<double>(u.size());
  for (size_t i = 0; i < u.size(); ++i)
    a.max_error = std::max(a.max_error, std::abs(u[i] - points[i].x() - a.offset));
  a.max_error /= scale;
  return a;
}

std::vector<SurfaceSample> torus_samples(double major, double minor) {
  std::vector<SurfaceSample> out;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const double u = (2 * i + 1) * kPi / 8, v = j * kPi / 4;
      const Vec3 n(std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::sin(v));
      const Vec3 center(major * std::cos(u), major * std::sin(u), 0.0);
      out.push_back({center + minor * n, n});
    }
  return out;
}

OrthogonalityResult orthogonality_diagnostic(const BemModel& model, const Eigen::VectorXd& gamma,
                                             const std::vector<SurfaceSample>& samples,
                                             double delta) {
  std::vector<Vec3> pts;
  for (const auto& s : samples) {
    pts.push_back(s.foot + delta * s.normal);
    pts.push_back(s.foot + 2.0 * delta * s.normal);
  }
  const auto g = evaluate_gradient(model, gamma, pts);
  OrthogonalityResult r;
  for (size_t k = 0; k < samples.size(); ++k) {
    const Vec3& n = samples[k].normal;
    const Vec3& g1 = g[2 * k];
    const double fn = 2.0 * g1.dot(n) - g[2 * k + 1].dot(n);
    const double ft = (g1 - n * g1.dot(n)).norm();
    const double ratio = std::abs(fn) / std::hypot(fn, ft);
    r.ratio.push_back(ratio);
    r.worst = std::max(r.worst, ratio);
    r.mean += ratio;
  }
  if (!samples.empty()) r.mean /= static_cast<double>(samples.size());
  return r;
}

FluxResult sphere_flux(const BemModel& model, const Eigen::VectorXd& gamma, const Vec3& center,
                       double radius, int subdivisions) {
  const SurfaceMesh s = generate_sphere_mesh(subdivisions);
  std::vector<Vec3> pts, nrm;
  std::vector<double> area;
  for (size_t t = 0; t < s.triangles.size(); ++t) {
    const Panel p = s.panel(t);
    const Vec3 c = p.centroid().normalized();
    pts.push_back(center + radius * c);
    nrm.push_back(c);
    area.push_back(p.area() * radius * radius);
  }
  const auto g = evaluate_gradient(model, gamma, pts);
  FluxResult f;
  for (size_t k = 0; k < pts.size(); ++k) {
    const double q = g[k].dot(nrm[k]) * area[k];
    f.net += q;
    f.absolute += std::abs(q);
  }
  return f;
}

}  // namespace panelint
