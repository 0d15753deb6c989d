#include "panelint/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace panelint {

Mat2 FundamentalForm::matrix() const {
  Mat2 m;
  m << k11, k12, k12, k22;
  return m;
}

FundamentalForm FundamentalForm::in_basis(const Vec3& f1, const Vec3& f2) const {
  Eigen::Matrix<double, 2, 2> B;  // B(i,j) = e_i . f_j
  B << e1.dot(f1), e1.dot(f2), e2.dot(f1), e2.dot(f2);
  const Mat2 K = B.transpose() * matrix() * B;
  FundamentalForm out;
  out.k11 = K(0, 0);
  out.k12 = 0.5 * (K(0, 1) + K(1, 0));
  out.k22 = K(1, 1);
  out.e1 = f1;
  out.e2 = f2;
  return out;
}

Vec2 FundamentalForm::principal() const {
  Eigen::SelfAdjointEigenSolver<Mat2> es(matrix());
  return es.eigenvalues();
}

FundamentalForm FundamentalForm::operator*(double k) const {
  FundamentalForm out = *this;
  out.k11 *= k;
  out.k12 *= k;
  out.k22 *= k;
  return out;
}

SdfProbe sphere_probe(const Vec3& center, double radius) {
  SdfProbe p;
  p.value = [=](const Vec3& x) { return (x - center).norm() - radius; };
  p.gradient = [=](const Vec3& x) { return Vec3((x - center).normalized()); };
  p.hessian = [=](const Vec3& x) {
    const Vec3 d = x - center;
    const double r = d.norm();
    const Vec3 h = d / r;
    return Mat3((Mat3::Identity() - h * h.transpose()) / r);
  };
  return p;
}

SdfProbe plane_probe(const Vec3& normal, double offset) {
  const Vec3 n = normal.normalized();
  const double o = offset / normal.norm();
  SdfProbe p;
  p.value = [=](const Vec3& x) { return n.dot(x) + o; };
  p.gradient = [=](const Vec3&) { return n; };
  p.hessian = [](const Vec3&) { return Mat3(Mat3::Zero()); };
  return p;
}

SdfProbe torus_probe(double major, double minor) {
  SdfProbe p;
  auto tube = [=](const Vec3& x) {
    const Vec3 h(x.x(), x.y(), 0.0);
    return Vec3(x - major * h.normalized());
  };
  p.value = [=](const Vec3& x) { return tube(x).norm() - minor; };
  p.gradient = [=](const Vec3& x) { return Vec3(tube(x).normalized()); };
  p.hessian = [=](const Vec3& x) {
    const Vec3 P = tube(x);
    const double len = P.norm();
    const Vec3 ph = P / len;
    const Vec3 h(x.x(), x.y(), 0.0);
    const double rh = h.norm();
    const Vec3 hh = h / rh;
    Mat3 proj_h = Mat3::Zero();
    proj_h(0, 0) = 1.0;
    proj_h(1, 1) = 1.0;
    const Mat3 JP = Mat3::Identity() - (major / rh) * (proj_h - hh * hh.transpose());
    const Mat3 H = (Mat3::Identity() - ph * ph.transpose()) * JP / len;
    return Mat3(0.5 * (H + H.transpose()));
  };
  return p;
}

SdfProbe cylinder_probe(double radius, const Vec3& axis_in) {
  const Vec3 a = axis_in.normalized();
  SdfProbe p;
  auto radial = [=](const Vec3& x) { return Vec3(x - a * a.dot(x)); };
  p.value = [=](const Vec3& x) { return radial(x).norm() - radius; };
  p.gradient = [=](const Vec3& x) { return Vec3(radial(x).normalized()); };
  p.hessian = [=](const Vec3& x) {
    const Vec3 d = radial(x);
    const double r = d.norm();
    const Vec3 h = d / r;
    return Mat3((Mat3::Identity() - a * a.transpose() - h * h.transpose()) / r);
  };
  return p;
}

SdfProbe scaled_probe(const SdfProbe& p, double s) {
  SdfProbe q;
  q.value = [=](const Vec3& x) { return s * p.value(x); };
  q.gradient = [=](const Vec3& x) { return Vec3(s * p.gradient(x)); };
  q.hessian = [=](const Vec3& x) { return Mat3(s * p.hessian(x)); };
  return q;
}

SdfProbe negated_probe(const SdfProbe& p) { return scaled_probe(p, -1.0); }

Mat3 shape_operator(const SdfProbe& probe, const Vec3& x) {
  const double g = probe.gradient(x).norm();
  if (!(g > 1e-12)) throw DomainError("shape operator: vanishing gradient");
  return -probe.hessian(x) / g;
}

FundamentalForm fundamental_form_from_shape(const Mat3& S, const NormalizedFrame& frame) {
  FundamentalForm f;
  f.e1 = frame.rotation.row(0).transpose();
  f.e2 = frame.rotation.row(1).transpose();
  f.k11 = f.e1.dot(S * f.e1);
  f.k12 = 0.5 * (f.e1.dot(S * f.e2) + f.e2.dot(S * f.e1));
  f.k22 = f.e2.dot(S * f.e2);
  return f;
}

FundamentalForm probe_fundamental_form(const SdfProbe& probe, const Vec3& x) {
  NormalizedFrame frame;
  frame.rotation = rotation_to_z(probe.gradient(x));
  return fundamental_form_from_shape(shape_operator(probe, x), frame);
}

std::vector<Vec3> estimate_normals(const SurfaceMesh& mesh) {
  std::vector<Vec3> acc(mesh.nodes.size(), Vec3::Zero());
  for (const auto& tr : mesh.triangles) {
    const Vec3 n = (mesh.nodes[tr[1]] - mesh.nodes[tr[0]])
                       .cross(mesh.nodes[tr[2]] - mesh.nodes[tr[0]])
                       .normalized();
    for (int k = 0; k < 3; ++k) {
      const Vec3 a = (mesh.nodes[tr[(k + 1) % 3]] - mesh.nodes[tr[k]]).normalized();
      const Vec3 b = (mesh.nodes[tr[(k + 2) % 3]] - mesh.nodes[tr[k]]).normalized();
      const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
      acc[tr[k]] += angle * n;
    }
  }
  for (size_t i = 0; i < acc.size(); ++i) {
    const double len = acc[i].norm();
    if (!(len > 0.0)) throw DomainError("node " + std::to_string(i) + " has no incident triangle");
    acc[i] /= len;
  }
  return acc;
}

FundamentalForm estimate_fundamental_form(const SurfaceMesh& mesh, int node,
                                          const std::vector<Vec3>& normals,
                                          const std::vector<std::vector<int>>& nbr) {
  std::set<int> pts(nbr[node].begin(), nbr[node].end());
  if (pts.size() < 8) {
    for (int j : nbr[node]) pts.insert(nbr[j].begin(), nbr[j].end());
    pts.erase(node);
  }
  const Mat3 R = rotation_to_z(normals[node]);
  const int m = static_cast<int>(pts.size());
  if (m < 5) throw DomainError("node " + std::to_string(node) + ": fewer than five neighbours");
  Eigen::MatrixXd A(m, 5);
  Eigen::VectorXd z(m);
  int row = 0;
  for (int j : pts) {
    const Vec3 s = R * (mesh.nodes[j] - mesh.nodes[node]);
    A.row(row) << s.x() * s.x(), s.y() * s.y(), s.x() * s.y(), s.x(), s.y();
    z(row) = s.z();
    ++row;
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int k = 0; k < 5; ++k) {
    if (!(scale(k) > 0.0)) throw DomainError("node " + std::to_string(node) + ": rank-deficient fit");
    A.col(k) /= scale(k);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < 5) throw DomainError("node " + std::to_string(node) + ": rank-deficient fit");
  Eigen::VectorXd coef = qr.solve(z);
  coef = coef.cwiseQuotient(scale);
  FundamentalForm f;
  f.k11 = 2.0 * coef(0);
  f.k22 = 2.0 * coef(1);
  f.k12 = coef(2);
  f.e1 = R.row(0).transpose();
  f.e2 = R.row(1).transpose();
  return f;
}

FundamentalForm estimate_fundamental_form(const SurfaceMesh& mesh, int node) {
  return estimate_fundamental_form(mesh, node, estimate_normals(mesh), mesh.node_neighbors());
}

std::vector<FundamentalForm> estimate_fundamental_forms(const SurfaceMesh& mesh,
                                                        const std::vector<Vec3>& normals) {
  const auto nbr = mesh.node_neighbors();
  std::vector<FundamentalForm> out(mesh.nodes.size());
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    out[i] = estimate_fundamental_form(mesh, static_cast<int>(i), normals, nbr);
  return out;
}

Mat3 GradientSystem::solve() const {
  const Eigen::Matrix<double, 9, 1> g = matrix.fullPivLu().solve(rhs);
  Mat3 G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = g(3 * i + j);
  return G;
}

GradientSystem normal_gradient_system(const SurfaceMesh& mesh, int node,
                                      const std::vector<Vec3>& normals) {
  const auto tris = mesh.node_triangles()[node];
  if (tris.size() < 2) throw DomainError("gradient system needs two incident triangles");
  const auto& t0 = mesh.triangles[tris[0]];
  std::vector<int> pick;
  for (int v : t0)
    if (v != node) pick.push_back(v);
  for (size_t k = 1; k < tris.size() && pick.size() < 3; ++k)
    for (int v : mesh.triangles[tris[k]])
      if (v != node && std::find(pick.begin(), pick.end(), v) == pick.end()) {
        pick.push_back(v);
        break;
      }
  GradientSystem sys;
  sys.matrix.setZero();
  for (int k = 0; k < 3; ++k) {
    const Vec3 dx = mesh.nodes[pick[k]] - mesh.nodes[node];
    const Vec3 dn = normals[pick[k]] - normals[node];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) sys.matrix(3 * i + k, 3 * i + j) = dx(j);
      sys.rhs(3 * i + k) = dn(i);
    }
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(sys.matrix);
  const auto sv = svd.singularValues();
  sys.condition = sv(0) / sv(8);
  return sys;
}

}  // namespace panelint
