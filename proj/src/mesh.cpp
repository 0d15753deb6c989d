#include "panelint/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

namespace panelint {

Panel SurfaceMesh::panel(size_t t) const {
  const auto& tr = triangles[t];
  return Panel::from_vertices(nodes[tr[0]], nodes[tr[1]], nodes[tr[2]]);
}

std::vector<std::vector<int>> SurfaceMesh::node_triangles() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (size_t t = 0; t < triangles.size(); ++t)
    for (int v : triangles[t]) out[v].push_back(static_cast<int>(t));
  return out;
}

std::vector<std::vector<int>> SurfaceMesh::node_neighbors() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (const auto& tr : triangles)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) out[tr[i]].push_back(tr[j]);
  for (auto& v : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

double SurfaceMesh::signed_volume() const {
  double v = 0.0;
  for (const auto& tr : triangles)
    v += nodes[tr[0]].dot(nodes[tr[1]].cross(nodes[tr[2]]));
  return v / 6.0;
}

double SurfaceMesh::total_area() const {
  double a = 0.0;
  for (const auto& tr : triangles)
    a += 0.5 * (nodes[tr[1]] - nodes[tr[0]]).cross(nodes[tr[2]] - nodes[tr[0]]).norm();
  return a;
}

void validate_mesh(const SurfaceMesh& mesh) {
  const int n = static_cast<int>(mesh.nodes.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int v : tr)
      if (v < 0 || v >= n)
        throw MeshError("triangle " + std::to_string(t) + ": node index " + std::to_string(v) +
                        " out of range [0, " + std::to_string(n) + ")");
    if (tr[0] == tr[1] || tr[1] == tr[2] || tr[0] == tr[2])
      throw MeshError("triangle " + std::to_string(t) + ": repeated vertex");
    const Vec3 cr = (mesh.nodes[tr[1]] - mesh.nodes[tr[0]]).cross(mesh.nodes[tr[2]] - mesh.nodes[tr[0]]);
    if (!(cr.norm() > 0.0)) throw MeshError("triangle " + std::to_string(t) + ": zero area");
  }
  if (mesh.node_normals) {
    if (mesh.node_normals->size() != mesh.nodes.size())
      throw MeshError("node normal count does not match node count");
    for (size_t i = 0; i < mesh.node_normals->size(); ++i)
      if (std::abs((*mesh.node_normals)[i].norm() - 1.0) > 1e-12)
        throw MeshError("node normal " + std::to_string(i) + " is not unit length");
  }
}

SurfaceMesh parse_off(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> tokens;
  // Strip comments, then tokenize.
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  size_t pos = 0;
  auto next = [&](const char* what) -> const std::string& {
    if (pos >= tokens.size()) throw MeshError(std::string("OFF parse error: missing ") + what);
    return tokens[pos++];
  };
  auto num = [&](const char* what) {
    const std::string& s = next(what);
    try {
      size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw MeshError(std::string("OFF parse error: bad ") + what + " '" + s + "'");
    }
  };
  auto integer = [&](const char* what) {
    const double v = num(what);
    if (v != std::floor(v)) throw MeshError(std::string("OFF parse error: non-integer ") + what);
    return static_cast<long>(v);
  };
  if (next("header") != "OFF") throw MeshError("OFF parse error: missing OFF header");
  const long nv = integer("node count");
  const long nf = integer("face count");
  integer("edge count");
  if (nv < 0 || nf < 0) throw MeshError("OFF parse error: negative counts");
  SurfaceMesh m;
  m.nodes.resize(nv);
  for (long i = 0; i < nv; ++i) {
    const double x = num("coordinate"), y = num("coordinate"), z = num("coordinate");
    m.nodes[i] = Vec3(x, y, z);
  }
  m.triangles.resize(nf);
  for (long t = 0; t < nf; ++t) {
    if (integer("face size") != 3)
      throw MeshError("triangle " + std::to_string(t) + ": only triangular faces are supported");
    for (int k = 0; k < 3; ++k) m.triangles[t][k] = static_cast<int>(integer("face index"));
  }
  validate_mesh(m);
  return m;
}

SurfaceMesh parse_mesh_json(const std::string& text) {
  SurfaceMesh m;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& p : j.at("nodes")) m.nodes.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
    for (const auto& t : j.at("triangles"))
      m.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    if (j.contains("node_normals")) {
      std::vector<Vec3> n;
      for (const auto& p : j.at("node_normals"))
        n.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
      m.node_normals = std::move(n);
    }
  } catch (const nlohmann::json::exception& e) {
    throw MeshError(std::string("JSON parse error: ") + e.what());
  }
  validate_mesh(m);
  return m;
}

std::string to_off(const SurfaceMesh& m) {
  std::ostringstream out;
  out.precision(17);
  out << "OFF\n" << m.nodes.size() << ' ' << m.triangles.size() << " 0\n";
  for (const Vec3& p : m.nodes) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& t : m.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return out.str();
}

std::string to_mesh_json(const SurfaceMesh& m) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const Vec3& p : m.nodes) j["nodes"].push_back({p.x(), p.y(), p.z()});
  j["triangles"] = nlohmann::json::array();
  for (const auto& t : m.triangles) j["triangles"].push_back({t[0], t[1], t[2]});
  if (m.node_normals) {
    j["node_normals"] = nlohmann::json::array();
    for (const Vec3& p : *m.node_normals) j["node_normals"].push_back({p.x(), p.y(), p.z()});
  }
  return j.dump();
}

MeshFormat format_from_path(const std::string& path) {
  auto ends = [&](const std::string& s) {
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends(".json") || ends(".JSON")) return MeshFormat::JSON;
  if (ends(".off") || ends(".OFF")) return MeshFormat::OFF;
  throw MeshError("unknown mesh extension in '" + path + "' (expected .off or .json)");
}

SurfaceMesh load_mesh(const std::string& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return format == MeshFormat::OFF ? parse_off(ss.str()) : parse_mesh_json(ss.str());
}

SurfaceMesh load_mesh(const std::string& path) { return load_mesh(path, format_from_path(path)); }

void save_mesh(const SurfaceMesh& mesh, const std::string& path, MeshFormat format) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file '" + path + "'");
  out << (format == MeshFormat::OFF ? to_off(mesh) : to_mesh_json(mesh));
}

namespace {

SurfaceMesh icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SurfaceMesh m;
  m.nodes = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
             {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& p : m.nodes) p.normalize();
  m.triangles = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
                 {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (auto& tr : m.triangles) {
    const Vec3 &a = m.nodes[tr[0]], &b = m.nodes[tr[1]], &c = m.nodes[tr[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(tr[1], tr[2]);
  }
  return m;
}

}  // namespace

SurfaceMesh generate_sphere_mesh(int subdivisions) {
  if (subdivisions < 0) throw DomainError("subdivisions must be >= 0");
  SurfaceMesh m = icosahedron();
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.nodes.push_back((m.nodes[a] + m.nodes[b]).normalized());
      const int id = static_cast<int>(m.nodes.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& tr : m.triangles) {
      const int ab = midpoint(tr[0], tr[1]), bc = midpoint(tr[1], tr[2]), ca = midpoint(tr[2], tr[0]);
      next.push_back({tr[0], ab, ca});
      next.push_back({ab, tr[1], bc});
      next.push_back({ca, bc, tr[2]});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  return m;
}

SurfaceMesh generate_geodesic_sphere(int f) {
  if (f < 1) throw DomainError("frequency must be >= 1");
  const SurfaceMesh base = icosahedron();
  SurfaceMesh m;
  // Nodes shared between faces are identified by their integer weights on the
  // icosahedron vertices.
  std::map<std::vector<std::pair<int, int>>, int> index;
  auto node = [&](const std::array<int, 3>& tr, int i, int j) {
    const int k = f - i - j;
    std::vector<std::pair<int, int>> key;
    if (k) key.push_back({tr[0], k});
    if (i) key.push_back({tr[1], i});
    if (j) key.push_back({tr[2], j});
    std::sort(key.begin(), key.end());
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    Vec3 p = Vec3::Zero();
    for (const auto& [v, w] : key) p += w * base.nodes[v];
    m.nodes.push_back(p.normalized());
    const int id = static_cast<int>(m.nodes.size()) - 1;
    index.emplace(std::move(key), id);
    return id;
  };
  for (const auto& tr : base.triangles) {
    for (int i = 0; i < f; ++i) {
      for (int j = 0; i + j < f; ++j) {
        m.triangles.push_back({node(tr, i, j), node(tr, i + 1, j), node(tr, i, j + 1)});
        if (i + j + 2 <= f)
          m.triangles.push_back({node(tr, i + 1, j), node(tr, i + 1, j + 1), node(tr, i, j + 1)});
      }
    }
  }
  return m;
}

SurfaceMesh generate_torus_mesh(double major, double minor, int n_u, int n_v) {
  if (!(minor > 0.0 && minor < major)) throw DomainError("torus requires 0 < minor < major");
  if (n_u < 3 || n_v < 3) throw DomainError("torus requires n_u, n_v >= 3");
  SurfaceMesh m;
  m.nodes.reserve(static_cast<size_t>(n_u) * n_v);
  for (int i = 0; i < n_u; ++i) {
    const double u = 2.0 * kPi * i / n_u;
    for (int j = 0; j < n_v; ++j) {
      const double v = 2.0 * kPi * j / n_v;
      const double rr = major + minor * std::cos(v);
      m.nodes.emplace_back(rr * std::cos(u), rr * std::sin(u), minor * std::sin(v));
    }
  }
  auto id = [&](int i, int j) { return ((i + n_u) % n_u) * n_v + (j + n_v) % n_v; };
  for (int i = 0; i < n_u; ++i) {
    for (int j = 0; j < n_v; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

}  // namespace panelint
