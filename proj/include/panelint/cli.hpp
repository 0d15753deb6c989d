#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "panelint/sweep.hpp"

namespace panelint::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDivergent = 2;

struct TriIntegrateOptions {
  Vec3 v1{0, 0, 0}, v2{1, 0, 0}, v3{0, 1, 0};
  Vec3 target{0.25, 0.25, 0.0};
  Vec3 normal{0, 0, 1};
  std::string kernel = "K";        // K or G
  std::string method = "analytic"; // analytic, qsa, oracle
  std::string poly = "one";        // one, yx, a number, or vertex:a,b,c
  // "sphere", "sphere:cx,cy,cz,r", "plane:nx,ny,nz,offset" or "torus:R,r"
  std::optional<std::string> sdf;
  bool check = false;              // also run the oracle and report the difference
  double oracle_tol = 1e-10;
};

struct NearSweepOptions {
  NearSingularConfig config;
  std::optional<std::string> output;
};

struct SingularSweepOptions {
  SingularConfig config;
  int bins = 8;
  std::optional<std::string> output;
};

struct SphereTestOptions {
  std::vector<int> subdivisions{2, 3};
  std::vector<int> geodesic;  // frequencies, 10 f^2 + 2 nodes
  std::vector<std::string> strategies{"qsa", "zero", "centroid", "centroid-star"};
  std::optional<std::string> output;
};

struct CurvatureOptions {
  std::optional<std::string> mesh;
  std::optional<int> sphere;                // subdivision level
  std::optional<std::vector<double>> torus; // R, r, n_u, n_v
  std::optional<std::string> output;
};

struct BemOptions {
  std::vector<std::string> meshes;           // first is the outer surface
  std::optional<int> sphere;                 // generated unit sphere, subdivision level
  std::optional<std::vector<double>> torus;  // generated hole R, r, n_u, n_v
  std::string bc = "x1-flux";
  std::string strategy = "qsa";
  std::string regularization = "pin";
  int grid = 41;                             // z = 0 slice, grid x grid over [-1, 1]^2
  int probes = 20;
  std::uint64_t seed = 1;
  std::optional<std::string> output;         // contour CSV (stdout when absent)
  std::optional<std::string> json;           // solution and diagnostics
};

int run_tri_integrate(const TriIntegrateOptions& o, std::ostream& out, std::ostream& err);
int run_sweep_near_singular(const NearSweepOptions& o, std::ostream& out, std::ostream& err);
int run_sweep_singular(const SingularSweepOptions& o, std::ostream& out, std::ostream& err);
int run_sphere_test(const SphereTestOptions& o, std::ostream& out, std::ostream& err);
int run_curvature(const CurvatureOptions& o, std::ostream& out, std::ostream& err);
int run_bem(const BemOptions& o, std::ostream& out, std::ostream& err);

// Shortest decimal that round-trips.
std::string fmt(double v);

}  // namespace panelint::cli
