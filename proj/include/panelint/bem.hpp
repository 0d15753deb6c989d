#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "panelint/curvature.hpp"
#include "panelint/mesh.hpp"
#include "panelint/panel_integrals.hpp"
#include "panelint/qsa.hpp"

namespace panelint {

enum class SingularStrategy { QSA, Zero, Centroid, CentroidStar };
enum class Regularization { PinNode, MeanZero };

const char* strategy_name(SingularStrategy s);
SingularStrategy parse_strategy(const std::string& name);

struct BemSurface {
  SurfaceMesh mesh;
  std::optional<SdfProbe> probe;  // surface descriptor with outward gradient
  // Reverse triangle orientation (and the probe) so normals point out of the
  // computational domain, e.g. for a hole inside an outer boundary.
  bool reverse = false;
};

// All surfaces merged into one node/triangle numbering, with normals and
// fundamental forms at every node.
struct BemModel {
  SurfaceMesh mesh;
  std::vector<Panel> panels;
  std::vector<Vec3> normals;
  std::vector<FundamentalForm> forms;
  std::vector<int> node_surface;
  std::vector<int> triangle_surface;
  std::vector<std::optional<SdfProbe>> probes;
  std::vector<std::vector<int>> node_triangles;
  std::vector<double> node_weights;  // lumped areas
};

// Normals and forms come from the probe when `use_probe_geometry` and a probe
// is present, otherwise from the mesh estimators.
BemModel build_model(const std::vector<BemSurface>& surfaces, bool use_probe_geometry = true);

struct BemSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

// Contribution of triangle t, incident to collocation node i, to the three
// vertex columns.
std::array<double, 3> incident_contribution(const BemModel& model, SingularStrategy strategy,
                                            int node, int tri);

using BoundaryData = std::function<double(const Vec3& x, const Vec3& normal, int surface)>;

BemSystem assemble(const BemModel& model, SingularStrategy strategy, const BoundaryData& b);

// Row sums of the K part (the integral of K over the whole surface at each node),
// split into the non-incident part and the per-strategy incident part.
std::vector<double> far_row_sums(const BemModel& model);
std::vector<double> incident_row_sums(const BemModel& model, SingularStrategy strategy);

struct SphereIdentityResult {
  std::vector<double> row_sums;
  std::vector<double> rel_errors;
  double max_rel_error = 0.0;
};
SphereIdentityResult sphere_identity_test(const BemModel& model, SingularStrategy strategy);
SphereIdentityResult sphere_identity_from_parts(const std::vector<double>& far,
                                                const std::vector<double>& incident);

struct BemSolution {
  Eigen::VectorXd gamma;
  double offset = 0.0;           // constant added to the single-layer potential
  double residual = 0.0;         // |A gamma - b'| / |b'|
  double rhs_projection = 0.0;   // |b - b'| / |b|
  bool bordered = false;         // fell back to the bordered system
};

// b' is b minus its area-weighted mean. gamma solves A gamma = b' by dense LU;
// the regularization only fixes the additive constant of u: PinNode makes
// u(node 0) = 0, MeanZero makes the area-weighted mean of u over the nodes 0.
// If the LU solution is not usable, A is bordered with a constant column and
// an area-weight row instead.
BemSolution solve(const BemModel& model, const BemSystem& system, Regularization reg);

// Single-layer potential of gamma; the overload adds the solution offset.
std::vector<double> evaluate_potential(const BemModel& model, const Eigen::VectorXd& gamma,
                                       const std::vector<Vec3>& points);
std::vector<double> evaluate_potential(const BemModel& model, const BemSolution& sol,
                                       const std::vector<Vec3>& points);
std::vector<Vec3> evaluate_gradient(const BemModel& model, const Eigen::VectorXd& gamma,
                                    const std::vector<Vec3>& points);

// ---- demo problems ----

// Neumann data u_n = x1 on the outer surface, 0 elsewhere.
double x1_flux_data(const Vec3& x, const Vec3& normal, int surface);
// u_n = cos(phi) with phi = atan2(x2, x1) on surface 0, 0 on the others.
double cos_phi_flux_data(const Vec3& x, const Vec3& normal, int surface);

// n points uniformly inside the ball of the given radius, seeded.
std::vector<Vec3> interior_probe_points(int n, double radius, std::uint64_t seed);

struct LinearAgreement {
  double offset = 0.0;     // mean of u - x1
  double max_error = 0.0;  // max |u - x1 - offset| / max |x1|
};
LinearAgreement x1_agreement(const std::vector<Vec3>& points, const std::vector<double>& u);

// Torus (axis z, centred at the origin) surface points at u = (2i+1) pi / 8,
// v = j pi / 4, with outward torus normals. The symmetric stagnation points
// at u in {0, pi} are avoided.
struct SurfaceSample {
  Vec3 foot;
  Vec3 normal;
};
std::vector<SurfaceSample> torus_samples(double major, double minor);

struct OrthogonalityResult {
  std::vector<double> ratio;  // |grad u . n| / |grad u| per sample
  double worst = 0.0;
  double mean = 0.0;
};
// Gradient sampled at foot + delta n and foot + 2 delta n; the normal
// component is linearly extrapolated to the surface, the tangential part is
// taken at delta.
OrthogonalityResult orthogonality_diagnostic(const BemModel& model, const Eigen::VectorXd& gamma,
                                             const std::vector<SurfaceSample>& samples,
                                             double delta);

struct FluxResult {
  double net = 0.0;
  double absolute = 0.0;
};
// Flux of grad u through the sphere |x - center| = radius, centroid rule on
// an icosphere with the given subdivision level.
FluxResult sphere_flux(const BemModel& model, const Eigen::VectorXd& gamma, const Vec3& center,
                       double radius, int subdivisions);

}  // namespace panelint
