#include <CLI11.hpp>
#include <iostream>

#include "panelint/cli.hpp"

using namespace panelint;
namespace pc = panelint::cli;

namespace {

Vec3 vec3(const std::vector<double>& v) { return Vec3(v[0], v[1], v[2]); }

void interval(CLI::App* cmd, const std::string& name, std::vector<double>& v, const std::string& help) {
  cmd->add_option(name, v, help)->delimiter(',')->expected(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"panelint: closed-form and QSA panel integrals for 3D Laplace kernels"};
  app.require_subcommand(1);
  int rc = pc::kOk;

  // tri-integrate
  pc::TriIntegrateOptions ti;
  std::vector<double> v1{0, 0, 0}, v2{1, 0, 0}, v3{0, 1, 0}, tx{0.25, 0.25, 0}, tn{0, 0, 1};
  std::string sdf;
  auto* tri = app.add_subcommand("tri-integrate", "integrate K or G times a density over one panel");
  for (auto [name, vec] : {std::pair{"--v1", &v1}, {"--v2", &v2}, {"--v3", &v3}, {"--target", &tx},
                           {"--normal", &tn}})
    tri->add_option(name, *vec, "x,y,z")->delimiter(',')->expected(3)->capture_default_str();
  tri->add_option("--kernel", ti.kernel, "K or G")->capture_default_str();
  tri->add_option("--method", ti.method, "analytic, qsa or oracle")->capture_default_str();
  tri->add_option("--poly", ti.poly, "one, yx, <number> or vertex:a,b,c")->capture_default_str();
  tri->add_option("--sdf", sdf, "surface: sphere[:cx,cy,cz,r], plane:nx,ny,nz,offset, torus:R,r");
  tri->add_flag("--check", ti.check, "also evaluate the adaptive oracle and report the difference");
  tri->add_option("--oracle-tol", ti.oracle_tol, "oracle relative tolerance")->capture_default_str();
  tri->callback([&] {
    ti.v1 = vec3(v1), ti.v2 = vec3(v2), ti.v3 = vec3(v3), ti.target = vec3(tx), ti.normal = vec3(tn);
    if (!sdf.empty()) ti.sdf = sdf;
    rc = pc::run_tri_integrate(ti, std::cout, std::cerr);
  });

  // sweep-near-singular
  pc::NearSweepOptions ns;
  std::string ns_kernel = "K", ns_poly = "one", ns_out;
  std::vector<double> ns_c{-0.01, 0.01};
  auto* nsc = app.add_subcommand("sweep-near-singular", "closed forms against the oracle, targets near the panel");
  nsc->add_option("--trials", ns.config.trials)->capture_default_str()->check(CLI::PositiveNumber);
  nsc->add_option("--seed", ns.config.seed)->capture_default_str();
  nsc->add_option("--coord-range", ns.config.coord_range, "vertex x, y uniform in [-r, r]")->capture_default_str();
  interval(nsc, "--c-range", ns_c, "target height interval lo,hi");
  nsc->add_option("--kernel", ns_kernel, "K or G")->check(CLI::IsMember({"K", "G"}))->capture_default_str();
  nsc->add_option("--poly", ns_poly, "one or yx")->check(CLI::IsMember({"one", "yx"}))->capture_default_str();
  nsc->add_option("--oracle-tol", ns.config.oracle_tol)->capture_default_str();
  nsc->add_option("-o,--output", ns_out, "CSV path (stdout when absent)");
  nsc->callback([&] {
    ns.config.c_lo = ns_c[0], ns.config.c_hi = ns_c[1];
    ns.config.kernel = ns_kernel == "K" ? KernelKind::K : KernelKind::G;
    ns.config.density = ns_poly == "one" ? SweepDensity::One : SweepDensity::Yx;
    if (!ns_out.empty()) ns.output = ns_out;
    rc = pc::run_sweep_near_singular(ns, std::cout, std::cerr);
  });

  // sweep-singular
  pc::SingularSweepOptions ss;
  std::vector<double> ss_range{ss.config.range_lo, ss.config.range_hi};
  std::string ss_out;
  auto* ssc = app.add_subcommand("sweep-singular", "QSA, zero and centroid rules against the curved-patch oracle");
  ssc->add_option("--trials", ss.config.trials)->capture_default_str()->check(CLI::PositiveNumber);
  ssc->add_option("--seed", ss.config.seed)->capture_default_str();
  interval(ssc, "--coord-range", ss_range, "log-uniform half-range interval lo,hi");
  ssc->add_option("--bins", ss.bins, "bins for the slope fit")->capture_default_str();
  ssc->add_option("--oracle-tol", ss.config.oracle_tol)->capture_default_str();
  ssc->add_option("-o,--output", ss_out, "CSV path (stdout when absent)");
  ssc->callback([&] {
    ss.config.range_lo = ss_range[0], ss.config.range_hi = ss_range[1];
    if (!ss_out.empty()) ss.output = ss_out;
    rc = pc::run_sweep_singular(ss, std::cout, std::cerr);
  });

  // sphere-test
  pc::SphereTestOptions st;
  std::string st_out;
  auto* stc = app.add_subcommand("sphere-test", "row sums of K on sphere meshes against 1/2");
  stc->add_option("--subdivisions", st.subdivisions, "icosphere levels")->delimiter(',')->capture_default_str();
  stc->add_option("--geodesic", st.geodesic, "geodesic frequencies (10 f^2 + 2 nodes)")->delimiter(',');
  stc->add_option("--strategies", st.strategies, "qsa, zero, centroid, centroid-star")->delimiter(',')->capture_default_str();
  stc->add_option("-o,--output", st_out, "CSV path (stdout when absent)");
  stc->callback([&] {
    if (!st_out.empty()) st.output = st_out;
    rc = pc::run_sphere_test(st, std::cout, std::cerr);
  });

  // curvature
  pc::CurvatureOptions cv;
  std::string cv_mesh, cv_out;
  int cv_sphere = -1;
  std::vector<double> cv_torus;
  auto* cvc = app.add_subcommand("curvature", "per-node second fundamental form estimates");
  cvc->add_option("--mesh", cv_mesh, "OFF or JSON mesh")->check(CLI::ExistingFile);
  cvc->add_option("--sphere", cv_sphere, "generated icosphere level");
  cvc->add_option("--torus", cv_torus, "generated torus R,r,n_u,n_v")->delimiter(',')->expected(4);
  cvc->add_option("-o,--output", cv_out, "CSV path (stdout when absent)");
  cvc->callback([&] {
    if (!cv_mesh.empty()) cv.mesh = cv_mesh;
    if (cv_sphere >= 0) cv.sphere = cv_sphere;
    if (!cv_torus.empty()) cv.torus = cv_torus;
    if (!cv_out.empty()) cv.output = cv_out;
    rc = pc::run_curvature(cv, std::cout, std::cerr);
  });

  // bem
  pc::BemOptions bo;
  std::string bo_out, bo_json;
  int bo_sphere = -1;
  std::vector<double> bo_torus;
  auto* bem = app.add_subcommand("bem", "interior Neumann problem by collocation");
  bem->add_option("--mesh", bo.meshes, "mesh files; the first is the outer boundary unless --sphere is given");
  bem->add_option("--sphere", bo_sphere, "generated unit sphere, icosphere level");
  bem->add_option("--torus", bo_torus, "generated torus hole R,r,n_u,n_v")->delimiter(',')->expected(4);
  bem->add_option("--bc", bo.bc, "x1-flux or cos-phi")->capture_default_str();
  bem->add_option("--strategy", bo.strategy, "qsa, zero, centroid, centroid-star")->capture_default_str();
  bem->add_option("--regularization", bo.regularization, "pin or mean")->capture_default_str();
  bem->add_option("--grid", bo.grid, "z = 0 slice resolution over [-1, 1]^2")->capture_default_str();
  bem->add_option("--probes", bo.probes, "interior probes for the x1-flux check")->capture_default_str();
  bem->add_option("--seed", bo.seed, "probe seed")->capture_default_str();
  bem->add_option("-o,--output", bo_out, "contour CSV path (stdout when absent)");
  bem->add_option("--json", bo_json, "solution and diagnostics JSON path");
  bem->callback([&] {
    if (bo_sphere >= 0) bo.sphere = bo_sphere;
    if (!bo_torus.empty()) bo.torus = bo_torus;
    if (!bo_out.empty()) bo.output = bo_out;
    if (!bo_json.empty()) bo.json = bo_json;
    rc = pc::run_bem(bo, std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pc::kUsage;
  }
  return rc;
}
