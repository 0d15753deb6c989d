#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "panelint/cli.hpp"
#include "panelint/mesh.hpp"

using namespace panelint;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("PANELINT_CLI");
  return p ? p : "";
}

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / ("panelint_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args) {
  static int n = 0;
  const fs::path d = scratch();
  const fs::path o = d / ("out" + std::to_string(n)), e = d / ("err" + std::to_string(n));
  ++n;
  const std::string cmd = "\"" + cli_path() + "\" " + args + " >" + o.string() + " 2>" + e.string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(o), slurp(e)};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

const std::string kVertexPanel =
    "--v1 0,0,1 --v2 0.05,0.01,0.9986991538997118 --v3 0.01,0.04,0.9991496384426108 "
    "--target 0,0,1 --normal 0,0,1";

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0})
    CHECK(std::stod(cli::fmt(v)) == v);
  CHECK(cli::fmt(0.5) == "0.5");
}

TEST_CASE("in-process commands write versioned CSV") {
  std::ostringstream out, err;
  cli::NearSweepOptions o;
  o.config.trials = 3;
  CHECK(cli::run_sweep_near_singular(o, out, err) == cli::kOk);
  std::istringstream lines(out.str());
  std::string l;
  std::getline(lines, l);
  CHECK(l == "# panelint sweep-near-singular v1");
  std::getline(lines, l);
  CHECK(l.rfind("# kernel=K poly=one trials=3 seed=1", 0) == 0);
  std::getline(lines, l);
  CHECK(l == "trial,diameter,smallest_angle,value_method,value_oracle,rel_diff");

  std::ostringstream out2, err2;
  cli::SphereTestOptions s;
  s.subdivisions = {1};
  s.strategies = {"qsa", "duffy"};
  CHECK(cli::run_sphere_test(s, out2, err2) == cli::kUsage);
  CHECK(err2.str().find("duffy") != std::string::npos);
}

TEST_CASE("divergence and usage exit codes") {
  REQUIRE(!cli_path().empty());
  Run r = run("tri-integrate " + kVertexPanel);
  CHECK(r.code == cli::kDivergent);
  CHECK(r.err.find("--method qsa") != std::string::npos);

  r = run("tri-integrate " + kVertexPanel + " --method qsa --sdf sphere --check");
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::isfinite(j["value"].get<double>()));
  CHECK(j["oracle_surface"] == "sphere");
  CHECK(j["rel_diff"].get<double>() < 1e-2);

  r = run("tri-integrate --method qsa");
  CHECK(r.code == cli::kUsage);
  r = run("tri-integrate --v1 1,2");
  CHECK(r.code == cli::kUsage);
  r = run("no-such-command");
  CHECK(r.code == cli::kUsage);
  r = run("--help");
  CHECK(r.code == cli::kOk);
}

TEST_CASE("missing and malformed mesh files are clean errors") {
  Run r = run("bem --mesh /nonexistent/mesh.off --grid 0");
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("error:") == 0);
  const fs::path bad = scratch() / "bad.off";
  std::ofstream(bad) << "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n";
  r = run("bem --mesh " + bad.string() + " --grid 0");
  CHECK(r.code == cli::kUsage);
  r = run("curvature --mesh " + bad.string());
  CHECK(r.code == cli::kUsage);
}

TEST_CASE("bem on a mesh file matches the generated sphere") {
  const fs::path m = scratch() / "s2.off";
  save_mesh(generate_sphere_mesh(2), m.string(), MeshFormat::OFF);
  const fs::path j1 = scratch() / "f.json", j2 = scratch() / "g.json";
  Run a = run("bem --mesh " + m.string() + " --grid 5 --json " + j1.string());
  Run b = run("bem --sphere 2 --grid 5 --json " + j2.string());
  REQUIRE(a.code == cli::kOk);
  REQUIRE(b.code == cli::kOk);
  CHECK(first_line(a.out) == "# panelint bem v1");
  const auto ja = nlohmann::json::parse(slurp(j1)), jb = nlohmann::json::parse(slurp(j2));
  // Estimated curvature on the file mesh, exact on the generated one.
  CHECK(ja["x1_agreement"]["max_error"].get<double>() < 0.05);
  CHECK(jb["x1_agreement"]["max_error"].get<double>() < 0.05);
  CHECK(ja["residual"].get<double>() < 1e-10);
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::string> cmds = {
      "sweep-near-singular --trials 20 --seed 7 --kernel G --poly yx",
      "sweep-singular --trials 12 --seed 7 --bins 3",
      "sphere-test --subdivisions 1,2",
      "curvature --torus 0.4,0.2,16,8",
      "bem --sphere 1 --grid 6",
  };
  for (const auto& c : cmds) {
    const Run a = run(c), b = run(c);
    INFO(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(first_line(a.out).rfind("# panelint ", 0) == 0);
  }
  CHECK(run("sweep-near-singular --trials 20 --seed 8").out !=
        run("sweep-near-singular --trials 20 --seed 7").out);
}
