#include "panelint/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "panelint/curvature.hpp"
#include "panelint/oracle.hpp"
#include "panelint/panel_integrals.hpp"
#include "panelint/qsa.hpp"

namespace panelint {

namespace {

const Vec3 kSphereCenter(0.0, 0.0, -1.0);

// Independent stream per trial so rows do not depend on evaluation order.
std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

Vec3 sphere_vertex(double x, double y) {
  return Vec3(x, y, std::sqrt(1.0 - x * x - y * y) - 1.0);
}

Panel random_panel(std::mt19937_64& rng, double range) {
  std::uniform_real_distribution<double> U(-range, range);
  for (;;) {
    Vec3 v[3];
    for (auto& p : v) {
      const double x = U(rng), y = U(rng);
      p = sphere_vertex(x, y);
    }
    const Vec3 n = (v[1] - v[0]).cross(v[2] - v[0]);
    // Keep the orientation outward from the sphere and reject slivers that
    // the panel constructor would call degenerate.
    if (n.dot(v[0] - kSphereCenter) < 0.0) std::swap(v[1], v[2]);
    try {
      return Panel::from_vertices(v[0], v[1], v[2]);
    } catch (const DomainError&) {
    }
  }
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

double smallest_angle(const Panel& p) {
  double m = kPi;
  for (int k = 0; k < 3; ++k) {
    const Vec3 a = p.vertex((k + 1) % 3) - p.vertex(k), b = p.vertex((k + 2) % 3) - p.vertex(k);
    m = std::min(m, std::atan2(a.cross(b).norm(), a.dot(b)));
  }
  return m;
}

Panel sweep_panel(std::uint64_t seed, int trial, double coord_range, double* c_out, double c_lo,
                  double c_hi) {
  auto rng = trial_rng(seed, trial);
  const Panel p = random_panel(rng, coord_range);
  if (c_out) *c_out = std::uniform_real_distribution<double>(c_lo, c_hi)(rng);
  return p;
}

std::vector<SweepRow> near_singular_sweep(const NearSingularConfig& cfg) {
  if (cfg.trials <= 0) throw DomainError("sweep needs trials > 0");
  std::vector<SweepRow> rows;
  rows.reserve(cfg.trials);
  const Vec3 n = Vec3(1.0, 1.0, 1.0).normalized();
  OracleOptions opt;
  opt.rel_tol = cfg.oracle_tol;
  opt.abs_tol = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    double c = 0.0;
    const Panel p = sweep_panel(cfg.seed, t, cfg.coord_range, &c, cfg.c_lo, cfg.c_hi);
    const Target target{Vec3(0.0, 0.0, c), n};
    const PanelPolynomial poly = cfg.density == SweepDensity::One
                                     ? PanelPolynomial::constant(1.0)
                                     : PanelPolynomial::world_affine(p, 0.0, Vec3::UnitX());
    SweepRow r;
    r.trial = t;
    r.diameter = p.diameter();
    r.smallest_angle = smallest_angle(p);
    r.value_method = cfg.kernel == KernelKind::K ? integrate_k_panel(p, target, poly)
                                                 : integrate_g_panel(p, target, poly);
    const bool yx = cfg.density == SweepDensity::Yx;
    const Vec3 off = target.x - p.v1;
    const QuadratureResult q = adaptive_patch_local(
        [&](const Vec3& dy) {
          const Vec3 d = off - dy;
          const double w = yx ? p.v1.x() + dy.x() : 1.0;
          const double len = d.norm();
          return cfg.kernel == KernelKind::K ? w * d.dot(n) / (kFourPi * len * len * len)
                                             : -w / (kFourPi * len);
        },
        flat_chart(p.v1, p.v2, p.v3), opt);
    r.value_oracle = q.value;
    r.oracle_converged = q.converged;
    r.rel_diff = rel(r.value_method, r.value_oracle);
    rows.push_back(r);
  }
  return rows;
}

const char* singular_method_name(SingularMethod m) {
  switch (m) {
    case SingularMethod::QSA: return "qsa";
    case SingularMethod::Zero: return "zero";
    case SingularMethod::Centroid: return "centroid";
    case SingularMethod::CentroidStar: return "centroid-star";
  }
  return "?";
}

std::vector<SingularRow> singular_sweep(const SingularConfig& cfg) {
  if (cfg.trials <= 0) throw DomainError("sweep needs trials > 0");
  if (!(cfg.range_lo > 0.0 && cfg.range_hi >= cfg.range_lo)) throw DomainError("bad range");
  std::vector<SingularRow> rows;
  rows.reserve(cfg.trials);
  const SdfProbe sphere = sphere_probe(kSphereCenter, 1.0);
  OracleOptions opt;
  opt.rel_tol = cfg.oracle_tol;
  opt.abs_tol = 0.0;
  opt.singular_corner = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    auto rng = trial_rng(cfg.seed, t);
    const double range = std::exp(std::uniform_real_distribution<double>(
        std::log(cfg.range_lo), std::log(cfg.range_hi))(rng));
    const Panel p = random_panel(rng, range);
    const Chart chart = sphere_chart(p.v1, p.v2, p.v3, kSphereCenter, 1.0);
    // v1 is on the sphere only up to rounding; any offset between target and
    // anchor would turn the kernel into an unintegrable r^-3 near the corner.
    const Vec3 x = chart.anchor;
    const Vec3 nx = (x - kSphereCenter).normalized();
    auto kernel = [&](const Vec3& y) {
      const Vec3 d = x - y;
      return d.dot(nx) / (kFourPi * std::pow(d.norm(), 3));
    };

    SingularRow r;
    r.trial = t;
    r.diameter = p.diameter();
    r.smallest_angle = smallest_angle(p);
    const QuadratureResult q = adaptive_patch_local(
        [&](const Vec3& dy) { return -dy.dot(nx) / (kFourPi * std::pow(dy.norm(), 3)); },
        chart, opt);
    r.oracle = q.value;
    r.oracle_converged = q.converged;

    r.value[0] = qsa_on_boundary(p, Target{x, nx}, probe_fundamental_form(sphere, x),
                                 PanelPolynomial::constant(1.0));
    r.value[1] = 0.0;
    r.value[2] = kernel(p.centroid()) * p.area();
    r.value[3] = kernel(foot_point(sphere, p.centroid()).foot) * p.area();
    for (int m = 0; m < 4; ++m) r.rel_diff[m] = rel(r.value[m], r.oracle);
    rows.push_back(r);
  }
  return rows;
}

SlopeFit binned_slope(const std::vector<double>& diameter, const std::vector<double>& err, int bins) {
  if (diameter.size() != err.size() || diameter.empty() || bins < 2)
    throw DomainError("binned_slope: bad input");
  const auto [lo_it, hi_it] = std::minmax_element(diameter.begin(), diameter.end());
  const double lo = std::log10(*lo_it), hi = std::log10(*hi_it);
  std::vector<int> worst(bins, -1);
  for (size_t i = 0; i < diameter.size(); ++i) {
    int b = hi > lo ? static_cast<int>((std::log10(diameter[i]) - lo) / (hi - lo) * bins) : 0;
    b = std::clamp(b, 0, bins - 1);
    if (err[i] > 0.0 && (worst[b] < 0 || err[i] > err[worst[b]])) worst[b] = static_cast<int>(i);
  }
  SlopeFit fit;
  for (int b = 0; b < bins; ++b)
    if (worst[b] >= 0) {
      fit.bin_diameter.push_back(diameter[worst[b]]);
      fit.bin_max.push_back(err[worst[b]]);
    }
  const size_t m = fit.bin_diameter.size();
  if (m < 2) throw DomainError("binned_slope: fewer than two populated bins");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    const double X = std::log10(fit.bin_diameter[i]), Y = std::log10(fit.bin_max[i]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

}  // namespace panelint
