#pragma once

#include <cstdint>
#include <vector>

#include "panelint/geometry.hpp"

namespace panelint {

enum class KernelKind { K, G };
enum class SweepDensity { One, Yx };  // p = 1 or p = y_x (world x coordinate)

struct SweepRow {
  int trial = 0;
  double diameter = 0.0;
  double smallest_angle = 0.0;
  double value_method = 0.0;
  double value_oracle = 0.0;
  double rel_diff = 0.0;
  bool oracle_converged = true;
};

// Panels with vertices (x, y, sqrt(1 - x^2 - y^2) - 1), i.e. on the unit sphere
// centred at (0,0,-1) and touching the origin, x and y uniform in [-range, range].
struct NearSingularConfig {
  int trials = 2000;
  std::uint64_t seed = 1;
  double coord_range = 0.01;
  double c_lo = -0.01, c_hi = 0.01;
  KernelKind kernel = KernelKind::K;
  SweepDensity density = SweepDensity::One;
  double oracle_tol = 1e-10;
};

// Target (0,0,c), n(x) = (1,1,1)/sqrt(3); closed forms against the adaptive oracle.
std::vector<SweepRow> near_singular_sweep(const NearSingularConfig& cfg);

enum class SingularMethod { QSA, Zero, Centroid, CentroidStar };
const char* singular_method_name(SingularMethod m);

struct SingularRow {
  int trial = 0;
  double diameter = 0.0;
  double smallest_angle = 0.0;
  double oracle = 0.0;
  bool oracle_converged = true;
  double value[4] = {0, 0, 0, 0};     // indexed by SingularMethod
  double rel_diff[4] = {0, 0, 0, 0};
};

// Same panel family with the half-range drawn log-uniformly from
// [range_lo, range_hi] per trial. Target is the first vertex with the sphere
// normal there; the oracle integrates K over the spherical patch.
struct SingularConfig {
  int trials = 2000;
  std::uint64_t seed = 1;
  double range_lo = 5e-4, range_hi = 5e-2;
  double oracle_tol = 1e-10;
};

std::vector<SingularRow> singular_sweep(const SingularConfig& cfg);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> bin_diameter, bin_max;
};

// Least-squares line through (log10 d, log10 max err) of the per-bin maxima,
// `bins` equal bins in log10 d. The point of each bin is its worst trial.
SlopeFit binned_slope(const std::vector<double>& diameter, const std::vector<double>& err, int bins);

// Panel of trial `trial` under `seed`, for reproducing single rows.
Panel sweep_panel(std::uint64_t seed, int trial, double coord_range, double* c_out = nullptr,
                  double c_lo = 0.0, double c_hi = 0.0);

double smallest_angle(const Panel& p);

}  // namespace panelint
