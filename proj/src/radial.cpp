#include "panelint/radial.hpp"

#include <cmath>
#include <string>

#include "panelint/types.hpp"

namespace panelint {

namespace {

double safe_acos(double x) {
  if (x >= 1.0) return 0.0;
  if (x <= -1.0) return kPi;
  return std::acos(x);
}

// arctan(x)/c with x = c z / d, continued to c -> 0 by its odd series.
double atan_over_c(double c, double z, double d) {
  const double x = c * z / d;
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return (z / d) * (1.0 - x2 / 3.0 + x2 * x2 / 5.0 - x2 * x2 * x2 / 7.0);
  }
  return std::atan(x) / c;
}

[[noreturn]] void diverge(RadialKind kind) {
  throw DivergentIntegral(std::string("radial primitive ") + radial_name(kind) +
                          " diverges at r = c = 0");
}

}  // namespace

const char* radial_name(RadialKind kind) {
  switch (kind) {
    case RadialKind::R1: return "R1";
    case RadialKind::R2: return "R2";
    case RadialKind::R3: return "R3";
    case RadialKind::R4: return "R4";
    case RadialKind::R5: return "R5";
    case RadialKind::R6cubic: return "R6cubic";
    case RadialKind::J1: return "J1";
    case RadialKind::J2: return "J2";
    case RadialKind::J3: return "J3";
  }
  return "?";
}

double radial_primitive(RadialKind kind, double r, double c, double d) {
  c = std::abs(c);
  if (c < kRadialClamp) c = 0.0;
  if (d < kRadialClamp) d = 0.0;
  if (r < 0.0 || r < d * (1.0 - 1e-12))
    throw DomainError("radial primitive requires r >= d >= 0");
  if (r < d) r = d;

  const double c2 = c * c;
  const double rho = std::sqrt(r * r + c2);
  const double q = std::sqrt(std::max(r * r - d * d, 0.0));
  const double cd2 = c2 + d * d;

  switch (kind) {
    case RadialKind::R1:
      if (rho == 0.0) diverge(kind);
      return -1.0 / rho;

    case RadialKind::R2: {
      if (rho == 0.0) diverge(kind);
      if (d == 0.0) return -0.5 * kPi / rho;
      const double z = q / rho;
      return -safe_acos(d / r) / rho + atan_over_c(c, z, d);
    }

    case RadialKind::R3:
      if (rho == 0.0) diverge(kind);
      return std::log(rho + q) - q / rho;

    case RadialKind::R4:
      if (rho == 0.0) return 0.0;
      return (r * r + 2.0 * c2) / rho;

    case RadialKind::R5: {
      if (rho == 0.0) return 0.0;
      const double w = (r * r + 2.0 * c2) / rho;
      if (d == 0.0) return 0.5 * kPi * w;
      const double z = q / rho;
      return -2.0 * c * std::atan(c * z / d) + w * safe_acos(d / r) - d * std::atanh(z);
    }

    case RadialKind::R6cubic: {
      if (cd2 == 0.0) return 0.5 * r * r;
      const double z = q / rho;
      return 0.5 * z * (r * r + 2.0 * d * d + 3.0 * c2) - 1.5 * cd2 * std::log(rho + q);
    }

    case RadialKind::J1:
      return rho;

    case RadialKind::J2: {
      if (d == 0.0) return 0.5 * kPi * rho;
      double s = c * q / (r * std::sqrt(cd2));
      s = std::min(s, 1.0);
      return rho * safe_acos(d / r) - c * std::asin(s) - d * std::atanh(q / rho);
    }

    case RadialKind::J3:
      if (cd2 == 0.0) return 0.5 * r * r;
      return 0.5 * (rho * q - cd2 * std::log(rho + q));
  }
  return 0.0;
}

double definite_radial(RadialKind kind, double r_lo, double r_hi, double c, double d) {
  if (r_hi == r_lo) return 0.0;
  return radial_primitive(kind, r_hi, c, d) - radial_primitive(kind, r_lo, c, d);
}

}  // namespace panelint
