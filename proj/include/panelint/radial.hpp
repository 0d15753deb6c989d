#pragma once

namespace panelint {

// Radial antiderivatives, with rho = sqrt(r^2+c^2) and q = sqrt(r^2-d^2):
//   R1      r / rho^3
//   R2      r acos(d/r) / rho^3
//   R3      r q / rho^3
//   R4      r^3 / rho^3
//   R5      r^3 acos(d/r) / rho^3
//   R6cubic r q^3 / rho^3
//   J1      r / rho
//   J2      r acos(d/r) / rho
//   J3      r q / rho
enum class RadialKind { R1, R2, R3, R4, R5, R6cubic, J1, J2, J3 };

const char* radial_name(RadialKind kind);

// Below this magnitude c and d are snapped to zero.
inline constexpr double kRadialClamp = 1e-14;
// Small-argument threshold for the arctan series in R2.
inline constexpr double kSeriesThreshold = 1e-6;

double radial_primitive(RadialKind kind, double r, double c, double d);
double definite_radial(RadialKind kind, double r_lo, double r_hi, double c, double d);

}  // namespace panelint
