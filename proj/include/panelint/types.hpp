#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace panelint {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kFourPi = 4.0 * kPi;

// Thrown when a closed form is evaluated where the integral does not exist,
// e.g. the hypersingular K kernel with the target on a flat panel.
class DivergentIntegral : public std::runtime_error {
 public:
  explicit DivergentIntegral(const std::string& what) : std::runtime_error(what) {}
};

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace panelint
