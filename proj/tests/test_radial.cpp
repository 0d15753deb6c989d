#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>

#include "panelint/radial.hpp"
#include "panelint/types.hpp"

using namespace panelint;

namespace {

const RadialKind kAll[] = {RadialKind::R1, RadialKind::R2, RadialKind::R3,
                           RadialKind::R4, RadialKind::R5, RadialKind::R6cubic,
                           RadialKind::J1, RadialKind::J2, RadialKind::J3};

double integrand(RadialKind k, double r, double c, double d) {
  const double rho2 = r * r + c * c;
  const double q = std::sqrt(std::max(r * r - d * d, 0.0));
  const double ac = r > 0 ? std::acos(std::min(1.0, d / r)) : 0.5 * M_PI;
  const double rho3 = rho2 * std::sqrt(rho2), rho = std::sqrt(rho2);
  switch (k) {
    case RadialKind::R1: return r / rho3;
    case RadialKind::R2: return r * ac / rho3;
    case RadialKind::R3: return r * q / rho3;
    case RadialKind::R4: return r * r * r / rho3;
    case RadialKind::R5: return r * r * r * ac / rho3;
    case RadialKind::R6cubic: return r * q * q * q / rho3;
    case RadialKind::J1: return r / rho;
    case RadialKind::J2: return r * ac / rho;
    case RadialKind::J3: return r * q / rho;
  }
  return 0;
}

double quad(RadialKind k, double a, double b, double c, double d) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double r) { return integrand(k, r, c, d); }, a, b, 1e-14);
}

}  // namespace

TEST_CASE("R1 definite value over [0,1] with c=1") {
  CHECK(definite_radial(RadialKind::R1, 0.0, 1.0, 1.0, 0.0) ==
        doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("R2 with d=0 uses the half-pi branch") {
  for (double r : {0.3, 1.0, 4.0})
    for (double c : {0.0, 0.5, 2.0})
      CHECK(radial_primitive(RadialKind::R2, r, c, 0.0) ==
            doctest::Approx(-0.5 * M_PI / std::sqrt(r * r + c * c)));
}

TEST_CASE("zero-length interval") {
  for (RadialKind k : kAll) CHECK(definite_radial(k, 1.3, 1.3, 0.4, 0.2) == 0.0);
}

TEST_CASE("R3 over [1,2] with c=0.5, d=0.3 against quadrature") {
  const double v = definite_radial(RadialKind::R3, 1.0, 2.0, 0.5, 0.3);
  CHECK(v == doctest::Approx(quad(RadialKind::R3, 1.0, 2.0, 0.5, 0.3)).epsilon(1e-12));
}

TEST_CASE("R5 is continuous as r approaches d") {
  const double d = 0.7, c = 0.4;
  const double at = radial_primitive(RadialKind::R5, d, c, d);
  const double near = radial_primitive(RadialKind::R5, d * (1 + 1e-12), c, d);
  CHECK(std::abs(at - near) < 1e-5);
}

TEST_CASE("divergence and domain errors") {
  CHECK_THROWS_AS(radial_primitive(RadialKind::R1, 0.0, 0.0, 0.0), DivergentIntegral);
  CHECK_THROWS_AS(radial_primitive(RadialKind::R1, 0.5, 0.0, 1.0), DomainError);
  CHECK_NOTHROW(radial_primitive(RadialKind::R1, 0.5, 0.0, 0.0));
  CHECK_NOTHROW(radial_primitive(RadialKind::J2, 0.0, 0.0, 0.0));
}

TEST_CASE("antiderivative check by central differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.1, 10.0);
  for (RadialKind k : kAll) {
    for (int i = 0; i < 100; ++i) {
      const double c = U(rng);
      const double d = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
      const double r = d + 0.1 + U(rng);
      const double h = 1e-5;
      const double fd = (radial_primitive(k, r + h, c, d) - radial_primitive(k, r - h, c, d)) / (2 * h);
      CHECK_MESSAGE(fd == doctest::Approx(integrand(k, r, c, d)).epsilon(1e-6), radial_name(k));
    }
  }
}

TEST_CASE("definite integrals against quadrature, including c = 0 and d = 0") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (RadialKind k : kAll) {
    for (int i = 0; i < 60; ++i) {
      const double d = (i % 5 == 0) ? 0.0 : 2.0 * U(rng);
      const double c = (i % 7 == 0) ? 0.0 : 2.0 * U(rng);
      double a = d + 2.0 * U(rng), b = d + 2.0 * U(rng);
      if (a > b) std::swap(a, b);
      if (c == 0.0 && a < 1e-3 && k != RadialKind::J1 && k != RadialKind::J2 && k != RadialKind::J3)
        a = 1e-3;
      const double v = definite_radial(k, a, b, c, d);
      const double ref = quad(k, a, b, c, d);
      CHECK_MESSAGE(std::abs(v - ref) <= 1e-10 * std::max(std::abs(ref), 1e-300) + 1e-14,
                    radial_name(k) << " a=" << a << " b=" << b << " c=" << c << " d=" << d);
    }
  }
}

TEST_CASE("sign of c is immaterial") {
  for (RadialKind k : kAll)
    CHECK(definite_radial(k, 0.5, 1.7, 0.3, 0.2) == definite_radial(k, 0.5, 1.7, -0.3, 0.2));
}

TEST_CASE("series and closed form agree at the switch-over") {
  // R2 switches to the series when c z / d < 1e-6.
  const double d = 1.0, r = 2.0;
  const double z_over_c = std::sqrt(r * r - d * d) / d;
  const double c_switch = kSeriesThreshold / z_over_c;
  const double below = radial_primitive(RadialKind::R2, r, c_switch * (1 - 1e-9), d);
  const double above = radial_primitive(RadialKind::R2, r, c_switch * (1 + 1e-9), d);
  CHECK(below == doctest::Approx(above).epsilon(1e-9));
}
