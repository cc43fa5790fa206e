#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wpart/errors.hpp"
#include "wpart/specialfn.hpp"

using namespace wpart;
using namespace wpart::special;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_CASE("zeta at the values quoted for the partition example") {
  CHECK(std::fabs(zeta(0.0) + 0.5) <= 1e-11);
  CHECK(std::fabs(zeta(-1.0) + 1.0 / 12.0) <= 1e-11);
  CHECK(std::fabs(zeta_prime(0.0) + 0.5 * std::log(2.0 * kPi)) <= 1e-11);
}

TEST_CASE("zeta reference values") {
  CHECK(close(zeta(2.0), kPi * kPi / 6.0, 1e-13));
  CHECK(close(zeta(4.0), std::pow(kPi, 4) / 90.0, 1e-13));
  CHECK(close(zeta(3.0), 1.2020569031595942854, 1e-13));
  CHECK(close(zeta(0.5), -1.4603545088095868129, 1e-12));
  CHECK(close(zeta(1.5), 2.6123753486854883433, 1e-12));
  CHECK(close(zeta(-3.0), 1.0 / 120.0, 1e-12));
  CHECK(std::fabs(zeta(-2.0)) <= 1e-15);
  CHECK(close(zeta(-0.5), -0.20788622497735456602, 1e-12));
  CHECK(close(zeta(30.0), 1.0000000009313274324, 1e-14));
  CHECK_THROWS_AS(zeta(1.0), PoleError);
}

TEST_CASE("zeta derivative reference values") {
  // zeta'(-1) = 1/12 - log A with Glaisher's constant A.
  CHECK(close(zeta_prime(-1.0), 1.0 / 12.0 - std::log(1.28242712910062263687534256886979), 1e-12));
  CHECK(close(zeta_prime(2.0), -0.93754825431584375370, 1e-12));
  CHECK(close(zeta_prime(0.5), -3.9226461392091517274, 1e-11));
  // zeta'(-2) = -zeta(3) / (4 pi^2)
  CHECK(close(zeta_prime(-2.0), -1.2020569031595942854 / (4.0 * kPi * kPi), 1e-12));
}

TEST_CASE("functional-equation branch agrees with direct Euler-Maclaurin") {
  for (double s : {-0.25, -0.5, -1.0, -1.5, -2.5, -3.5}) {
    CHECK(close(zeta(s), detail::zeta_euler_maclaurin(s), 1e-10));
    CHECK(close(zeta_prime(s), detail::zeta_prime_euler_maclaurin(s), 1e-9));
  }
}

TEST_CASE("zeta derivative against finite differences") {
  for (double s : {-2.7, -0.3, 0.2, 0.8, 1.3, 2.0, 5.0}) {
    const double h = 1e-5;
    const double fd = (zeta(s + h) - zeta(s - h)) / (2.0 * h);
    CHECK(close(zeta_prime(s), fd, 1e-7));
  }
}

TEST_CASE("gamma, log gamma and digamma") {
  CHECK(close(special::gamma(5.0), 24.0, 1e-14));
  CHECK(close(special::gamma(0.5), std::sqrt(kPi), 1e-14));
  CHECK(close(special::gamma(-0.5), -2.0 * std::sqrt(kPi), 1e-14));
  CHECK(close(special::gamma(1e-3), std::tgamma(1e-3), 1e-13));
  for (double x : {0.1, 0.7, 1.3, 2.5, 7.25, 30.0, 120.5}) CHECK(close(log_gamma(x), std::lgamma(x), 1e-13));
  CHECK(close(digamma(1.0), -0.57721566490153286061, 1e-13));
  CHECK(close(digamma(0.5), -0.57721566490153286061 - 2.0 * std::log(2.0), 1e-13));
  CHECK(close(digamma(-0.5), 0.03648997397857652056, 1e-12));
  CHECK_THROWS_AS(special::gamma(0.0), PoleError);
  CHECK_THROWS_AS(special::gamma(-3.0), PoleError);
  CHECK_THROWS_AS(digamma(-1.0), PoleError);
}

TEST_CASE("Bose integral and the zeta'(-1) identity") {
  CHECK(std::fabs(2.0 * bose_log_integral(2.0) - zeta_prime(-1.0)) <= 1e-8);
  CHECK(close(bose_log_integral(2.0), -0.08271057185022546, 1e-12));
}

TEST_CASE("Bose integral as the r-derivative of Gamma(r) zeta(r) (2 pi)^-r") {
  for (double r : {1.5, 2.5, 3.0, 4.0}) {
    const double closed = std::pow(2.0 * kPi, -r) * special::gamma(r) *
                          (zeta(r) * (digamma(r) - std::log(2.0 * kPi)) + zeta_prime(r));
    CHECK(close(bose_log_integral(r), closed, 1e-10));
  }
  CHECK(close(bose_log_integral(1.5), -0.48606609105923, 1e-12));
  CHECK(close(bose_log_integral(3.0), -0.01046658867633, 1e-11));
}

TEST_CASE("Bose integral diverges for r <= 1") {
  CHECK_THROWS_AS(bose_log_integral(1.0), DomainError);
  CHECK_THROWS_AS(bose_log_integral(0.5), DomainError);
}

TEST_CASE("precision validation") {
  CHECK_THROWS_AS(zeta(2.0, Precision{0.0}), DomainError);
  CHECK_THROWS_AS(zeta(2.0, Precision{1e-3}), DomainError);
  CHECK(close(zeta(2.0, Precision{1e-8}), kPi * kPi / 6.0, 1e-8));
}
