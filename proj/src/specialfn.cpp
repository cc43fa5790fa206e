#include "wpart/specialfn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "wpart/errors.hpp"
#include "wpart/numfmt.hpp"

namespace wpart::special {

namespace {

constexpr double kPi = std::numbers::pi;

// B_2, B_4, ..., B_40.
constexpr std::array<double, 20> kBernoulliEven = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
};

// Lanczos approximation, g = 7, 9 terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with exact zeros at the integers.
double sin_pi(double x) {
  const double r = std::remainder(x, 2.0);  // in [-1, 1]
  if (r == 0.0 || std::fabs(r) == 1.0) return 0.0;
  return std::sin(kPi * r);
}

// cos(pi x) with exact zeros at the half-integers.
double cos_pi(double x) {
  const double r = std::remainder(x, 2.0);
  if (std::fabs(r) == 0.5) return 0.0;
  return std::cos(kPi * r);
}

double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
  return a;
}

void check_not_pole_one(double s, const char* fn) {
  if (s == 1.0) throw PoleError(std::string(fn) + ": pole at s = 1");
}

struct EmResult {
  double value;
  double derivative;
};

// Euler-Maclaurin for zeta(s) and zeta'(s). Returns both since they share
// the expensive powers. The cut N is doubled until the first omitted
// Bernoulli correction falls below the tolerance; that term bounds the
// remainder for real s.
EmResult euler_maclaurin(double s, double rel_tol) {
  int cut = std::max(16, static_cast<int>(std::ceil(std::fabs(s))) + 8);
  for (int attempt = 0; attempt < 12; ++attempt, cut *= 2) {
    const double n = cut;
    const double log_n = std::log(n);
    double sum = 0.0;
    double dsum = 0.0;
    for (int k = cut - 1; k >= 1; --k) {  // small terms first
      const double lk = std::log(static_cast<double>(k));
      const double t = std::exp(-s * lk);
      sum += t;
      dsum -= lk * t;
    }
    const double n_pow = std::exp((1.0 - s) * log_n);  // N^(1-s)
    sum += n_pow / (s - 1.0) + 0.5 * n_pow / n;
    dsum += -n_pow * (log_n / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0))) - 0.5 * log_n * n_pow / n;

    // poch = s (s+1) ... (s+2j-2), dpoch its s-derivative.
    double poch = s;
    double dpoch = 1.0;
    double factorial = 2.0;  // (2j)!
    double n_neg = n_pow / (n * n);  // N^(-s-1)
    bool converged = false;
    for (std::size_t j = 1; j <= kBernoulliEven.size(); ++j) {
      const double c = kBernoulliEven[j - 1] / factorial;
      const double term = c * poch * n_neg;
      const double dterm = c * n_neg * (dpoch - log_n * poch);
      const double scale = std::max(std::fabs(sum), 1e-300);
      if (std::fabs(term) <= rel_tol * scale * 0.01 && std::fabs(dterm) <= rel_tol * std::max(std::fabs(dsum), 1e-300) * 0.01) {
        converged = true;
        break;
      }
      sum += term;
      dsum += dterm;
      // extend the rising product by (s + 2j - 1)(s + 2j)
      for (int step = 0; step < 2; ++step) {
        const double f = s + static_cast<double>(2 * j - 1 + step);
        dpoch = dpoch * f + poch;
        poch *= f;
      }
      factorial *= static_cast<double>((2 * j + 1) * (2 * j + 2));
      n_neg /= n * n;
    }
    if (converged) return {sum, dsum};
  }
  throw NumericalError("zeta: Euler-Maclaurin did not reach tolerance");
}

}  // namespace

void Precision::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1e-6))
    throw DomainError("Precision: rel_tol must lie in (0, 1e-6), got " + shortest(rel_tol));
}

double gamma(double x) {
  if (is_nonpositive_integer(x)) throw PoleError("gamma: pole at nonpositive integer " + shortest(x));
  if (x < 0.5) return kPi / (sin_pi(x) * gamma(1.0 - x));
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::exp((xm1 + 0.5) * std::log(t) - t) * lanczos_sum(xm1);
}

double log_gamma(double x) {
  if (is_nonpositive_integer(x)) throw PoleError("log_gamma: pole at nonpositive integer " + shortest(x));
  if (x < 0.5) return std::log(kPi) - std::log(std::fabs(sin_pi(x))) - log_gamma(1.0 - x);
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

double digamma(double x) {
  if (is_nonpositive_integer(x)) throw PoleError("digamma: pole at nonpositive integer " + shortest(x));
  if (x < 0.5) {
    // psi(1 - x) - psi(x) = pi cot(pi x)
    return digamma(1.0 - x) - kPi * cos_pi(x) / sin_pi(x);
  }
  double acc = 0.0;
  while (x < 12.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double pw = inv2;
  for (std::size_t k = 1; k <= 8; ++k) {
    series += kBernoulliEven[k - 1] / (2.0 * static_cast<double>(k)) * pw;
    pw *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - series;
}

namespace detail {

double zeta_euler_maclaurin(double s, Precision prec) {
  check_not_pole_one(s, "zeta");
  prec.validate();
  return euler_maclaurin(s, prec.rel_tol).value;
}

double zeta_prime_euler_maclaurin(double s, Precision prec) {
  check_not_pole_one(s, "zeta_prime");
  prec.validate();
  return euler_maclaurin(s, prec.rel_tol).derivative;
}

}  // namespace detail

double zeta(double s, Precision prec) {
  check_not_pole_one(s, "zeta");
  prec.validate();
  if (s >= 0.0) return euler_maclaurin(s, prec.rel_tol).value;
  // zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
  const double sn = sin_pi(0.5 * s);
  if (sn == 0.0) return 0.0;  // trivial zeros
  const double mirror = euler_maclaurin(1.0 - s, prec.rel_tol).value;
  const double log_mag = s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_gamma(1.0 - s);
  return std::exp(log_mag) * sn * mirror;
}

double zeta_prime(double s, Precision prec) {
  check_not_pole_one(s, "zeta_prime");
  prec.validate();
  if (s >= 0.0) return euler_maclaurin(s, prec.rel_tol).derivative;
  // zeta(s) = chi(s) zeta(1 - s)  =>  zeta'(s) = chi'(s) zeta(1 - s) - chi(s) zeta'(1 - s)
  const EmResult mirror = euler_maclaurin(1.0 - s, prec.rel_tol);
  const double base = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_gamma(1.0 - s));
  const double sn = sin_pi(0.5 * s);
  const double cs = cos_pi(0.5 * s);
  const double chi = base * sn;
  const double dchi = base * ((std::log(2.0 * kPi) - digamma(1.0 - s)) * sn + 0.5 * kPi * cs);
  return dchi * mirror.value - chi * mirror.derivative;
}

double bose_log_integral(double r, Precision prec) {
  prec.validate();
  if (!(r > 1.0))
    throw DomainError("bose_log_integral: integral diverges at w = 0 unless r > 1 (got r = " + shortest(r) + ")");
  const auto integrand = [r](double w) -> double {
    if (w <= 0.0) return 0.0;
    // Log form so large w underflows to 0 instead of giving inf / inf.
    const double lw = std::log(w);
    return std::exp((r - 1.0) * lw - 2.0 * kPi * w) * lw / -std::expm1(-2.0 * kPi * w);
  };
  boost::math::quadrature::tanh_sinh<double> inner;
  boost::math::quadrature::exp_sinh<double> outer;
  const double head = inner.integrate(integrand, 0.0, 1.0, prec.rel_tol);
  const double tail = outer.integrate(integrand, 1.0, std::numeric_limits<double>::infinity(), prec.rel_tol);
  return head + tail;
}

}  // namespace wpart::special
