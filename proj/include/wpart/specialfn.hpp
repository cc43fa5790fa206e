#pragma once

// Real-argument special functions used by the asymptotic formulas.

namespace wpart::special {

/// Target relative accuracy for the series-based evaluators.
struct Precision {
  double rel_tol = 1e-12;

  /// Throws DomainError unless 0 < rel_tol < 1e-6.
  void validate() const;
};

/// Gamma function. Lanczos approximation for x >= 1/2, reflection below.
/// Throws PoleError at nonpositive integers.
double gamma(double x);

/// log|Gamma(x)|, usable where gamma() would overflow.
double log_gamma(double x);

/// psi(x) = Gamma'(x)/Gamma(x).
double digamma(double x);

/// Riemann zeta on the real line, s != 1.
///
/// For s >= 0 the Euler-Maclaurin formula is applied directly with a cut
/// N chosen so that the first omitted Bernoulli term is below rel_tol.
/// For s < 0 the functional equation maps the argument to 1 - s > 1.
double zeta(double s, Precision prec = {});

/// zeta'(s), s != 1, by termwise differentiation of the same two routes.
double zeta_prime(double s, Precision prec = {});

/// integral_0^inf w^(r-1) log(w) / (e^(2 pi w) - 1) dw.
///
/// Converges only for r > 1: near w = 0 the integrand behaves like
/// w^(r-2) log(w) / (2 pi). For r = 2 the value is zeta'(-1) / 2.
double bose_log_integral(double r, Precision prec = {});

namespace detail {

/// Euler-Maclaurin evaluation of zeta used for every s >= 0. Exposed so the
/// functional-equation branch can be checked against it for s < 0.
double zeta_euler_maclaurin(double s, Precision prec = {});
double zeta_prime_euler_maclaurin(double s, Precision prec = {});

}  // namespace detail

}  // namespace wpart::special
