#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wpart/asymptotics.hpp"
#include "wpart/errors.hpp"
#include "wpart/exact.hpp"
#include "wpart/khintchine.hpp"

using namespace wpart;

namespace {

const WeightSequence kOnes = make_power_law(1.0, 1.0);
constexpr double kPi = std::numbers::pi;

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

// Least-squares slope of log |err| against log delta.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(std::fabs(y[i]));
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(std::fabs(y[i])) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("log F expansion at delta = 0.01") {
  const ExpansionTerms m = log_F_expansion(kOnes, StructureKind::multiset, 0.01);
  CHECK(close(m.leading, kPi * kPi / 6.0 * 100.0, 1e-13));
  CHECK(close(m.log_term, 0.5 * std::log(0.01), 1e-13));
  CHECK(close(m.constant, -0.5 * std::log(2.0 * kPi), 1e-12));
  CHECK(m.value() == doctest::Approx(161.272).epsilon(1e-5));
  CHECK(m.remainder_order == 1.0);

  const ExpansionTerms a = log_F_expansion(make_forest(), StructureKind::assembly, 0.01);
  CHECK(close(a.value(), 99.5, 1e-13));
  CHECK(close(a.value(), 1.0 / std::expm1(0.01), 1e-5));

  const ExpansionTerms s = log_F_expansion(kOnes, StructureKind::selection, 0.01);
  CHECK(close(s.leading, 0.5 * kPi * kPi / 6.0 * 100.0, 1e-13));
  CHECK(close(s.constant, -0.5 * std::log(2.0), 1e-13));
  CHECK(s.log_term == 0.0);

  CHECK_THROWS_AS(log_F_expansion(make_tabulated(std::vector<double>{1.0}), StructureKind::multiset, 0.1),
                  MissingMetaError);
  CHECK_THROWS_AS(log_F_expansion(kOnes, StructureKind::multiset, 0.0), DomainError);
}

TEST_CASE("expansion error decays like delta^C0") {
  for (const auto& w : {kOnes, make_power_law(1.0, 2.0), make_power_law(2.0, 0.5), make_example2()})
    for (const auto kind : kAllKinds) {
      // At 1e-4 the O(delta^2) remainder for r = 2 sits below the roundoff of a 1e8 sum.
      std::vector<double> deltas = {1e-1, 1e-2, 1e-3};
      std::vector<double> err;
      for (double d : deltas) err.push_back(log_F_expansion(w, kind, d).value() - log_F_infinite(w, kind, d));
      INFO(w.label(), " ", name(kind));
      CHECK(slope(deltas, err) >= 0.9 * w.meta()->c0);
    }
}

TEST_CASE("derivative expansions against differences of the exact sums") {
  const double delta = 1e-3;
  for (const auto& w : {kOnes, make_power_law(1.0, 2.0)})
    for (const auto kind : kAllKinds) {
      const Moments m = moments_infinite(w, kind, delta);
      CHECK(close(log_F_derivative_expansion(w, kind, delta, 1), -m.mean, 1e-3));
      CHECK(close(log_F_derivative_expansion(w, kind, delta, 2), m.variance, 1e-3));
      CHECK(close(log_F_derivative_expansion(w, kind, delta, 3), -m.third_cumulant, 1e-3));
      // The cumulants themselves against central differences of log F.
      const double h = 1e-4 * delta;
      const double fd = (log_F_infinite(w, kind, delta + h) - log_F_infinite(w, kind, delta - h)) / (2 * h);
      CHECK(close(-m.mean, fd, 1e-6));
    }
}

TEST_CASE("first derivative keeps the D(0) term") {
  // d/d delta of zeta(2)/delta + (1/2) log delta - (1/2) log 2 pi.
  const double delta = 0.01;
  const double expected = -kPi * kPi / 6.0 / (delta * delta) + 0.5 / delta;
  CHECK(close(log_F_derivative_expansion(kOnes, StructureKind::multiset, delta, 1), expected, 1e-13));
  CHECK(log_F_derivative_expansion(kOnes, StructureKind::multiset, delta, 1) == doctest::Approx(-16399.34).epsilon(1e-6));
  CHECK(close(log_F_derivative_expansion(make_forest(), StructureKind::assembly, 0.1, 2), 2000.0, 1e-12));
  for (const auto kind : kAllKinds) {
    CHECK(log_F_derivative_expansion(kOnes, kind, 1e-3, 1) < 0.0);
    CHECK(log_F_derivative_expansion(kOnes, kind, 1e-3, 2) > 0.0);
  }
  CHECK_THROWS_AS(log_F_derivative_expansion(kOnes, StructureKind::multiset, 0.1, 4), DomainError);
}

TEST_CASE("delta_n prediction") {
  CHECK(close(delta_asymptotic(kOnes, StructureKind::multiset, 600), kPi / 60.0 - 0.25 / 600.0, 1e-13));
  CHECK(delta_asymptotic(kOnes, StructureKind::multiset, 600) == doctest::Approx(0.051943).epsilon(1e-5));
  CHECK(close(delta_asymptotic(make_forest(), StructureKind::assembly, 10000), 0.01, 1e-13));
  CHECK(close(delta_asymptotic(kOnes, StructureKind::selection, 100), std::sqrt(kPi * kPi / 12.0 / 100.0), 1e-13));
  for (const auto kind : kAllKinds) {
    double prev = 1.0;
    for (std::int64_t n : {100, 1000, 10000, 100000}) {
      const double ratio = solve_saddle(kOnes, kind, n).delta_n / delta_asymptotic(kOnes, kind, n);
      CHECK(std::fabs(ratio - 1.0) <= prev);
      prev = std::fabs(ratio - 1.0);
    }
    CHECK(prev < 0.01);
  }
  CHECK(delta_remainder_beta(kOnes, StructureKind::multiset) == 0.5);
  CHECK(delta_remainder_beta(make_power_law(1.0, 0.5), StructureKind::multiset) == doctest::Approx(1.0 / 3.0));
  CHECK(delta_remainder_beta(make_power_law(1.0, 0.5), StructureKind::selection) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("leading-order parts for b_k = 1 give the classical p(n) asymptotics") {
  const MeinardusParts p = meinardus_parts(kOnes, StructureKind::multiset);
  CHECK(close(p.kappa1, -1.0, 1e-15));
  CHECK(close(p.kappa2, 0.5, 1e-15));
  CHECK(close(std::exp(p.log_constant), 1.0 / (4.0 * std::sqrt(3.0)), 1e-12));
  CHECK(close(p.exponent_coeff, kPi * std::sqrt(2.0 / 3.0), 1e-14));

  // kappa_1 = (D(0) - 1 - r/2) / (1 + r), kappa_2 = (1 - 2 D(0)) / (2 + 2r) at r = 1/2.
  const auto w = make_power_law(2.0, 0.5);
  const MeinardusParts q = meinardus_parts(w, StructureKind::multiset);
  const double D0 = w.meta()->d0;
  CHECK(close(q.kappa1, (D0 - 1.25) / 1.5, 1e-15));
  CHECK(close(q.kappa2, (1.0 - 2.0 * D0) / 3.0, 1e-15));

  const MeinardusParts s = meinardus_parts(kOnes, StructureKind::selection);
  CHECK(close(s.exponent_coeff, kPi / std::sqrt(3.0), 1e-14));
  CHECK(close(s.power_exponent, -0.75, 1e-15));
  // C^(2) = 2^(-1/2) (2 pi 2)^(-1/2) (pi^2/12)^(1/4) = 1 / (4 * 3^(1/4))
  CHECK(close(std::exp(s.log_constant), 1.0 / (4.0 * std::pow(3.0, 0.25)), 1e-12));

  const MeinardusParts a = meinardus_parts(make_forest(), StructureKind::assembly);
  CHECK(close(a.power_exponent, -0.75, 1e-15));
  CHECK(close(a.exponent_coeff, 2.0, 1e-15));
}

TEST_CASE("estimate is assembled from its parts") {
  for (const auto kind : kAllKinds)
    for (std::int64_t n : {1, 17, 1000}) {
      const AsymptoticEstimate e = meinardus_estimate(kOnes, kind, n);
      const double nd = static_cast<double>(n);
      CHECK(e.log_value == e.log_constant + e.power_exponent * std::log(nd) + e.exponent_coeff * std::pow(nd, 0.5));
    }
  CHECK_THROWS_AS(meinardus_estimate(kOnes, StructureKind::multiset, 0), DomainError);
}

TEST_CASE("estimates against exact counts") {
  const auto exact = count_exact(kOnes, StructureKind::multiset, 1000);
  double prev = 1.0;
  for (std::int64_t n : {100, 300, 1000}) {
    const double ratio = std::exp(meinardus_estimate(kOnes, StructureKind::multiset, n).log_value - log_count(exact, n));
    CHECK(std::fabs(ratio - 1.0) < prev);
    prev = std::fabs(ratio - 1.0);
  }
  CHECK(prev <= 0.03);
  const double k = khintchine_estimate(kOnes, StructureKind::multiset, 1000).log_value;
  CHECK(std::fabs(k - log_count(exact, 1000)) <= 0.02 * log_count(exact, 1000));

  const auto distinct = count_exact(kOnes, StructureKind::selection, 2000);
  const double r = std::exp(meinardus_estimate(kOnes, StructureKind::selection, 2000).log_value - log_count(distinct, 2000));
  CHECK(r == doctest::Approx(1.0).epsilon(0.01));

  const auto forests = count_exact(make_forest(), StructureKind::assembly, 1000);
  const double f = std::exp(meinardus_estimate(make_forest(), StructureKind::assembly, 1000).log_value - log_count(forests, 1000));
  CHECK(f == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("the two estimates converge to each other") {
  for (const auto kind : kAllKinds) {
    double prev = 1e9;
    for (std::int64_t n : {100, 1000, 10000, 100000}) {
      const double gap = std::fabs(khintchine_estimate(kOnes, kind, n).log_value - meinardus_estimate(kOnes, kind, n).log_value);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 0.01);
  }
  const KhintchineEstimate small = khintchine_estimate(kOnes, StructureKind::multiset, 5);
  CHECK(std::isfinite(small.log_value));
  CHECK(small.log_value == small.tilt + small.log_fn + small.log_gaussian);
}

TEST_CASE("variance constants") {
  CHECK(close(variance_constant(kOnes, StructureKind::multiset), kPi * kPi / 3.0, 1e-14));
  CHECK(close(variance_constant(kOnes, StructureKind::selection), kPi * kPi / 6.0, 1e-14));
  CHECK(close(variance_constant(make_forest(), StructureKind::assembly), 2.0, 1e-14));
}
