#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wpart/errors.hpp"
#include "wpart/verify.hpp"

using namespace wpart;

namespace {

const WeightSequence kOnes = make_power_law(1.0, 1.0);

double direct_v(const WeightSequence& w, double delta, double alpha, std::int64_t k_max) {
  double s = 0.0;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const double sn = std::sin(std::numbers::pi * static_cast<double>(k) * alpha);
    s += 2.0 * w(k) * std::exp(-static_cast<double>(k) * delta) * sn * sn;
  }
  return s;
}

}  // namespace

TEST_CASE("v_sum examples") {
  const VSum half = v_sum(kOnes, 0.01, 0.5);
  const double closed = 2.0 * std::exp(-0.01) / (1.0 - std::exp(-0.02));
  CHECK(half.value == doctest::Approx(closed).epsilon(1e-12));
  CHECK(half.value == doctest::Approx(99.99833).epsilon(1e-6));
  CHECK(half.truncation_error_bound <= 1e-10 * half.value);
  CHECK(closed - half.value >= -1e-12 * closed);
  CHECK(closed - half.value <= half.truncation_error_bound);

  CHECK(v_sum(kOnes, 0.01, 0.0).value == 0.0);
  for (double delta : {0.1, 0.01, 1e-3, 1e-4}) CHECK(v_sum(make_example2(), delta, 0.25).value == 0.0);
  CHECK_THROWS_AS(v_sum(kOnes, 0.0, 0.1), DomainError);
}

TEST_CASE("v_sum against direct summation") {
  for (const auto& w : {kOnes, make_power_law(1.0, 2.0), make_example3()})
    for (double alpha : {0.013, 0.2, 0.37}) {
      const VSum v = v_sum(w, 0.05, alpha);
      CHECK(v.value >= 0.0);
      CHECK(v.value == doctest::Approx(direct_v(w, 0.05, alpha, v.k_max)).epsilon(1e-11));
    }
}

TEST_CASE("v_sum is even and periodic") {
  for (double alpha : {0.03, 0.125, 0.31, 0.49}) {
    const double v = v_sum(kOnes, 0.003, alpha).value;
    CHECK(v_sum(kOnes, 0.003, -alpha).value == doctest::Approx(v).epsilon(1e-12));
    CHECK(v_sum(kOnes, 0.003, alpha + 1.0).value == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("alpha grid") {
  const auto g = alpha_grid(0.01, true);
  CHECK(g.size() >= 512);
  CHECK(g.front() > 0.01);
  CHECK(g.back() == 0.5);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(std::find(g.begin(), g.end(), 0.25) != g.end());
  const auto closed = alpha_grid(0.01, false);
  CHECK(closed.front() == 0.01);
  GridOptions twice;
  twice.refinement = 2;
  CHECK(alpha_grid(0.01, true, twice).size() > g.size());
}

TEST_CASE("condition (iii) fixtures") {
  const std::vector<double> deltas = {1e-2, 1e-3};
  const ConditionReport ex2 = check_condition_iii(make_example2(), deltas, 1.0);
  CHECK(ex2.verdict == Verdict::fail);
  CHECK(ex2.witness_alpha == 0.25);
  CHECK(ex2.condition == Condition::meinardus_iii);
  CHECK(ex2.delta_grid.front() > ex2.delta_grid.back());

  const ConditionReport ones = check_condition_iii(kOnes, deltas, 1.0);
  CHECK(ones.verdict == Verdict::pass);
  for (double m : ones.min_margin) CHECK(m > 0.0);

  CHECK_THROWS_AS(check_condition_iii(kOnes, {0.5}, 1.0), DomainError);
  CHECK_THROWS_AS(check_condition_iii(kOnes, {}, 1.0), DomainError);
}

TEST_CASE("condition (iii) detects decay by trend") {
  // b_k = 1 with epsilon = 0.2: V delta^0.2 ~ delta^(-0.8) grows, pass; the
  // scaled minimum for a probe that is too weak shrinks like delta^0.8.
  const std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
  GridOptions coarse;
  coarse.uniform_points = 128;
  coarse.geometric_points = 64;
  const ConditionReport weak = check_condition_iii(make_power_law(1.0, 1.0), deltas, 1.8, coarse);
  CHECK(weak.verdict == Verdict::fail);
  CHECK(weak.trend_used);
  CHECK(weak.trend_slope >= 0.2);
}

TEST_CASE("condition (iii') fixtures") {
  const std::vector<double> deltas = {1e-2, 1e-3};
  for (const auto kind : kAllKinds) {
    const ConditionReport r = check_condition_iii_prime(make_example2(), kind, deltas, 0.1);
    CHECK(r.verdict == Verdict::fail);
    CHECK(r.witness_alpha == 0.25);
  }
  const ConditionReport a = check_condition_iii_prime(kOnes, StructureKind::assembly, {1e-3}, 0.1);
  CHECK(a.verdict == Verdict::pass);
  CHECK(a.threshold[0] == doctest::Approx(1.6 * std::log(1e3)).epsilon(1e-14));
  CHECK(a.min_margin[0] > 0.0);
  CHECK_THROWS_AS(check_condition_iii_prime(kOnes, StructureKind::assembly, {1e-3}, 0.0), DomainError);
}

TEST_CASE("resolution doubling keeps a pass") {
  GridOptions twice;
  twice.refinement = 2;
  const auto once = check_condition_iii_prime(kOnes, StructureKind::assembly, {1e-3}, 0.1);
  const auto fine = check_condition_iii_prime(kOnes, StructureKind::assembly, {1e-3}, 0.1, twice);
  CHECK(once.verdict == Verdict::pass);
  CHECK(fine.verdict == Verdict::pass);
  CHECK(fine.min_margin[0] <= once.min_margin[0] + 1e-12);
  CHECK(fine.min_margin[0] == doctest::Approx(once.min_margin[0]).epsilon(1e-2));
}

TEST_CASE("modulus bound |phi_n| <= exp(-V / M)") {
  for (const auto kind : kAllKinds) {
    const Lemma3Report r = check_lemma3_bound(kOnes, kind, 500);
    CHECK(r.violations == 0);
    CHECK(r.grid_points == 1024);
    CHECK(r.max_ratio <= 1.0 + 1e-6);
  }
  // Assemblies: |phi_n| = exp(-V_n / 1), equal to the truncated V up to the tail.
  const Lemma3Report a = check_lemma3_bound(kOnes, StructureKind::assembly, 500);
  CHECK(a.max_ratio >= 1.0 - 1e-10);
}

TEST_CASE("local limit") {
  const LocalLimitReport r = check_local_limit(kOnes, StructureKind::multiset, {2000, 2001});
  CHECK(r.k2 == doctest::Approx(std::numbers::pi * std::numbers::pi / 3.0).epsilon(1e-14));
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].llt_ratio >= 0.95);
  CHECK(r.rows[0].llt_ratio <= 1.05);
  CHECK(r.rows[0].variance_ratio >= 0.95);
  CHECK(r.rows[0].variance_ratio <= 1.05);
  CHECK(std::fabs(r.rows[0].llt_ratio - r.rows[1].llt_ratio) <= 0.05);
  CHECK(std::fabs(r.rows[0].variance_ratio - r.rows[1].variance_ratio) <= 0.05);
}

TEST_CASE("zeta-sum bound chain") {
  for (double delta : {1e-1, 1e-2, 1e-3, 1e-4})
    for (double alpha = -0.5; alpha <= 0.5; alpha += 0.0071) {
      if (alpha == 0.0 || std::fabs(alpha) / delta <= 1.0 / (2.0 * std::numbers::pi)) continue;
      const ZetaSumCheck c = check_zeta_sum_bound(delta, alpha);
      CHECK(c.sum_ok);
      CHECK(c.p_delta_ok);
      CHECK(c.sum >= c.lower_bound);
    }
  CHECK_THROWS_AS(check_zeta_sum_bound(0.1, 0.001), DomainError);
  CHECK_THROWS_AS(check_zeta_sum_bound(0.1, 0.0), DomainError);
}
