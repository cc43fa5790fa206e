#pragma once

#include <cstdint>
#include <vector>

#include "wpart/bignum.hpp"
#include "wpart/weights.hpp"

namespace wpart {

/// Exact counts c_0..c_N of one structure kind.
///
/// Multisets and selections hold integers. For assemblies c_n = s_n / n!
/// is rational and `labelled` holds s_n whenever every m_k = k! b_k is an
/// integer (it is empty otherwise).
struct CountTable {
  StructureKind kind = StructureKind::multiset;
  std::int64_t max_n = 0;
  std::vector<Rational> counts;
  std::vector<BigInt> labelled;

  const Rational& operator[](std::int64_t n) const { return counts.at(static_cast<std::size_t>(n)); }
};

/// Lambda(m), m = 1..N, the coefficients of the logarithmic derivative:
///   multiset   sum_{d | m} d b_d
///   selection  sum_{d | m} (-1)^(m/d + 1) d b_d
///   assembly   m b_m
/// values[m - 1] holds Lambda(m).
struct LambdaCache {
  StructureKind kind = StructureKind::multiset;
  std::vector<Rational> values;
};

/// Divisor-sieve construction of Lambda(1..N).
LambdaCache lambda_values(const WeightSequence& w, StructureKind kind, std::int64_t max_n);

/// c_0..c_N from n c_n = sum_{m=1}^n Lambda(m) c_(n-m), c_0 = 1.
///
/// Multisets and selections need integer b_k for k <= N (IntegralityError
/// otherwise). Assemblies accept rational b_k; when all m_k = k! b_k are
/// integers the labelled counts come from
///   s_n = sum_k binom(n-1, k-1) m_k s_(n-k).
CountTable count_exact(const WeightSequence& w, StructureKind kind, std::int64_t max_n);

/// Independent enumeration over all partitions of n into part sizes,
/// weighting a part size k used j times by
///   multiset   binom(b_k + j - 1, j)
///   selection  binom(b_k, j)
///   assembly   b_k^j / j!      (and n! / prod (k!^j j!) prod m_k^j for s_n)
/// Only for N <= 25.
CountTable count_bruteforce(const WeightSequence& w, StructureKind kind, std::int64_t max_n);

inline constexpr std::int64_t kBruteforceLimit = 25;

/// log c_n with ~15 significant digits. DomainError if c_n = 0.
double log_count(const CountTable& table, std::int64_t n);

}  // namespace wpart
