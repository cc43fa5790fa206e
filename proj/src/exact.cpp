#include "wpart/exact.hpp"

#include <functional>
#include <string>

#include "wpart/errors.hpp"

namespace wpart {

namespace {

std::vector<BigInt> integer_weights(const WeightSequence& w, StructureKind kind, std::int64_t max_n) {
  std::vector<BigInt> b(static_cast<std::size_t>(max_n));
  for (std::int64_t k = 1; k <= max_n; ++k) {
    const Rational v = w.exact(k);
    if (!is_integer(v))
      throw IntegralityError(std::string(name(kind)) + " counting needs integer b_k; " + w.label() + " has b_" +
                             std::to_string(k) + " = " + to_string(v));
    b[static_cast<std::size_t>(k - 1)] = boost::multiprecision::numerator(v);
  }
  return b;
}

void check_n(std::int64_t max_n) {
  if (max_n < 0) throw DomainError("N must be nonnegative");
}

// Lambda(m) for integer weights, by sieving over divisors d.
std::vector<BigInt> integer_lambda(const std::vector<BigInt>& b, StructureKind kind) {
  const auto n = static_cast<std::int64_t>(b.size());
  std::vector<BigInt> lambda(b.size());
  for (std::int64_t d = 1; d <= n; ++d) {
    const BigInt& bd = b[static_cast<std::size_t>(d - 1)];
    if (bd == 0) continue;
    const BigInt term = bd * d;
    if (kind == StructureKind::assembly) {
      lambda[static_cast<std::size_t>(d - 1)] += term;
      continue;
    }
    for (std::int64_t m = d, q = 1; m <= n; m += d, ++q) {
      if (kind == StructureKind::selection && q % 2 == 0)
        lambda[static_cast<std::size_t>(m - 1)] -= term;
      else
        lambda[static_cast<std::size_t>(m - 1)] += term;
    }
  }
  return lambda;
}

BigInt factorial(std::int64_t n) {
  BigInt f = 1;
  for (std::int64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

CountTable count_integer(const WeightSequence& w, StructureKind kind, std::int64_t max_n) {
  const std::vector<BigInt> lambda = integer_lambda(integer_weights(w, kind, max_n), kind);
  std::vector<BigInt> c(static_cast<std::size_t>(max_n + 1));
  c[0] = 1;
  for (std::int64_t n = 1; n <= max_n; ++n) {
    BigInt acc = 0;
    for (std::int64_t m = 1; m <= n; ++m) {
      const BigInt& l = lambda[static_cast<std::size_t>(m - 1)];
      if (l != 0) acc += l * c[static_cast<std::size_t>(n - m)];
    }
    BigInt q;
    BigInt rem;
    boost::multiprecision::divide_qr(acc, BigInt(n), q, rem);
    if (rem != 0) throw NumericalError("count_exact: recurrence produced a non-integer count at n = " + std::to_string(n));
    c[static_cast<std::size_t>(n)] = std::move(q);
  }
  CountTable table{.kind = kind, .max_n = max_n, .counts = {}, .labelled = {}};
  table.counts.reserve(c.size());
  for (auto& v : c) table.counts.emplace_back(std::move(v));
  return table;
}

CountTable count_assembly(const WeightSequence& w, std::int64_t max_n) {
  std::vector<Rational> b(static_cast<std::size_t>(max_n));
  std::vector<BigInt> m(static_cast<std::size_t>(max_n));
  bool labelled_integral = true;
  BigInt k_factorial = 1;
  for (std::int64_t k = 1; k <= max_n; ++k) {
    k_factorial *= k;
    b[static_cast<std::size_t>(k - 1)] = w.exact(k);
    const Rational mk = b[static_cast<std::size_t>(k - 1)] * Rational(k_factorial);
    if (is_integer(mk))
      m[static_cast<std::size_t>(k - 1)] = boost::multiprecision::numerator(mk);
    else
      labelled_integral = false;
  }

  CountTable table{.kind = StructureKind::assembly, .max_n = max_n, .counts = {}, .labelled = {}};
  if (labelled_integral) {
    std::vector<BigInt> s(static_cast<std::size_t>(max_n + 1));
    s[0] = 1;
    std::vector<BigInt> row{1};  // binom(n-1, j), j = 0..n-1
    for (std::int64_t n = 1; n <= max_n; ++n) {
      if (n > 1) {
        std::vector<BigInt> next(static_cast<std::size_t>(n));
        next[0] = 1;
        next[static_cast<std::size_t>(n - 1)] = 1;
        for (std::int64_t j = 1; j < n - 1; ++j)
          next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] + row[static_cast<std::size_t>(j)];
        row = std::move(next);
      }
      BigInt acc = 0;
      for (std::int64_t k = 1; k <= n; ++k) {
        const BigInt& mk = m[static_cast<std::size_t>(k - 1)];
        if (mk != 0) acc += row[static_cast<std::size_t>(k - 1)] * mk * s[static_cast<std::size_t>(n - k)];
      }
      s[static_cast<std::size_t>(n)] = std::move(acc);
    }
    BigInt n_factorial = 1;
    table.counts.reserve(s.size());
    for (std::int64_t n = 0; n <= max_n; ++n) {
      if (n > 0) n_factorial *= n;
      table.counts.emplace_back(s[static_cast<std::size_t>(n)], n_factorial);
    }
    table.labelled = std::move(s);
    return table;
  }

  // n c_n = sum_m m b_m c_(n-m) over the rationals.
  table.counts.assign(static_cast<std::size_t>(max_n + 1), Rational(0));
  table.counts[0] = 1;
  for (std::int64_t n = 1; n <= max_n; ++n) {
    Rational acc = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
      const Rational& bk = b[static_cast<std::size_t>(k - 1)];
      if (bk != 0) acc += bk * k * table.counts[static_cast<std::size_t>(n - k)];
    }
    table.counts[static_cast<std::size_t>(n)] = acc / n;
  }
  return table;
}

// Visits every partition of n as multiplicity pairs (part size, count),
// largest part first.
void for_each_partition(std::int64_t n, const std::function<void(const std::vector<std::pair<std::int64_t, std::int64_t>>&)>& visit) {
  std::vector<std::pair<std::int64_t, std::int64_t>> parts;
  std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t remaining, std::int64_t max_part) {
    if (remaining == 0) {
      visit(parts);
      return;
    }
    for (std::int64_t k = std::min(remaining, max_part); k >= 1; --k) {
      for (std::int64_t j = remaining / k; j >= 1; --j) {
        parts.emplace_back(k, j);
        rec(remaining - j * k, k - 1);
        parts.pop_back();
      }
    }
  };
  rec(n, n);
}

BigInt binomial(const BigInt& top, std::int64_t j) {
  if (j < 0) return 0;
  if (top < j) return 0;
  BigInt num = 1;
  BigInt den = 1;
  for (std::int64_t i = 0; i < j; ++i) {
    num *= top - i;
    den *= i + 1;
  }
  return num / den;
}

}  // namespace

LambdaCache lambda_values(const WeightSequence& w, StructureKind kind, std::int64_t max_n) {
  check_n(max_n);
  LambdaCache cache{.kind = kind, .values = std::vector<Rational>(static_cast<std::size_t>(max_n), Rational(0))};
  for (std::int64_t d = 1; d <= max_n; ++d) {
    const Rational term = w.exact(d) * d;
    if (term == 0) continue;
    if (kind == StructureKind::assembly) {
      cache.values[static_cast<std::size_t>(d - 1)] += term;
      continue;
    }
    for (std::int64_t m = d, q = 1; m <= max_n; m += d, ++q) {
      if (kind == StructureKind::selection && q % 2 == 0)
        cache.values[static_cast<std::size_t>(m - 1)] -= term;
      else
        cache.values[static_cast<std::size_t>(m - 1)] += term;
    }
  }
  return cache;
}

CountTable count_exact(const WeightSequence& w, StructureKind kind, std::int64_t max_n) {
  check_n(max_n);
  if (kind == StructureKind::assembly) return count_assembly(w, max_n);
  return count_integer(w, kind, max_n);
}

CountTable count_bruteforce(const WeightSequence& w, StructureKind kind, std::int64_t max_n) {
  check_n(max_n);
  if (max_n > kBruteforceLimit)
    throw DomainError("count_bruteforce: N = " + std::to_string(max_n) + " exceeds the enumeration limit " +
                      std::to_string(kBruteforceLimit));
  CountTable table{.kind = kind, .max_n = max_n, .counts = {}, .labelled = {}};

  if (kind != StructureKind::assembly) {
    const std::vector<BigInt> b = integer_weights(w, kind, max_n);
    for (std::int64_t n = 0; n <= max_n; ++n) {
      BigInt total = 0;
      for_each_partition(n, [&](const auto& parts) {
        BigInt ways = 1;
        for (const auto& [k, j] : parts) {
          const BigInt& bk = b[static_cast<std::size_t>(k - 1)];
          ways *= kind == StructureKind::multiset ? binomial(bk + j - 1, j) : binomial(bk, j);
          if (ways == 0) break;
        }
        total += ways;
      });
      table.counts.emplace_back(total);
    }
    return table;
  }

  std::vector<Rational> b(static_cast<std::size_t>(max_n));
  std::vector<Rational> m(static_cast<std::size_t>(max_n));
  bool labelled_integral = true;
  for (std::int64_t k = 1; k <= max_n; ++k) {
    b[static_cast<std::size_t>(k - 1)] = w.exact(k);
    m[static_cast<std::size_t>(k - 1)] = b[static_cast<std::size_t>(k - 1)] * Rational(factorial(k));
    labelled_integral = labelled_integral && is_integer(m[static_cast<std::size_t>(k - 1)]);
  }
  for (std::int64_t n = 0; n <= max_n; ++n) {
    Rational c = 0;
    Rational s = 0;
    for_each_partition(n, [&](const auto& parts) {
      Rational term_c = 1;
      Rational term_s = Rational(factorial(n));
      for (const auto& [k, j] : parts) {
        const Rational& bk = b[static_cast<std::size_t>(k - 1)];
        const Rational& mk = m[static_cast<std::size_t>(k - 1)];
        const Rational jf = Rational(factorial(j));
        const Rational kf = Rational(factorial(k));
        Rational bk_pow = 1;
        Rational mk_pow = 1;
        Rational kf_pow = 1;
        for (std::int64_t i = 0; i < j; ++i) {
          bk_pow *= bk;
          mk_pow *= mk;
          kf_pow *= kf;
        }
        term_c *= bk_pow / jf;
        term_s *= mk_pow / (kf_pow * jf);
      }
      c += term_c;
      s += term_s;
    });
    table.counts.push_back(c);
    if (labelled_integral) table.labelled.emplace_back(boost::multiprecision::numerator(s));
  }
  return table;
}

double log_count(const CountTable& table, std::int64_t n) {
  if (n < 0 || n > table.max_n) throw DomainError("log_count: n out of range");
  const Rational& c = table[n];
  if (c == 0) throw DomainError("log_count: c_" + std::to_string(n) + " = 0, log of zero");
  return log_of(c);
}

}  // namespace wpart
