#include "wpart/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "detail/summation.hpp"
#include "wpart/asymptotics.hpp"
#include "wpart/errors.hpp"
#include "wpart/numfmt.hpp"

namespace wpart {

namespace {

constexpr double kVSumTol = 1e-10;

// b_k e^(-k delta) for k <= K, reused across an alpha scan.
class VKernel {
 public:
  VKernel(const WeightSequence& w, double delta) : delta_(delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("v_sum: delta must be positive and finite");
    const TailCut cut = tail_cut(w, delta, 0.5 * kVSumTol);
    bound_ = 2.0 * cut.bound;
    k_max_ = cut.k_max;
    const std::vector<double> b = w.values(cut.k_max);
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] == 0.0) continue;
      const auto k = static_cast<std::int64_t>(i + 1);
      const double weight = b[i] * std::exp(-static_cast<double>(k) * delta);
      if (weight == 0.0) continue;
      k_.push_back(k);
      weight_.push_back(weight);
    }
  }

  VSum operator()(double alpha) const {
    detail::CompensatedSum acc;
    for (std::size_t i = k_.size(); i-- > 0;) {
      const double frac = std::remainder(static_cast<double>(k_[i]) * alpha, 1.0);
      if (frac == 0.0) continue;
      const double s = std::sin(std::numbers::pi * frac);
      acc += weight_[i] * s * s;
    }
    return {delta_, alpha, 2.0 * acc.value(), bound_, k_max_};
  }

  double bound() const { return bound_; }
  std::int64_t k_max() const { return k_max_; }

 private:
  double delta_;
  double bound_ = 0.0;
  std::int64_t k_max_ = 0;
  std::vector<std::int64_t> k_;
  std::vector<double> weight_;
};

void check_small_deltas(const std::vector<double>& deltas) {
  if (deltas.empty()) throw DomainError("condition check: empty delta grid");
  for (double d : deltas)
    if (!(d > 0.0 && d < 0.1)) throw DomainError("condition check: every delta must lie in (0, 0.1), got " + shortest(d));
}

std::string grid_spec(const GridOptions& o, const std::string& domain) {
  return domain + "; " + std::to_string(o.geometric_points * o.refinement) + " geometric points near the lower end, " +
         std::to_string(o.uniform_points * o.refinement) + " uniform points, Farey fractions of order " +
         std::to_string(o.farey_order);
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

VSum v_sum(const WeightSequence& w, double delta, double alpha) { return VKernel(w, delta)(alpha); }

std::string_view name(Condition c) { return c == Condition::meinardus_iii ? "iii" : "iii-prime"; }

std::string_view name(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

std::vector<double> alpha_grid(double low, bool open_low, const GridOptions& options) {
  if (!(low > 0.0 && low < 0.5)) throw DomainError("alpha_grid: lower endpoint must lie in (0, 1/2)");
  if (options.refinement < 1 || options.uniform_points < 1 || options.geometric_points < 2)
    throw ConfigError("alpha_grid: point counts must be positive");
  std::vector<double> grid;
  const double start = open_low ? low * (1.0 + 1e-6) : low;
  const int geo = options.geometric_points * options.refinement;
  const double geo_end = std::min(0.5, 64.0 * low);
  if (geo_end > start) {
    const double ratio = std::log(geo_end / start);
    for (int i = 0; i < geo; ++i) grid.push_back(start * std::exp(ratio * i / (geo - 1)));
  }
  const int uni = options.uniform_points * options.refinement;
  for (int j = open_low ? 1 : 0; j <= uni; ++j) grid.push_back(low + (0.5 - low) * j / uni);
  for (int q = 2; q <= options.farey_order; ++q)
    for (int p = 1; 2 * p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const double a = static_cast<double>(p) / q;
      if (a > low || (!open_low && a == low)) grid.push_back(a);
    }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ConditionReport check_condition_iii(const WeightSequence& w, const std::vector<double>& deltas, double epsilon,
                                    const GridOptions& options) {
  w.require_meta("check_condition_iii");
  check_small_deltas(deltas);
  if (!(epsilon > 0.0)) throw DomainError("check_condition_iii: epsilon must be positive");
  ConditionReport report;
  report.condition = Condition::meinardus_iii;
  report.epsilon = epsilon;
  report.delta_grid = deltas;
  std::sort(report.delta_grid.begin(), report.delta_grid.end(), std::greater<>());
  report.alpha_grid_spec = grid_spec(options, "delta/(2 pi) < alpha <= 1/2");

  bool exact_zero = false;
  bool inside_bound = false;
  for (double delta : report.delta_grid) {
    const VKernel kernel(w, delta);
    const auto grid = alpha_grid(delta / (2.0 * std::numbers::pi), true, options);
    const double scale = std::pow(delta, epsilon);
    std::vector<double> row;
    row.reserve(grid.size());
    double best = std::numeric_limits<double>::infinity();
    double best_alpha = grid.front();
    double best_raw = 0.0;
    for (double a : grid) {
      const VSum v = kernel(a);
      row.push_back(v.value * scale);
      if (v.value * scale < best) {
        best = v.value * scale;
        best_alpha = a;
        best_raw = v.value;
      }
    }
    report.alphas.push_back(grid);
    report.margin.push_back(std::move(row));
    report.threshold.push_back(0.0);
    report.min_margin.push_back(best);
    report.argmin_alpha.push_back(best_alpha);
    report.truncation_bound.push_back(kernel.bound());
    report.truncation_k = std::max(report.truncation_k, kernel.k_max());
    exact_zero = best_raw == 0.0;  // ends up describing the smallest delta
    inside_bound = inside_bound || (best_raw > 0.0 && best_raw <= kernel.bound());
  }

  const double smallest = report.delta_grid.back();
  if (exact_zero) {
    report.verdict = Verdict::fail;
    report.witness_alpha = report.argmin_alpha.back();
    report.witness_delta = smallest;
    report.reason = "V vanishes exactly at alpha = " + shortest(report.witness_alpha);
    return report;
  }
  if (inside_bound) {
    report.verdict = Verdict::indeterminate;
    report.reason = "a grid minimum lies inside the truncation bound";
    return report;
  }
  bool any_zero = false;
  for (double m : report.min_margin) any_zero = any_zero || m == 0.0;
  if (any_zero || report.delta_grid.size() < 2) {
    report.verdict = Verdict::indeterminate;
    report.reason = any_zero ? "V vanishes on part of the delta grid" : "a trend needs at least two deltas";
    return report;
  }
  report.trend_slope = loglog_slope(report.delta_grid, report.min_margin);
  report.trend_used = true;
  if (report.trend_slope >= 0.2) {
    report.verdict = Verdict::fail;
    report.witness_alpha = report.argmin_alpha.back();
    report.witness_delta = smallest;
    report.reason = "min V delta^epsilon decays like delta^" + significant(report.trend_slope, 4);
  } else {
    report.verdict = Verdict::pass;
    report.reason = "min V delta^epsilon stays bounded below on the grid";
  }
  return report;
}

ConditionReport check_condition_iii_prime(const WeightSequence& w, StructureKind kind,
                                          const std::vector<double>& deltas, double epsilon,
                                          const GridOptions& options) {
  const DirichletMeta& meta = w.require_meta("check_condition_iii_prime");
  check_small_deltas(deltas);
  if (!(epsilon > 0.0)) throw DomainError("check_condition_iii_prime: epsilon must be positive");
  ConditionReport report;
  report.condition = Condition::weak_iii_prime;
  report.kind = kind;
  report.epsilon = epsilon;
  report.delta_grid = deltas;
  std::sort(report.delta_grid.begin(), report.delta_grid.end(), std::greater<>());
  report.alpha_grid_spec = grid_spec(options, "sqrt(delta) <= alpha <= 1/2");
  const double factor = (1.0 + meta.r / 2.0 + epsilon) * tail_constant(kind);

  bool all_pass = true;
  bool failed = false;
  for (double delta : report.delta_grid) {
    const VKernel kernel(w, delta);
    const auto grid = alpha_grid(std::sqrt(delta), false, options);
    const double threshold = factor * std::log(1.0 / delta);
    std::vector<double> row;
    row.reserve(grid.size());
    double best = std::numeric_limits<double>::infinity();
    double best_alpha = grid.front();
    for (double a : grid) {
      const double m = kernel(a).value - threshold;
      row.push_back(m);
      if (m < best) {
        best = m;
        best_alpha = a;
      }
    }
    report.alphas.push_back(grid);
    report.margin.push_back(std::move(row));
    report.threshold.push_back(threshold);
    report.min_margin.push_back(best);
    report.argmin_alpha.push_back(best_alpha);
    report.truncation_bound.push_back(kernel.bound());
    report.truncation_k = std::max(report.truncation_k, kernel.k_max());
    all_pass = all_pass && best >= 0.0;
    if (!failed && best + kernel.bound() < 0.0) {
      failed = true;
      report.witness_alpha = best_alpha;
      report.witness_delta = delta;
    }
  }
  if (failed) {
    report.verdict = Verdict::fail;
    report.reason = "V falls below the threshold at alpha = " + shortest(report.witness_alpha) +
                    ", delta = " + shortest(report.witness_delta);
  } else if (all_pass) {
    report.verdict = Verdict::pass;
    report.reason = "V exceeds the threshold at every grid point";
  } else {
    report.verdict = Verdict::indeterminate;
    report.reason = "a negative margin lies inside the truncation bound";
  }
  return report;
}

Lemma3Report check_lemma3_bound(const WeightSequence& w, StructureKind kind, std::int64_t n, double slack,
                                std::int64_t points) {
  if (points < 2) throw ConfigError("check_lemma3_bound: need at least two grid points");
  const SaddlePoint s = solve_saddle(w, kind, n);
  const TiltedEnsemble e(w, kind, n, s.delta_n);
  const VKernel kernel(w, s.delta_n);
  const double m = tail_constant(kind);
  Lemma3Report report;
  report.kind = kind;
  report.n = n;
  report.delta_n = s.delta_n;
  report.slack = slack;
  report.grid_points = points;
  report.max_excess = -std::numeric_limits<double>::infinity();
  for (std::int64_t j = 0; j < points; ++j) {
    const double alpha = -0.5 + static_cast<double>(j) / static_cast<double>(points - 1);
    const double modulus = std::exp(log_char_fn_modulus(e, alpha));
    const double envelope = std::exp(-kernel(alpha).value / m);
    const double excess = modulus - (1.0 + slack) * envelope;
    if (excess > 0.0) ++report.violations;
    if (excess > report.max_excess) {
      report.max_excess = excess;
      report.worst_alpha = alpha;
    }
    report.max_ratio = std::max(report.max_ratio, modulus / envelope);
  }
  return report;
}

LocalLimitReport check_local_limit(const WeightSequence& w, StructureKind kind, const std::vector<std::int64_t>& ns) {
  const DirichletMeta& meta = w.require_meta("check_local_limit");
  LocalLimitReport report;
  report.kind = kind;
  report.k2 = variance_constant(w, kind);
  for (std::int64_t n : ns) {
    const SaddlePoint s = solve_saddle(w, kind, n);
    const TiltedEnsemble e(w, kind, n, s.delta_n);
    LocalLimitRow row;
    row.n = n;
    row.delta_n = s.delta_n;
    row.variance = s.variance;
    row.probability = n <= kConvolutionLimit ? point_prob_convolution(e) : point_prob_quadrature(e);
    row.gaussian = 1.0 / std::sqrt(2.0 * std::numbers::pi * s.variance);
    row.llt_ratio = row.probability.value / row.gaussian;
    row.variance_ratio = s.variance * std::pow(s.delta_n, meta.r + 2.0) / report.k2;
    report.rows.push_back(row);
  }
  return report;
}

ZetaSumCheck check_zeta_sum_bound(double delta, double alpha) {
  const double a = std::fabs(alpha);
  if (!(delta > 0.0)) throw DomainError("check_zeta_sum_bound: delta must be positive");
  if (!(a > 0.0 && a <= 0.5)) throw DomainError("check_zeta_sum_bound: need 0 < |alpha| <= 1/2");
  if (!(a / delta > 1.0 / (2.0 * std::numbers::pi)))
    throw DomainError("check_zeta_sum_bound: need |alpha| / delta > 1/(2 pi)");
  ZetaSumCheck c;
  c.delta = delta;
  c.alpha = alpha;
  c.p = static_cast<std::int64_t>(std::floor((1.0 + a / delta) / (2.0 * a)));
  detail::CompensatedSum acc;
  for (std::int64_t k = 1; k <= c.p; ++k) {
    const double s = std::sin(std::numbers::pi * std::remainder(static_cast<double>(k) * a, 1.0));
    acc += s * s;
  }
  c.sum = 2.0 * acc.value();
  c.lower_bound = 0.5 / delta;
  c.p_delta = static_cast<double>(c.p) * delta;
  c.sum_ok = c.sum >= c.lower_bound;
  c.p_delta_ok = c.p_delta < 0.5 * (1.0 + 2.0 * std::numbers::pi);
  return c;
}

}  // namespace wpart
