#include "wpart/khintchine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "detail/summation.hpp"
#include "wpart/errors.hpp"
#include "wpart/numfmt.hpp"

namespace wpart {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Per-component cumulants of Y_k / k as functions of x = k delta.
struct UnitCumulants {
  double k1;
  double k2;
  double k3;
};

UnitCumulants unit_cumulants(StructureKind kind, double x) {
  switch (kind) {
    case StructureKind::multiset: {
      const double u = 1.0 / std::expm1(x);  // q / (1 - q)
      return {u, u * (1.0 + u), u * (1.0 + u) * (1.0 + 2.0 * u)};
    }
    case StructureKind::selection: {
      const double p = 1.0 / (std::exp(x) + 1.0);  // q / (1 + q)
      return {p, p * (1.0 - p), p * (1.0 - p) * (1.0 - 2.0 * p)};
    }
    case StructureKind::assembly: {
      const double q = std::exp(-x);
      return {q, q, q};
    }
  }
  return {0.0, 0.0, 0.0};
}

// log S_k(e^-delta) / b_k.
double unit_log_term(StructureKind kind, double x) {
  switch (kind) {
    case StructureKind::multiset:
      return -std::log(-std::expm1(-x));
    case StructureKind::selection:
      return std::log1p(std::exp(-x));
    case StructureKind::assembly:
      return std::exp(-x);
  }
  return 0.0;
}

double sum_log_terms(StructureKind kind, std::span<const double> b, double delta) {
  detail::CompensatedSum acc;
  for (std::size_t i = b.size(); i-- > 0;) {
    if (b[i] == 0.0) continue;
    acc += b[i] * unit_log_term(kind, static_cast<double>(i + 1) * delta);
  }
  return acc.value();
}

Moments sum_moments(StructureKind kind, std::span<const double> b, double delta) {
  detail::CompensatedSum mean;
  detail::CompensatedSum var;
  detail::CompensatedSum third;
  for (std::size_t i = b.size(); i-- > 0;) {
    if (b[i] == 0.0) continue;
    const double k = static_cast<double>(i + 1);
    const UnitCumulants c = unit_cumulants(kind, k * delta);
    mean += b[i] * k * c.k1;
    var += b[i] * k * k * c.k2;
    third += b[i] * k * k * k * c.k3;
  }
  return {mean.value(), var.value(), third.value()};
}

double growth_constant(const WeightSequence& w, double r) {
  double c = 0.0;
  for (std::int64_t k = 1; k <= 10000; ++k) c = std::max(c, w(k) / std::pow(static_cast<double>(k), r));
  return c;
}

// Cut for sum_{k > K} C k^power e^(-k delta) <= tol.
TailCut tail_cut_power(const WeightSequence& w, double delta, double tol, double extra_power) {
  if (!(delta > 0.0)) throw DomainError("tail_cut: delta must be positive");
  const DirichletMeta& meta = w.require_meta("tail_cut");
  const double c = growth_constant(w, meta.r);
  const double power = meta.r + extra_power;
  TailCut cut;
  cut.growth_constant = c;
  double k = std::ceil((std::log(1.0 / tol) + (power + 1.0) * std::log(1.0 / delta)) / delta);
  k = std::max(k, 1.0);
  for (int iter = 0; iter < 200; ++iter) {
    const double next = k + 1.0;
    const double ratio = std::exp(power / next - delta);
    if (ratio < 1.0) {
      const double bound = c * std::exp(power * std::log(next) - next * delta) / (1.0 - ratio);
      if (bound <= tol || c == 0.0) {
        cut.k_max = static_cast<std::int64_t>(k);
        cut.bound = bound;
        return cut;
      }
    }
    k = std::ceil(k * 1.25) + 1.0;
  }
  throw NumericalError("tail_cut: no truncation point found for delta = " + shortest(delta));
}

void validate_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("tilt delta must be positive and finite");
}

// sup over delta of E Z_n(delta), i.e. its limit as delta -> 0.
double mean_supremum(StructureKind kind, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += static_cast<double>(i + 1) * b[i];
  switch (kind) {
    case StructureKind::multiset:
      return s > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    case StructureKind::selection:
      return 0.5 * s;
    case StructureKind::assembly:
      return s;
  }
  return 0.0;
}

}  // namespace

TiltedEnsemble::TiltedEnsemble(WeightSequence weights, StructureKind kind, std::int64_t n, double delta)
    : TiltedEnsemble(weights, kind, n, delta, nullptr) {}

TiltedEnsemble::TiltedEnsemble(WeightSequence weights, StructureKind kind, std::int64_t n, double delta,
                               std::shared_ptr<const std::vector<double>> b)
    : weights_(std::move(weights)), kind_(kind), n_(n), delta_(delta), b_(std::move(b)) {
  validate_delta(delta);
  if (n < 0) throw DomainError("ensemble size n must be nonnegative");
  if (!b_) b_ = std::make_shared<const std::vector<double>>(weights_.values(n));
}

TiltedEnsemble TiltedEnsemble::with_delta(double delta) const { return TiltedEnsemble(weights_, kind_, n_, delta, b_); }

double log_Fn(const TiltedEnsemble& e) { return sum_log_terms(e.kind(), e.b(), e.delta()); }

Moments moments(const TiltedEnsemble& e) { return sum_moments(e.kind(), e.b(), e.delta()); }

TailCut tail_cut(const WeightSequence& w, double delta, double tol) { return tail_cut_power(w, delta, tol, 0.0); }

double log_F_infinite(const WeightSequence& w, StructureKind kind, double delta, double rel_tol) {
  validate_delta(delta);
  const TailCut cut = tail_cut_power(w, delta, rel_tol, 0.0);
  return sum_log_terms(kind, w.values(cut.k_max), delta);
}

Moments moments_infinite(const WeightSequence& w, StructureKind kind, double delta, double rel_tol) {
  validate_delta(delta);
  const TailCut cut = tail_cut_power(w, delta, rel_tol, 3.0);
  return sum_moments(kind, w.values(cut.k_max), delta);
}

SaddlePoint solve_saddle(const WeightSequence& w, StructureKind kind, std::int64_t n) {
  if (n < 1) throw DomainError("solve_saddle: n must be at least 1");
  const TiltedEnsemble base(w, kind, n, 1.0);
  const double target = static_cast<double>(n);
  const double sup = mean_supremum(kind, base.b());
  if (!(sup > target)) {
    const std::string rule = kind == StructureKind::selection   ? "(1/2) sum_{k<=n} k b_k > n"
                             : kind == StructureKind::assembly ? "sum_{k<=n} k b_k > n"
                                                               : "some b_k > 0 with k <= n";
    throw UnsolvableError("solve_saddle: E Z_n(delta) = n has no root for " + w.label() + ", " +
                          std::string(name(kind)) + ", n = " + std::to_string(n) + ": requires " + rule +
                          " (sup E Z_n = " + shortest(sup) + ")");
  }

  const auto mean_at = [&](double delta) { return sum_moments(kind, base.b(), delta).mean; };
  SaddlePoint out;
  double lo = 1e-12;
  double hi = 50.0;
  if (w.meta()) {
    const DirichletMeta& m = *w.meta();
    const FormulaConstants& c = w.constants();
    double h = m.residue * c.gamma_r1;
    if (kind == StructureKind::multiset) h *= c.zeta_r1;
    if (kind == StructureKind::selection) h *= c.selection_factor * c.zeta_r1;
    const double principal = std::pow(h / target, 1.0 / (m.r + 1.0));
    lo = principal / 10.0;
    hi = principal * 10.0;
  }
  for (int i = 0; i < 2000 && mean_at(lo) <= target; ++i) {
    lo /= 2.0;
    ++out.iterations;
    if (lo < 1e-300) throw NumericalError("solve_saddle: could not bracket the root from below");
  }
  for (int i = 0; i < 2000 && mean_at(hi) >= target; ++i) {
    hi *= 2.0;
    ++out.iterations;
    if (hi > 1e300) throw NumericalError("solve_saddle: could not bracket the root from above");
  }
  out.bracket_low = lo;
  out.bracket_high = hi;

  // Bisection in log delta: mean(lo) > n > mean(hi).
  while (hi / lo - 1.0 > 1e-7) {
    const double mid = std::sqrt(lo * hi);
    if (mean_at(mid) > target)
      lo = mid;
    else
      hi = mid;
    ++out.iterations;
  }

  double delta = std::sqrt(lo * hi);
  Moments mom = sum_moments(kind, base.b(), delta);
  for (int i = 0; i < 60; ++i) {
    const double resid = mom.mean - target;
    if (std::fabs(resid) <= 1e-13 * target) break;
    if (resid > 0.0)
      lo = delta;
    else
      hi = delta;
    double next = delta + resid / mom.variance;
    if (!(next > lo && next < hi)) next = std::sqrt(lo * hi);
    if (next == delta) break;
    delta = next;
    mom = sum_moments(kind, base.b(), delta);
    ++out.iterations;
  }

  out.delta_n = delta;
  out.mean = mom.mean;
  out.variance = mom.variance;
  out.third_cumulant = mom.third_cumulant;
  out.residual = mom.mean - target;
  if (!(std::fabs(out.residual) <= 1e-9 * target))
    throw NumericalError("solve_saddle: residual " + shortest(out.residual) + " above 1e-9 n");
  return out;
}

namespace {

// log phi_n(alpha) as (real, imaginary) parts.
std::complex<double> log_char_fn(const TiltedEnsemble& e, double alpha) {
  detail::CompensatedSum re;
  detail::CompensatedSum im;
  const auto b = e.b();
  const double delta = e.delta();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0.0) continue;
    const double k = static_cast<double>(i + 1);
    const double frac = std::remainder(alpha * k, 1.0);
    if (frac == 0.0) continue;
    const double theta = kTwoPi * frac;
    const double q = std::exp(-k * delta);
    const double s = std::sin(0.5 * theta);
    const double sin2 = s * s;
    switch (e.kind()) {
      case StructureKind::multiset: {
        // -b [log(1 - q e^(i theta)) - log(1 - q)]
        const double one_minus_q = -std::expm1(-k * delta);
        re += -0.5 * b[i] * std::log1p(4.0 * q * sin2 / (one_minus_q * one_minus_q));
        im += -b[i] * std::atan2(-q * std::sin(theta), 1.0 - q * std::cos(theta));
        break;
      }
      case StructureKind::selection: {
        // b [log(1 + q e^(i theta)) - log(1 + q)]
        const double one_plus_q = 1.0 + q;
        re += 0.5 * b[i] * std::log1p(-4.0 * q * sin2 / (one_plus_q * one_plus_q));
        im += b[i] * std::atan2(q * std::sin(theta), 1.0 + q * std::cos(theta));
        break;
      }
      case StructureKind::assembly: {
        // b q (e^(i theta) - 1)
        re += -2.0 * b[i] * q * sin2;
        im += b[i] * q * std::sin(theta);
        break;
      }
    }
  }
  return {re.value(), im.value()};
}

}  // namespace

std::complex<double> char_fn(const TiltedEnsemble& e, double alpha) {
  const std::complex<double> l = log_char_fn(e, alpha);
  return std::polar(std::exp(l.real()), l.imag());
}

double log_char_fn_modulus(const TiltedEnsemble& e, double alpha) { return log_char_fn(e, alpha).real(); }

PointProbability point_prob_convolution(const TiltedEnsemble& e) {
  const std::int64_t n = e.n();
  if (n > kConvolutionLimit)
    throw DomainError("point_prob_convolution: n = " + std::to_string(n) + " exceeds " +
                      std::to_string(kConvolutionLimit));
  const double delta = e.delta();
  const auto b = e.b();
  const auto size = static_cast<std::size_t>(n + 1);

  std::vector<double> dist(size, 0.0);
  dist[0] = 1.0;
  double log_scale = 0.0;
  std::vector<double> next(size);
  std::vector<double> log_pmf;
  std::vector<double> pmf;

  for (std::int64_t k = 1; k <= n; ++k) {
    const double bk = b[static_cast<std::size_t>(k - 1)];
    if (bk == 0.0) continue;
    const double x = static_cast<double>(k) * delta;
    const std::int64_t jmax_lattice = n / k;
    std::int64_t jmax = jmax_lattice;
    double log0 = 0.0;
    switch (e.kind()) {
      case StructureKind::multiset:
        log0 = bk * std::log(-std::expm1(-x));
        break;
      case StructureKind::selection:
        if (bk != std::floor(bk))
          throw IntegralityError("point_prob_convolution: selection pmf needs integer b_k; b_" + std::to_string(k) +
                                 " = " + shortest(bk));
        jmax = std::min<std::int64_t>(jmax, static_cast<std::int64_t>(bk));
        log0 = -bk * std::log1p(std::exp(-x));
        break;
      case StructureKind::assembly:
        log0 = -bk * std::exp(-x);
        break;
    }
    log_pmf.assign(static_cast<std::size_t>(jmax + 1), 0.0);
    log_pmf[0] = log0;
    for (std::int64_t j = 0; j < jmax; ++j) {
      const double jd = static_cast<double>(j);
      double ratio = 0.0;
      switch (e.kind()) {
        case StructureKind::multiset:
          ratio = std::log((bk + jd) / (jd + 1.0)) - x;
          break;
        case StructureKind::selection:
          ratio = std::log((bk - jd) / (jd + 1.0)) - x;
          break;
        case StructureKind::assembly:
          ratio = std::log(bk / (jd + 1.0)) - x;
          break;
      }
      log_pmf[static_cast<std::size_t>(j + 1)] = log_pmf[static_cast<std::size_t>(j)] + ratio;
    }
    const double top = *std::max_element(log_pmf.begin(), log_pmf.end());
    pmf.resize(log_pmf.size());
    for (std::size_t j = 0; j < log_pmf.size(); ++j) pmf[j] = std::exp(log_pmf[j] - top);
    log_scale += top;

    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t m = 0; m < size; ++m) {
      const double mass = dist[m];
      if (mass == 0.0) continue;
      const std::size_t reach = std::min(pmf.size(), (size - 1 - m) / static_cast<std::size_t>(k) + 1);
      for (std::size_t j = 0; j < reach; ++j) next[m + j * static_cast<std::size_t>(k)] += mass * pmf[j];
    }
    const double peak = *std::max_element(next.begin(), next.end());
    if (peak == 0.0) {
      dist.swap(next);
      break;
    }
    for (double& v : next) v /= peak;
    log_scale += std::log(peak);
    dist.swap(next);
  }

  PointProbability p;
  p.method = ProbabilityMethod::convolution;
  p.log_value = dist[size - 1] > 0.0 ? std::log(dist[size - 1]) + log_scale : -std::numeric_limits<double>::infinity();
  p.value = std::exp(p.log_value);
  p.error_estimate = 0.0;
  p.evaluations = n;
  return p;
}

double central_cut(const TiltedEnsemble& e, double variance) {
  const double n = static_cast<double>(e.n());
  double cut = 0.0;
  if (e.weights().meta()) {
    const double r = e.weights().meta()->r;
    const double log_n = std::log(std::max(n, 1.0));
    cut = std::pow(e.delta(), (r + 2.0) / (2.0 * (r + 1.0))) * log_n * log_n;
  } else {
    cut = 8.0 / std::sqrt(variance);
  }
  return std::min(cut, 0.5);
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  std::complex<double> value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace

PointProbability point_prob_quadrature(const TiltedEnsemble& e, const QuadratureOptions& options) {
  const std::int64_t n = e.n();
  PointProbability p;
  p.method = ProbabilityMethod::quadrature;
  if (n == 0) {
    p.value = 1.0;
    p.log_value = 0.0;
    return p;
  }
  const Moments mom = moments(e);
  if (!(mom.variance > 0.0)) throw DomainError("point_prob_quadrature: Z_n is degenerate (zero variance)");
  const double width = 1.0 / std::sqrt(mom.variance);
  const double cut = central_cut(e, mom.variance);
  const double scale = 1.0 / std::sqrt(kTwoPi * mom.variance);
  const double target_n = static_cast<double>(n);

  std::int64_t evals = 0;
  const auto integrand = [&](double alpha) {
    ++evals;
    const std::complex<double> l = log_char_fn(e, alpha);
    const double phase = l.imag() - kTwoPi * std::remainder(target_n * alpha, 1.0);
    return std::polar(std::exp(l.real()), phase);
  };
  const auto gk15 = [&](double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const std::complex<double> fc = integrand(c);
    std::complex<double> kron = fc * kWgk[7];
    std::complex<double> gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
      const std::complex<double> f1 = integrand(c - h * kXgk[j]);
      const std::complex<double> f2 = integrand(c + h * kXgk[j]);
      kron += (f1 + f2) * kWgk[j];
      if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    return Panel{a, b, kron * h, std::abs((kron - gauss) * h)};
  };

  // Initial partition: fine panels on |alpha| <= cut, 8x wider outside.
  const double inner_panel = 15.0 * width / static_cast<double>(options.points_per_width);
  std::vector<double> edges;
  const auto push_range = [&](double a, double b, double panel) {
    const auto count = static_cast<std::int64_t>(std::ceil((b - a) / panel - 1e-12));
    for (std::int64_t i = 0; i < count; ++i) edges.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count));
  };
  const double inner = std::max(cut, std::min(0.5, inner_panel));
  if (inner < 0.5) push_range(-0.5, -inner, 8.0 * inner_panel);
  push_range(-inner, inner, inner_panel);
  if (inner < 0.5) push_range(inner, 0.5, 8.0 * inner_panel);
  edges.push_back(0.5);

  std::priority_queue<Panel> heap;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel panel = gk15(edges[i], edges[i + 1]);
    total_error += panel.error;
    heap.push(panel);
  }
  const double tol = options.rel_tol * scale;
  while (total_error > tol && static_cast<std::int64_t>(heap.size()) < options.max_panels) {
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(worst.a, mid);
    const Panel right = gk15(mid, worst.b);
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Sum in sorted order for reproducibility.
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  double err = 0.0;
  while (!heap.empty()) {
    panels.push_back(heap.top());
    err += heap.top().error;
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  detail::CompensatedSum re;
  detail::CompensatedSum im;
  for (const Panel& panel : panels) {
    re += panel.value.real();
    im += panel.value.imag();
  }
  p.value = re.value();
  p.imaginary_part = im.value();
  p.error_estimate = err;
  p.evaluations = evals;
  p.log_value = p.value > 0.0 ? std::log(p.value) : -std::numeric_limits<double>::infinity();
  return p;
}

double reconstruct_count(const TiltedEnsemble& e, const PointProbability& p) {
  if (!(p.value > 0.0) && !std::isfinite(p.log_value))
    throw DomainError("reconstruct_count: P(Z_n = n) = 0, the count is zero or not resolvable");
  return static_cast<double>(e.n()) * e.delta() + log_Fn(e) + p.log_value;
}

}  // namespace wpart
