#pragma once

// Grid-based checks of the conditions on the trigonometric sum
//
//   V(alpha; delta) = 2 sum_k b_k e^(-k delta) sin^2(pi k alpha)
//
// and of the modulus and local-limit statements built on it. A verdict is
// evidence at the resolution of the grid, never a proof.

#include <cstdint>
#include <string>
#include <vector>

#include "wpart/khintchine.hpp"
#include "wpart/weights.hpp"

namespace wpart {

struct VSum {
  double delta = 0.0;
  double alpha = 0.0;
  double value = 0.0;                   // truncated sum, a lower bound of V
  double truncation_error_bound = 0.0;  // V - value lies in [0, bound]
  std::int64_t k_max = 0;
};

/// Truncated at the cut of tail_cut() with tol = 1e-10, so the bound is at
/// most 1e-10 * max(1, value). Needs meta (for r in the tail bound).
VSum v_sum(const WeightSequence& w, double delta, double alpha);

enum class Condition { meinardus_iii, weak_iii_prime };
enum class Verdict { pass, fail, indeterminate };

std::string_view name(Condition c);
std::string_view name(Verdict v);

struct GridOptions {
  int uniform_points = 512;    // uniform part of the alpha grid
  int geometric_points = 128;  // geometric part near the lower endpoint
  int farey_order = 16;        // all p/q with q <= farey_order
  /// Multiplies the point counts; 2 is the resolution-doubling check.
  int refinement = 1;
};

/// Sorted alpha grid on [low, 1/2] (low excluded when `open_low`).
std::vector<double> alpha_grid(double low, bool open_low, const GridOptions& options = {});

struct ConditionReport {
  Condition condition = Condition::meinardus_iii;
  StructureKind kind = StructureKind::multiset;
  double epsilon = 0.0;
  std::vector<double> delta_grid;
  std::string alpha_grid_spec;
  std::vector<std::vector<double>> alphas;  // per delta
  /// Condition (iii): V delta^epsilon. Condition (iii'): V - threshold.
  std::vector<std::vector<double>> margin;
  std::vector<double> threshold;            // (iii') per delta, 0 for (iii)
  std::vector<double> min_margin;           // per delta
  std::vector<double> argmin_alpha;         // per delta
  std::vector<double> truncation_bound;     // per delta, on V
  std::int64_t truncation_k = 0;            // largest cut used
  double trend_slope = 0.0;                 // (iii): d log(min margin) / d log delta
  bool trend_used = false;                  // (iii): verdict came from the slope
  Verdict verdict = Verdict::indeterminate;
  double witness_alpha = 0.0;               // set when verdict == fail
  double witness_delta = 0.0;
  std::string reason;
};

/// Condition (iii): over delta/(2 pi) < alpha <= 1/2 track the minimum of
/// V delta^epsilon for each delta (all < 0.1). Fail on an exactly zero V
/// at the smallest delta, or when the scaled minimum decays with delta
/// (log-log slope >= 0.2); indeterminate when a minimum is positive but
/// inside the truncation bound; pass otherwise.
ConditionReport check_condition_iii(const WeightSequence& w, const std::vector<double>& deltas, double epsilon,
                                    const GridOptions& options = {});

/// Condition (iii'): V >= (1 + r/2 + epsilon) M log(1/delta) on
/// sqrt(delta) <= alpha <= 1/2. Pass when every truncated margin is >= 0,
/// fail when some margin stays negative after adding the truncation bound.
ConditionReport check_condition_iii_prime(const WeightSequence& w, StructureKind kind,
                                          const std::vector<double>& deltas, double epsilon,
                                          const GridOptions& options = {});

struct Lemma3Report {
  StructureKind kind = StructureKind::multiset;
  std::int64_t n = 0;
  double delta_n = 0.0;
  double slack = 0.0;
  std::int64_t grid_points = 0;
  std::int64_t violations = 0;
  double max_excess = 0.0;    // max of |phi_n| - (1 + slack) exp(-V / M)
  double worst_alpha = 0.0;
  double max_ratio = 0.0;     // max of |phi_n| / exp(-V / M)
};

/// |phi_n(alpha)| <= (1 + slack) exp(-V(alpha; delta_n) / M) on `points`
/// equally spaced alphas covering [-1/2, 1/2].
Lemma3Report check_lemma3_bound(const WeightSequence& w, StructureKind kind, std::int64_t n, double slack = 1e-6,
                                std::int64_t points = 1024);

struct LocalLimitRow {
  std::int64_t n = 0;
  double delta_n = 0.0;
  double variance = 0.0;
  PointProbability probability;
  double gaussian = 0.0;         // (2 pi B_n^2)^(-1/2)
  double llt_ratio = 0.0;        // P(Z_n = n) sqrt(2 pi B_n^2)
  double variance_ratio = 0.0;   // B_n^2 delta_n^(r+2) / K_2
};

struct LocalLimitReport {
  StructureKind kind = StructureKind::multiset;
  double k2 = 0.0;
  std::vector<LocalLimitRow> rows;
};

/// Convolution for n <= kConvolutionLimit, quadrature beyond.
LocalLimitReport check_local_limit(const WeightSequence& w, StructureKind kind, const std::vector<std::int64_t>& ns);

/// The elementary bound chain behind condition (iii) for b_k = 1: with
/// P = floor((1 + |alpha|/delta) / (2|alpha|)),
///   2 sum_{k <= P} sin^2(pi k alpha) >= 1 / (2 delta)   and
///   P delta < (1 + 2 pi) / 2,
/// whenever 0 < |alpha| <= 1/2 and |alpha| / delta > 1 / (2 pi).
struct ZetaSumCheck {
  double delta = 0.0;
  double alpha = 0.0;
  std::int64_t p = 0;
  double sum = 0.0;
  double lower_bound = 0.0;
  double p_delta = 0.0;
  bool sum_ok = false;
  bool p_delta_ok = false;
};

/// Throws DomainError when (delta, alpha) violates the side conditions.
ZetaSumCheck check_zeta_sum_bound(double delta, double alpha);

}  // namespace wpart
