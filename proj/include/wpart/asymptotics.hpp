#pragma once

// Closed-form asymptotics driven by the Dirichlet metadata (r, A, D(0),
// D'(0), C0): expansions of log F(delta) and its derivatives, the saddle
// delta_n, and the leading-order estimates of c_n.

#include <cstdint>

#include "wpart/weights.hpp"

namespace wpart {

/// log F(delta) = leading + log_term + constant + O(delta^C0).
struct ExpansionTerms {
  StructureKind kind = StructureKind::multiset;
  double delta = 0.0;
  double leading = 0.0;          // A Gamma(r) Z delta^-r, Z the kind's zeta factor
  double log_term = 0.0;         // -D(0) log delta for multisets, else 0
  double constant = 0.0;         // D'(0), D(0) log 2 or D(0)
  double remainder_order = 0.0;  // C0; the remainder is never added

  double value() const { return leading + log_term + constant; }
};

/// Throws MissingMetaError without meta and DomainError unless delta > 0.
ExpansionTerms log_F_expansion(const WeightSequence& w, StructureKind kind, double delta);

/// Order-k derivative (k = 1, 2, 3) of the expansion. For multisets the
/// D(0) term is (-1)^k (k-1)! D(0) delta^-k, which is what differentiating
/// -D(0) log delta gives.
double log_F_derivative_expansion(const WeightSequence& w, StructureKind kind, double delta, int order);

/// Two-term prediction of delta_n for multisets, principal term otherwise.
double delta_asymptotic(const WeightSequence& w, StructureKind kind, std::int64_t n);

/// Exponent beta of the O(n^(-1-beta)) remainder in delta_asymptotic. Kept
/// as a tag; no constant is known, so nothing is asserted on it.
double delta_remainder_beta(const WeightSequence& w, StructureKind kind);

/// K_2 with B_n^2 ~ K_2 delta_n^-(r+2).
double variance_constant(const WeightSequence& w, StructureKind kind);

/// log c_n ~ log_constant + power_exponent log n + exponent_coeff n^(r/(r+1)).
struct AsymptoticEstimate {
  StructureKind kind = StructureKind::multiset;
  std::int64_t n = 0;
  double log_value = 0.0;
  double exponent_coeff = 0.0;
  double power_exponent = 0.0;
  double log_constant = 0.0;
};

/// Parameters of the leading-order formula, independent of n.
struct MeinardusParts {
  double exponent_coeff = 0.0;
  double power_exponent = 0.0;
  double log_constant = 0.0;
  double kappa1 = 0.0;  // multiset power exponent
  double kappa2 = 0.0;  // multiset exponent of the constant's zeta factor
};

MeinardusParts meinardus_parts(const WeightSequence& w, StructureKind kind);

/// Throws MissingMetaError without meta, DomainError for n < 1.
AsymptoticEstimate meinardus_estimate(const WeightSequence& w, StructureKind kind, std::int64_t n);

/// The estimate assembled from the solved saddle:
///   log c_n ~ n delta_n + log f_n(e^-delta_n) - (1/2) log(2 pi B_n^2).
struct KhintchineEstimate {
  StructureKind kind = StructureKind::multiset;
  std::int64_t n = 0;
  double log_value = 0.0;
  double delta_n = 0.0;
  double tilt = 0.0;          // n delta_n
  double log_fn = 0.0;
  double log_gaussian = 0.0;  // -(1/2) log(2 pi B_n^2)
};

/// Needs no meta. Errors propagate from solve_saddle.
KhintchineEstimate khintchine_estimate(const WeightSequence& w, StructureKind kind, std::int64_t n);

}  // namespace wpart
