#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wpart/bignum.hpp"

namespace wpart {

/// The three decomposable structure types. The underlying value is the
/// index i used for M^(i), K_2^(i) and friends.
enum class StructureKind : int { multiset = 1, selection = 2, assembly = 3 };

inline constexpr std::array<StructureKind, 3> kAllKinds = {StructureKind::multiset, StructureKind::selection,
                                                          StructureKind::assembly};

/// M^(i) of the weakened third condition: 4/log 5, 4, 1.
double tail_constant(StructureKind kind);

std::string_view name(StructureKind kind);

/// Accepts "multiset"/"selection"/"assembly" and the indices "1"/"2"/"3".
StructureKind parse_kind(std::string_view text);

/// Data of the Dirichlet series D(s) = sum b_k k^-s read off its
/// continuation: a simple pole at s = r with residue A, the values D(0) and
/// D'(0), and the width C0 of the strip Re s >= -C0 it continues into.
struct DirichletMeta {
  double r = 1.0;
  double residue = 1.0;
  double d0 = 0.0;
  double d0_prime = 0.0;
  double c0 = 1.0;

  /// Throws DomainError unless r > 0, A > 0, 0 < C0 <= 1.
  void validate() const;
};

/// Special-function values the asymptotic formulas reuse for one sequence.
struct FormulaConstants {
  double zeta_r1;           // zeta(r + 1)
  double gamma_r;           // Gamma(r)
  double gamma_r1;          // Gamma(r + 1)
  double gamma_r2;          // Gamma(r + 2)
  double gamma_r3;          // Gamma(r + 3)
  double selection_factor;  // 1 - 2^-r
};

/// A weight sequence b_k >= 0, k >= 1, with optional Dirichlet metadata.
///
/// Values are immutable after construction and the type is cheap to copy;
/// concurrent reads are safe.
class WeightSequence {
 public:
  using Evaluator = std::function<double(std::int64_t)>;
  using ExactEvaluator = std::function<Rational(std::int64_t)>;

  /// `exact` supplies b_k as an exact rational; when absent the double
  /// returned by `b` is converted exactly.
  WeightSequence(std::string label, Evaluator b, std::optional<DirichletMeta> meta = std::nullopt,
                 ExactEvaluator exact = {});

  /// Canonical identifier, e.g. "power-law:rho=1,r=2".
  const std::string& label() const;

  /// b_k. Throws DomainError for k < 1 or a negative value.
  double operator()(std::int64_t k) const;

  /// b_k as an exact rational.
  Rational exact(std::int64_t k) const;

  /// b_1, ..., b_K (index 0 holds b_1).
  std::vector<double> values(std::int64_t count) const;

  const std::optional<DirichletMeta>& meta() const;

  /// Meta or MissingMetaError naming `operation`.
  const DirichletMeta& require_meta(std::string_view operation) const;

  /// Lazily computed and cached; requires meta.
  const FormulaConstants& constants() const;

  /// Same values, metadata replaced. Label gains the declared keys.
  WeightSequence with_meta(const DirichletMeta& meta) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// b_k = rho k^(r-1). D(s) = rho zeta(s - r + 1): pole at r, residue rho,
/// D(0) = rho zeta(1 - r), D'(0) = rho zeta'(1 - r), C0 = 1.
WeightSequence make_power_law(double rho, double r);

/// b_k = 1 if 4 | k, else 0; D(s) = 4^-s zeta(s).
WeightSequence make_example2();

/// The three-branch sequence with factor 12 e^7 that satisfies the weak third
/// condition but not the classical one. Metadata comes from
///   D(s) = 12 e^7 ( -(1 - 4^-s)^2 zeta'(s + 1) + 50 4^-s zeta(s) ):
///   r = 1, A = 12 e^7 * 50 / 4 (the pole of 50 4^-s zeta(s)),
///   D(0)  = 12 e^7 (log^2 4 - 25),
///   D'(0) = 12 e^7 (-log^3 4 + 25 log 4 - 25 log 2 pi),
/// the first term being entire with value log^2 4 and slope -log^3 4 at 0.
WeightSequence make_example3();

/// Linear forests as an assembly: m_k = k!, so b_k = 1.
WeightSequence make_forest();

/// b_k = values[k - 1] for k <= size, 0 beyond. Throws DomainError on a
/// negative entry.
WeightSequence make_tabulated(std::vector<Rational> values, std::optional<DirichletMeta> meta = std::nullopt);
WeightSequence make_tabulated(const std::vector<double>& values, std::optional<DirichletMeta> meta = std::nullopt);

/// Reads a table of weights: either a JSON array or one value per line
/// ('#' starts a comment). Values are kept exact ("1/3", "0.25").
std::vector<Rational> load_weight_table(const std::filesystem::path& path);

/// Builds a sequence from a CLI identifier:
///   power-law[:rho=R,r=S]   example2   example3   forest
///   tabulated:file=PATH[,r=..,A=..,D0=..,D0prime=..,C0=..]
///   @PATH                   (shorthand for tabulated:file=PATH)
/// Throws ConfigError on anything else.
WeightSequence parse_weights(std::string_view spec);

/// Result of the real-axis check of b_k = o(k^r).
struct GrowthReport {
  double max_ratio = 0.0;          // max over k <= K of b_k / k^r
  std::int64_t argmax = 0;
  std::vector<std::int64_t> window_start;  // dyadic windows [2^j, 2^(j+1))
  std::vector<double> window_max;
  bool violation = false;          // last three window maxima nondecreasing
};

/// Throws MissingMetaError without meta, DomainError if K < 10.
GrowthReport check_growth_bound(const WeightSequence& w, std::int64_t max_k);

}  // namespace wpart
