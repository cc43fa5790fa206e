#pragma once

// Tilted component distributions and the representation
//
//   c_n = e^(n delta) f_n(e^-delta) P(Z_n = n),   Z_n = Y_1 + ... + Y_n,
//
// where Y_k / k is NegativeBinomial(b_k; e^(-delta k)) for multisets,
// Binomial(b_k; e^(-delta k) / (1 + e^(-delta k))) for selections and
// Poisson(b_k e^(-delta k)) for assemblies.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wpart/weights.hpp"

namespace wpart {

/// Components 1..n of one structure kind tilted by e^(-delta k).
class TiltedEnsemble {
 public:
  /// Throws DomainError unless delta > 0 and n >= 0.
  TiltedEnsemble(WeightSequence weights, StructureKind kind, std::int64_t n, double delta);

  /// Same components at another tilt; the cached b_k are shared.
  TiltedEnsemble with_delta(double delta) const;

  const WeightSequence& weights() const { return weights_; }
  StructureKind kind() const { return kind_; }
  std::int64_t n() const { return n_; }
  double delta() const { return delta_; }
  /// b_1..b_n.
  std::span<const double> b() const { return *b_; }

 private:
  TiltedEnsemble(WeightSequence weights, StructureKind kind, std::int64_t n, double delta,
                 std::shared_ptr<const std::vector<double>> b);

  WeightSequence weights_;
  StructureKind kind_;
  std::int64_t n_;
  double delta_;
  std::shared_ptr<const std::vector<double>> b_;
};

/// log f_n(e^-delta):
///   multiset  -sum b_k log(1 - e^(-k delta))
///   selection  sum b_k log(1 + e^(-k delta))
///   assembly   sum b_k e^(-k delta)
double log_Fn(const TiltedEnsemble& e);

/// First three cumulants of Z_n. mean = -(log f_n)', variance = B_n^2 =
/// (log f_n)'', third_cumulant = T_n = -(log f_n)'''.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double third_cumulant = 0.0;
};

Moments moments(const TiltedEnsemble& e);

/// Truncation point for the untruncated sums over k >= 1.
struct TailCut {
  std::int64_t k_max = 0;
  double bound = 0.0;              // bound on sum_{k > k_max} b_k e^(-k delta)
  double growth_constant = 0.0;    // max_{k <= 10^4} b_k / k^r used in the bound
};

/// Smallest cut of the form ceil((log(1/tol) + (r+1) log(1/delta)) / delta),
/// enlarged until C sum_{k > K} k^r e^(-k delta) <= tol. Needs meta.
TailCut tail_cut(const WeightSequence& w, double delta, double tol);

/// log F(delta) = log f_infinity(e^-delta), summed until the tail is below
/// tol * max(1, |value|). Diagnostic counterpart of log_Fn.
double log_F_infinite(const WeightSequence& w, StructureKind kind, double delta, double rel_tol = 1e-15);

/// Cumulants of the untruncated ensemble (derivatives of log F).
Moments moments_infinite(const WeightSequence& w, StructureKind kind, double delta, double rel_tol = 1e-15);

/// Root delta_n of E Z_n(delta) = n.
struct SaddlePoint {
  double delta_n = 0.0;
  double residual = 0.0;  // E Z_n(delta_n) - n
  double mean = 0.0;
  double variance = 0.0;
  double third_cumulant = 0.0;
  int iterations = 0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
};

/// Bisection on log delta followed by safeguarded Newton steps
/// (d mean / d delta = -variance). Stops when |residual| <= 1e-9 n.
///
/// Solvable iff sup_delta E Z_n > n: always for multisets with some b_k > 0,
/// k <= n; (1/2) sum k b_k > n for selections; sum k b_k > n for
/// assemblies. Throws UnsolvableError naming the failed condition.
SaddlePoint solve_saddle(const WeightSequence& w, StructureKind kind, std::int64_t n);

/// phi_n(alpha) = f_n(e^(-delta + 2 pi i alpha)) / f_n(e^-delta), summed in
/// log space with the principal log of each factor.
std::complex<double> char_fn(const TiltedEnsemble& e, double alpha);

/// log |phi_n(alpha)|, i.e. V_n(alpha; delta).
double log_char_fn_modulus(const TiltedEnsemble& e, double alpha);

enum class ProbabilityMethod { convolution, quadrature };

struct PointProbability {
  double value = 0.0;
  double log_value = 0.0;  // -inf when the probability is exactly zero
  ProbabilityMethod method = ProbabilityMethod::convolution;
  double error_estimate = 0.0;
  double imaginary_part = 0.0;  // quadrature only; zero by conjugate symmetry
  std::int64_t evaluations = 0;
};

inline constexpr std::int64_t kConvolutionLimit = 4000;

/// P(Z_n = n) by convolving the pmfs of Y_1..Y_n on {0..n}. Each pmf is
/// built in log space and every step is rescaled with the exponent tracked
/// separately, so tiny probabilities keep their logarithm.
/// Throws DomainError for n > 4000 and IntegralityError for a non-integer
/// b_k in a selection.
PointProbability point_prob_convolution(const TiltedEnsemble& e);

struct QuadratureOptions {
  double rel_tol = 1e-12;
  int points_per_width = 40;    // nodes per 1/B_n inside |alpha| <= alpha_0
  std::int64_t max_panels = 200000;
};

/// Inner cut alpha_0 = delta^((r+2)/(2(r+1))) log^2 n (clipped to 1/2);
/// 8 / B_n when the sequence has no meta.
double central_cut(const TiltedEnsemble& e, double variance);

/// P(Z_n = n) = int_{-1/2}^{1/2} phi_n(alpha) e^(-2 pi i n alpha) d alpha by
/// adaptive Gauss-Kronrod (7/15). Panels inside |alpha| <= alpha_0 start
/// with 40 nodes per 1/B_n, panels outside start 8 times wider; the panel
/// with the largest |K15 - G7| is bisected until the summed difference is
/// below rel_tol * (2 pi B_n^2)^(-1/2).
PointProbability point_prob_quadrature(const TiltedEnsemble& e, const QuadratureOptions& options = {});

/// log c_n recovered as n delta + log f_n(e^-delta) + log P(Z_n = n).
/// Throws DomainError when the probability is zero.
double reconstruct_count(const TiltedEnsemble& e, const PointProbability& p);

}  // namespace wpart
