#include "wpart/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wpart/errors.hpp"
#include "wpart/khintchine.hpp"

namespace wpart {

namespace {

// Kind-specific factor multiplying A Gamma(.) in the leading terms.
double zeta_factor(const FormulaConstants& c, StructureKind kind) {
  switch (kind) {
    case StructureKind::multiset:
      return c.zeta_r1;
    case StructureKind::selection:
      return c.selection_factor * c.zeta_r1;
    case StructureKind::assembly:
      return 1.0;
  }
  return 1.0;
}

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive and finite");
}

}  // namespace

ExpansionTerms log_F_expansion(const WeightSequence& w, StructureKind kind, double delta) {
  const DirichletMeta& m = w.require_meta("log_F_expansion");
  check_delta(delta);
  const FormulaConstants& c = w.constants();
  ExpansionTerms t;
  t.kind = kind;
  t.delta = delta;
  t.remainder_order = m.c0;
  t.leading = m.residue * c.gamma_r * zeta_factor(c, kind) * std::pow(delta, -m.r);
  switch (kind) {
    case StructureKind::multiset:
      t.log_term = -m.d0 * std::log(delta);
      t.constant = m.d0_prime;
      break;
    case StructureKind::selection:
      t.constant = m.d0 * std::numbers::ln2;
      break;
    case StructureKind::assembly:
      t.constant = m.d0;
      break;
  }
  return t;
}

double log_F_derivative_expansion(const WeightSequence& w, StructureKind kind, double delta, int order) {
  const DirichletMeta& m = w.require_meta("log_F_derivative_expansion");
  check_delta(delta);
  if (order < 1 || order > 3) throw DomainError("derivative order must be 1, 2 or 3");
  const FormulaConstants& c = w.constants();
  const double sign = order % 2 == 0 ? 1.0 : -1.0;
  const double gamma_rk = order == 1 ? c.gamma_r1 : order == 2 ? c.gamma_r2 : c.gamma_r3;
  double value = sign * m.residue * gamma_rk * zeta_factor(c, kind) * std::pow(delta, -m.r - order);
  if (kind == StructureKind::multiset) {
    const double factorial = order == 3 ? 2.0 : 1.0;  // (order - 1)!
    value += sign * factorial * m.d0 * std::pow(delta, -order);
  }
  return value;
}

double delta_asymptotic(const WeightSequence& w, StructureKind kind, std::int64_t n) {
  const DirichletMeta& m = w.require_meta("delta_asymptotic");
  if (n < 1) throw DomainError("delta_asymptotic: n must be at least 1");
  const FormulaConstants& c = w.constants();
  const double nd = static_cast<double>(n);
  double delta = std::pow(m.residue * c.gamma_r1 * zeta_factor(c, kind), 1.0 / (m.r + 1.0)) *
                 std::pow(nd, -1.0 / (m.r + 1.0));
  if (kind == StructureKind::multiset) delta += m.d0 / (m.r + 1.0) / nd;
  return delta;
}

double delta_remainder_beta(const WeightSequence& w, StructureKind kind) {
  const DirichletMeta& m = w.require_meta("delta_remainder_beta");
  if (kind == StructureKind::multiset && m.r < m.c0) return m.r / (m.r + 1.0);
  return m.c0 / (m.r + 1.0);
}

double variance_constant(const WeightSequence& w, StructureKind kind) {
  const DirichletMeta& m = w.require_meta("variance_constant");
  const FormulaConstants& c = w.constants();
  return m.residue * c.gamma_r2 * zeta_factor(c, kind);
}

MeinardusParts meinardus_parts(const WeightSequence& w, StructureKind kind) {
  const DirichletMeta& m = w.require_meta("meinardus_estimate");
  const FormulaConstants& c = w.constants();
  const double r = m.r;
  const double h = m.residue * c.gamma_r1 * zeta_factor(c, kind);
  const double log_gauss = -0.5 * std::log(2.0 * std::numbers::pi * (1.0 + r));

  MeinardusParts p;
  p.exponent_coeff = (1.0 + 1.0 / r) * std::pow(h, 1.0 / (r + 1.0));
  p.kappa1 = (2.0 * m.d0 - 2.0 - r) / (2.0 * (1.0 + r));
  p.kappa2 = (1.0 - 2.0 * m.d0) / (2.0 * (1.0 + r));
  switch (kind) {
    case StructureKind::multiset:
      p.power_exponent = p.kappa1;
      p.log_constant = m.d0_prime + log_gauss + p.kappa2 * std::log(h);
      break;
    case StructureKind::selection:
      p.power_exponent = -(r + 2.0) / (2.0 * r + 2.0);
      p.log_constant = m.d0 * std::numbers::ln2 + log_gauss + std::log(h) / (2.0 * r + 2.0);
      break;
    case StructureKind::assembly:
      p.power_exponent = -(r + 2.0) / (2.0 * r + 2.0);
      p.log_constant = m.d0 + log_gauss + std::log(h) / (2.0 * r + 2.0);
      break;
  }
  return p;
}

AsymptoticEstimate meinardus_estimate(const WeightSequence& w, StructureKind kind, std::int64_t n) {
  const MeinardusParts p = meinardus_parts(w, kind);
  if (n < 1) throw DomainError("meinardus_estimate: n must be at least 1");
  const double r = w.meta()->r;
  const double nd = static_cast<double>(n);
  AsymptoticEstimate e;
  e.kind = kind;
  e.n = n;
  e.exponent_coeff = p.exponent_coeff;
  e.power_exponent = p.power_exponent;
  e.log_constant = p.log_constant;
  e.log_value = e.log_constant + e.power_exponent * std::log(nd) + e.exponent_coeff * std::pow(nd, r / (r + 1.0));
  return e;
}

KhintchineEstimate khintchine_estimate(const WeightSequence& w, StructureKind kind, std::int64_t n) {
  const SaddlePoint s = solve_saddle(w, kind, n);
  const TiltedEnsemble e(w, kind, n, s.delta_n);
  KhintchineEstimate k;
  k.kind = kind;
  k.n = n;
  k.delta_n = s.delta_n;
  k.tilt = static_cast<double>(n) * s.delta_n;
  k.log_fn = log_Fn(e);
  k.log_gaussian = -0.5 * std::log(2.0 * std::numbers::pi * s.variance);
  k.log_value = k.tilt + k.log_fn + k.log_gaussian;
  return k;
}

}  // namespace wpart
