#include "wpart/weights.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "wpart/errors.hpp"
#include "wpart/numfmt.hpp"
#include "wpart/specialfn.hpp"

namespace wpart {

double tail_constant(StructureKind kind) {
  switch (kind) {
    case StructureKind::multiset:
      return 4.0 / std::log(5.0);
    case StructureKind::selection:
      return 4.0;
    case StructureKind::assembly:
      return 1.0;
  }
  throw DomainError("unknown structure kind");
}

std::string_view name(StructureKind kind) {
  switch (kind) {
    case StructureKind::multiset:
      return "multiset";
    case StructureKind::selection:
      return "selection";
    case StructureKind::assembly:
      return "assembly";
  }
  return "?";
}

StructureKind parse_kind(std::string_view text) {
  if (text == "multiset" || text == "1") return StructureKind::multiset;
  if (text == "selection" || text == "2") return StructureKind::selection;
  if (text == "assembly" || text == "3") return StructureKind::assembly;
  throw ConfigError("unknown structure kind '" + std::string(text) + "' (expected multiset, selection or assembly)");
}

void DirichletMeta::validate() const {
  if (!(r > 0.0)) throw DomainError("DirichletMeta: pole r must be positive");
  if (!(residue > 0.0)) throw DomainError("DirichletMeta: residue A must be positive");
  if (!(c0 > 0.0 && c0 <= 1.0)) throw DomainError("DirichletMeta: C0 must lie in (0, 1]");
  if (!std::isfinite(d0) || !std::isfinite(d0_prime)) throw DomainError("DirichletMeta: D(0), D'(0) must be finite");
}

struct WeightSequence::Impl {
  std::string label;
  Evaluator b;
  ExactEvaluator exact;
  std::optional<DirichletMeta> meta;
  mutable std::once_flag constants_once;
  mutable std::optional<FormulaConstants> constants;
};

WeightSequence::WeightSequence(std::string label, Evaluator b, std::optional<DirichletMeta> meta,
                               ExactEvaluator exact) {
  if (!b) throw DomainError("WeightSequence: evaluator is empty");
  if (meta) meta->validate();
  auto impl = std::make_shared<Impl>();
  impl->label = std::move(label);
  impl->b = std::move(b);
  impl->exact = std::move(exact);
  impl->meta = meta;
  impl_ = std::move(impl);
}

const std::string& WeightSequence::label() const { return impl_->label; }

double WeightSequence::operator()(std::int64_t k) const {
  if (k < 1) throw DomainError("weights are indexed from k = 1");
  const double v = impl_->b(k);
  if (!(v >= 0.0) || !std::isfinite(v))
    throw DomainError(impl_->label + ": b_" + std::to_string(k) + " is not a finite nonnegative number");
  return v;
}

Rational WeightSequence::exact(std::int64_t k) const {
  if (k < 1) throw DomainError("weights are indexed from k = 1");
  if (impl_->exact) return impl_->exact(k);
  return exact_rational((*this)(k));
}

std::vector<double> WeightSequence::values(std::int64_t count) const {
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t k = 1; k <= count; ++k) out[static_cast<std::size_t>(k - 1)] = (*this)(k);
  return out;
}

const std::optional<DirichletMeta>& WeightSequence::meta() const { return impl_->meta; }

const DirichletMeta& WeightSequence::require_meta(std::string_view operation) const {
  if (!impl_->meta) throw MissingMetaError(std::string(operation) + " needs r, A, D(0), D'(0) for " + impl_->label);
  return *impl_->meta;
}

const FormulaConstants& WeightSequence::constants() const {
  const DirichletMeta& m = require_meta("formula constants");
  std::call_once(impl_->constants_once, [&] {
    impl_->constants = FormulaConstants{
        .zeta_r1 = special::zeta(m.r + 1.0),
        .gamma_r = special::gamma(m.r),
        .gamma_r1 = special::gamma(m.r + 1.0),
        .gamma_r2 = special::gamma(m.r + 2.0),
        .gamma_r3 = special::gamma(m.r + 3.0),
        .selection_factor = -std::expm1(-m.r * std::numbers::ln2),
    };
  });
  return *impl_->constants;
}

WeightSequence WeightSequence::with_meta(const DirichletMeta& meta) const {
  std::string label = impl_->label;
  label += label.find(':') == std::string::npos ? ":" : ",";
  label += "r=" + shortest(meta.r) + ",A=" + shortest(meta.residue) + ",D0=" + shortest(meta.d0) +
           ",D0prime=" + shortest(meta.d0_prime) + ",C0=" + shortest(meta.c0);
  return WeightSequence(std::move(label), impl_->b, meta, impl_->exact);
}

WeightSequence make_power_law(double rho, double r) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("power law: rho must be positive");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("power law: r must be positive");
  const double expo = r - 1.0;
  DirichletMeta meta{
      .r = r,
      .residue = rho,
      .d0 = rho * special::zeta(1.0 - r),
      .d0_prime = rho * special::zeta_prime(1.0 - r),
      .c0 = 1.0,
  };
  WeightSequence::ExactEvaluator exact;
  if (expo >= 0.0 && expo == std::floor(expo) && expo <= 64.0) {
    const auto e = static_cast<unsigned>(expo);
    const Rational rho_exact = exact_rational(rho);
    exact = [rho_exact, e](std::int64_t k) { return rho_exact * Rational(boost::multiprecision::pow(BigInt(k), e)); };
  }
  return WeightSequence(
      "power-law:rho=" + shortest(rho) + ",r=" + shortest(r),
      [rho, expo](std::int64_t k) { return rho * std::pow(static_cast<double>(k), expo); }, meta, std::move(exact));
}

WeightSequence make_example2() {
  const DirichletMeta meta{
      .r = 1.0,
      .residue = 0.25,
      .d0 = -0.5,
      .d0_prime = std::numbers::ln2 - 0.5 * std::log(2.0 * std::numbers::pi),
      .c0 = 1.0,
  };
  return WeightSequence(
      "example2", [](std::int64_t k) { return k % 4 == 0 ? 1.0 : 0.0; }, meta,
      [](std::int64_t k) { return Rational(k % 4 == 0 ? 1 : 0); });
}

WeightSequence make_example3() {
  const double scale = 12.0 * std::exp(7.0);
  const double log4 = std::log(4.0);
  const DirichletMeta meta{
      .r = 1.0,
      .residue = scale * 50.0 / 4.0,
      .d0 = scale * (log4 * log4 - 25.0),
      .d0_prime = scale * (-log4 * log4 * log4 + 25.0 * log4 - 25.0 * std::log(2.0 * std::numbers::pi)),
      .c0 = 1.0,
  };
  const auto log_ratio = [](double x) { return std::log(x) / x; };
  return WeightSequence(
      "example3",
      [scale, log_ratio](std::int64_t k) {
        const double x = static_cast<double>(k);
        double v = log_ratio(x);
        if (k % 4 == 0) v += 50.0 - 2.0 * log_ratio(x / 4.0);
        if (k % 16 == 0) v += log_ratio(x / 16.0);
        return scale * v;
      },
      meta);
}

WeightSequence make_forest() {
  const DirichletMeta meta{
      .r = 1.0,
      .residue = 1.0,
      .d0 = -0.5,
      .d0_prime = -0.5 * std::log(2.0 * std::numbers::pi),
      .c0 = 1.0,
  };
  return WeightSequence(
      "forest", [](std::int64_t) { return 1.0; }, meta, [](std::int64_t) { return Rational(1); });
}

namespace {

WeightSequence tabulated_with_label(std::string label, std::vector<Rational> values,
                                    std::optional<DirichletMeta> meta) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] < 0) throw DomainError("tabulated weights: entry " + std::to_string(i + 1) + " is negative");
  auto exact_values = std::make_shared<const std::vector<Rational>>(std::move(values));
  auto approx = std::make_shared<std::vector<double>>();
  approx->reserve(exact_values->size());
  for (const auto& v : *exact_values) approx->push_back(v.convert_to<double>());
  std::shared_ptr<const std::vector<double>> approx_c = approx;
  return WeightSequence(
      std::move(label),
      [approx_c](std::int64_t k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        return idx < approx_c->size() ? (*approx_c)[idx] : 0.0;
      },
      meta,
      [exact_values](std::int64_t k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        return idx < exact_values->size() ? (*exact_values)[idx] : Rational(0);
      });
}

double parse_double(std::string_view key, std::string_view text) {
  double out = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError("weights spec: value of '" + std::string(key) + "' is not a number: '" + std::string(text) + "'");
  return out;
}

std::map<std::string, std::string, std::less<>> parse_args(std::string_view family, std::string_view args) {
  std::map<std::string, std::string, std::less<>> out;
  while (!args.empty()) {
    const auto comma = args.find(',');
    const std::string_view item = args.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ConfigError("weights spec '" + std::string(family) + "': expected key=value, got '" + std::string(item) + "'");
    if (!out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))).second)
      throw ConfigError("weights spec '" + std::string(family) + "': duplicate key '" + std::string(item.substr(0, eq)) + "'");
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  return out;
}

void reject_unknown(std::string_view family, const std::map<std::string, std::string, std::less<>>& args,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : args) {
    bool ok = false;
    for (const auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("weights spec '" + std::string(family) + "': unknown key '" + key + "'");
  }
}

WeightSequence load_tabulated_spec(const std::string& path, const std::map<std::string, std::string, std::less<>>& args) {
  std::optional<DirichletMeta> meta;
  const auto get = [&](std::string_view key, double fallback) {
    const auto it = args.find(key);
    return it == args.end() ? fallback : parse_double(key, it->second);
  };
  const bool any_meta = args.contains("r") || args.contains("A") || args.contains("D0") || args.contains("D0prime") ||
                        args.contains("C0");
  if (any_meta) {
    meta = DirichletMeta{.r = get("r", 1.0), .residue = get("A", 1.0), .d0 = get("D0", 0.0),
                         .d0_prime = get("D0prime", 0.0), .c0 = get("C0", 1.0)};
    try {
      meta->validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  WeightSequence base = tabulated_with_label("tabulated:file=" + path, load_weight_table(path), std::nullopt);
  return meta ? base.with_meta(*meta) : base;
}

}  // namespace

WeightSequence make_tabulated(std::vector<Rational> values, std::optional<DirichletMeta> meta) {
  const std::string label = "tabulated:size=" + std::to_string(values.size());
  WeightSequence base = tabulated_with_label(label, std::move(values), std::nullopt);
  return meta ? base.with_meta(*meta) : base;
}

WeightSequence make_tabulated(const std::vector<double>& values, std::optional<DirichletMeta> meta) {
  std::vector<Rational> exact;
  exact.reserve(values.size());
  for (const double v : values) {
    if (!(v >= 0.0)) throw DomainError("tabulated weights: negative or NaN entry");
    exact.push_back(exact_rational(v));
  }
  return make_tabulated(std::move(exact), meta);
}

std::vector<Rational> load_weight_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weight table '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::vector<Rational> out;

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("weight table '" + path.string() + "': " + e.what());
    }
    for (const auto& item : doc) {
      if (item.is_number_integer())
        out.emplace_back(item.get<std::int64_t>());
      else if (item.is_number())
        out.push_back(exact_rational(item.get<double>()));
      else if (item.is_string())
        out.push_back(parse_rational(item.get<std::string>()));
      else
        throw ConfigError("weight table '" + path.string() + "': entries must be numbers or strings");
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.push_back(parse_rational(line));
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] < 0) throw ConfigError("weight table '" + path.string() + "': entry " + std::to_string(i + 1) + " is negative");
  return out;
}

WeightSequence parse_weights(std::string_view spec) {
  if (spec.empty()) throw ConfigError("empty weights spec");
  if (spec.front() == '@') return load_tabulated_spec(std::string(spec.substr(1)), {});

  const auto colon = spec.find(':');
  const std::string_view family = spec.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::map<std::string, std::string, std::less<>>{}
                                                    : parse_args(family, spec.substr(colon + 1));
  if (family == "power-law") {
    reject_unknown(family, args, {"rho", "r"});
    const auto get = [&](std::string_view key) {
      const auto it = args.find(key);
      return it == args.end() ? 1.0 : parse_double(key, it->second);
    };
    try {
      return make_power_law(get("rho"), get("r"));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (family == "example2" || family == "example3" || family == "forest") {
    reject_unknown(family, args, {});
    if (family == "example2") return make_example2();
    if (family == "example3") return make_example3();
    return make_forest();
  }
  if (family == "tabulated") {
    reject_unknown(family, args, {"file", "r", "A", "D0", "D0prime", "C0"});
    const auto it = args.find("file");
    if (it == args.end()) throw ConfigError("weights spec 'tabulated' needs file=PATH");
    return load_tabulated_spec(it->second, args);
  }
  throw ConfigError("unknown weights family '" + std::string(family) +
                    "' (expected power-law, example2, example3, forest, tabulated or @path)");
}

GrowthReport check_growth_bound(const WeightSequence& w, std::int64_t max_k) {
  const DirichletMeta& meta = w.require_meta("check_growth_bound");
  if (max_k < 10) throw DomainError("check_growth_bound: K must be at least 10");
  GrowthReport report;
  for (std::int64_t start = 1; start <= max_k; start *= 2) {
    const std::int64_t stop = std::min(2 * start - 1, max_k);
    double window = 0.0;
    for (std::int64_t k = start; k <= stop; ++k) {
      const double ratio = w(k) / std::pow(static_cast<double>(k), meta.r);
      window = std::max(window, ratio);
      if (ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.argmax = k;
      }
    }
    report.window_start.push_back(start);
    report.window_max.push_back(window);
  }
  const auto& m = report.window_max;
  const std::size_t n = m.size();
  // Nondecreasing up to rounding: a flat b_k / k^r is not o(1).
  const auto not_below = [](double a, double b) { return b >= a * (1.0 - 1e-12); };
  report.violation = n >= 3 && not_below(m[n - 3], m[n - 2]) && not_below(m[n - 2], m[n - 1]) && m[n - 1] > 0.0;
  return report;
}

}  // namespace wpart
