#include "wpart/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "wpart/asymptotics.hpp"
#include "wpart/errors.hpp"
#include "wpart/exact.hpp"
#include "wpart/khintchine.hpp"
#include "wpart/numfmt.hpp"
#include "wpart/specialfn.hpp"
#include "wpart/verify.hpp"

namespace wpart::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kCommands = {"count", "compare", "check", "delta", "llt", "special", "asymptote"};
const std::vector<std::string> kConditions = {"iii", "iii-prime", "lemma3"};
const std::vector<std::string> kMethods = {"both", "convolution", "quadrature"};
const std::vector<std::string> kFunctions = {"gamma",        "log-gamma", "digamma", "zeta", "zeta-prime",
                                             "bose-log-integral"};

bool one_of(const std::vector<std::string>& options, const std::string& value) {
  return std::find(options.begin(), options.end(), value) != options.end();
}

std::string joined(const std::vector<std::string>& options) {
  std::string out;
  for (std::size_t i = 0; i < options.size(); ++i) out += (i ? ", " : "") + options[i];
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError("invalid integer '" + std::string(text) + "' for " + std::string(what));
  return v;
}

double parse_real(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError("invalid number '" + std::string(text) + "' for " + std::string(what));
  return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError("invalid boolean '" + std::string(text) + "' for " + std::string(what));
}

std::string join_ints(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + shortest(v[i]);
  return out;
}

void validate(const RunConfig& c) {
  if (!one_of(kCommands, c.command)) throw ConfigError("unknown command '" + c.command + "'");
  if (!one_of(kConditions, c.condition))
    throw ConfigError("unknown condition '" + c.condition + "' (expected " + joined(kConditions) + ")");
  if (!one_of(kMethods, c.method)) throw ConfigError("unknown method '" + c.method + "' (expected " + joined(kMethods) + ")");
  if (!one_of(kFunctions, c.function))
    throw ConfigError("unknown function '" + c.function + "' (expected " + joined(kFunctions) + ")");
  if (!(c.rel_tol > 0.0 && c.rel_tol < 1e-6)) throw ConfigError("--rel-tol must lie in (0, 1e-6)");
  if (c.refinement < 1 || c.refinement > 16) throw ConfigError("--refine must lie in 1..16");
  for (std::int64_t n : c.n)
    if (n < 0) throw ConfigError("n must be nonnegative");
  if (c.weights.find('\n') != std::string::npos || c.output.find('\n') != std::string::npos)
    throw ConfigError("newlines are not allowed in option values");
}

}  // namespace

std::vector<std::int64_t> parse_n_list(std::string_view text) {
  std::vector<std::int64_t> out;
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty entry in n list '" + std::string(text) + "'");
    const auto pieces = split(item, ':');
    if (pieces.size() == 1) {
      out.push_back(parse_int(pieces[0], "n"));
      continue;
    }
    if (pieces.size() > 3) throw ConfigError("n range '" + item + "' must be a:b or a:b:step");
    const std::int64_t lo = parse_int(pieces[0], "n");
    const std::int64_t hi = parse_int(pieces[1], "n");
    const std::int64_t step = pieces.size() == 3 ? parse_int(pieces[2], "n step") : 1;
    if (step < 1 || hi < lo) throw ConfigError("n range '" + item + "' is empty or has a nonpositive step");
    if ((hi - lo) / step > 1000000) throw ConfigError("n range '" + item + "' has too many entries");
    for (std::int64_t v = lo; v <= hi; v += step) out.push_back(v);
  }
  for (std::int64_t v : out)
    if (v < 0) throw ConfigError("n must be nonnegative (got " + std::to_string(v) + ")");
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_real(item, "list"));
  return out;
}

std::string to_text(const RunConfig& c) {
  std::ostringstream os;
  os << "command=" << c.command << '\n'
     << "weights=" << c.weights << '\n'
     << "kind=" << name(c.kind) << '\n'
     << "n=" << join_ints(c.n) << '\n'
     << "format=" << name(c.format) << '\n'
     << "output=" << c.output << '\n'
     << "rel_tol=" << shortest(c.rel_tol) << '\n'
     << "labelled=" << (c.labelled ? "true" : "false") << '\n'
     << "log=" << (c.log ? "true" : "false") << '\n'
     << "bruteforce=" << (c.bruteforce ? "true" : "false") << '\n'
     << "condition=" << c.condition << '\n'
     << "deltas=" << join_reals(c.deltas) << '\n'
     << "epsilon=" << (c.epsilon ? shortest(*c.epsilon) : "") << '\n'
     << "refine=" << c.refinement << '\n'
     << "delta=" << (c.delta ? shortest(*c.delta) : "") << '\n'
     << "method=" << c.method << '\n'
     << "function=" << c.function << '\n'
     << "x=" << join_reals(c.x) << '\n';
  return os.str();
}

RunConfig from_text(std::string_view text) {
  RunConfig c;
  c.deltas.clear();
  std::map<std::string, bool> seen;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line without '=': " + std::string(line));
    const std::string key(line.substr(0, eq));
    const std::string value(line.substr(eq + 1));
    if (seen[key]) throw ConfigError("duplicate config key '" + key + "'");
    seen[key] = true;
    if (key == "command")
      c.command = value;
    else if (key == "weights")
      c.weights = value;
    else if (key == "kind")
      c.kind = parse_kind(value);
    else if (key == "n")
      c.n = value.empty() ? std::vector<std::int64_t>{} : parse_n_list(value);
    else if (key == "format")
      c.format = parse_format(value);
    else if (key == "output")
      c.output = value;
    else if (key == "rel_tol")
      c.rel_tol = parse_real(value, key);
    else if (key == "labelled")
      c.labelled = parse_bool(value, key);
    else if (key == "log")
      c.log = parse_bool(value, key);
    else if (key == "bruteforce")
      c.bruteforce = parse_bool(value, key);
    else if (key == "condition")
      c.condition = value;
    else if (key == "deltas")
      c.deltas = parse_real_list(value);
    else if (key == "epsilon")
      c.epsilon = value.empty() ? std::nullopt : std::optional<double>(parse_real(value, key));
    else if (key == "refine")
      c.refinement = static_cast<int>(parse_int(value, key));
    else if (key == "delta")
      c.delta = value.empty() ? std::nullopt : std::optional<double>(parse_real(value, key));
    else if (key == "method")
      c.method = value;
    else if (key == "function")
      c.function = value;
    else if (key == "x")
      c.x = parse_real_list(value);
    else
      throw ConfigError("unknown config key '" + key + "'");
  }
  if (!seen["deltas"]) c.deltas = RunConfig{}.deltas;
  validate(c);
  return c;
}

RunConfig parse_command_line(const std::vector<std::string>& args) {
  CLI::App app{"Exact counts, saddle points and asymptotics of weighted partitions.", "wpart"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  RunConfig config;
  std::string kind = "multiset";
  std::string n_text;
  std::string format = "csv";
  std::string deltas_text;
  std::string x_text;
  double epsilon = 0.0;
  double delta = 0.0;
  bool dry_run = false;
  std::map<std::string, CLI::App*> subs;

  const auto common = [&](CLI::App* sub, bool with_kind, bool with_n) {
    sub->add_option("-w,--weights", config.weights, "power-law[:rho=R,r=S], example2, example3, forest, @FILE")
        ->capture_default_str();
    if (with_kind) sub->add_option("-k,--kind", kind, "multiset, selection or assembly (or 1, 2, 3)");
    if (with_n) sub->add_option("-n,--n", n_text, "n values: 10, 1,5,10, 0:50 or 0:1000:100");
    sub->add_option("-f,--format", format, "csv, json or table");
    sub->add_option("-o,--output", config.output, "write to FILE instead of stdout");
    sub->add_option("--rel-tol", config.rel_tol, "relative tolerance of the special functions");
    sub->add_flag("--dry-run", dry_run, "print the canonical config and exit");
  };

  auto* count = subs["count"] = app.add_subcommand("count", "exact counts c_n");
  common(count, true, true);
  count->add_flag("--labelled", config.labelled, "add s_n = n! c_n for assemblies");
  count->add_flag("--log", config.log, "add log c_n");
  count->add_flag("--bruteforce", config.bruteforce, "enumerate partitions instead of the recurrence (n <= 25)");

  auto* compare = subs["compare"] = app.add_subcommand("compare", "exact counts next to both estimates");
  common(compare, true, true);

  auto* check = subs["check"] = app.add_subcommand("check", "grid checks of the trigonometric-sum conditions");
  common(check, true, true);
  check->add_option("-c,--condition", config.condition, "iii, iii-prime or lemma3");
  check->add_option("--delta-grid", deltas_text, "comma-separated deltas in (0, 0.1)");
  auto* eps_opt = check->add_option("--epsilon", epsilon, "probe exponent (iii) or slack (iii-prime)");
  check->add_option("--refine", config.refinement, "alpha-grid refinement factor");

  auto* delta_cmd = subs["delta"] = app.add_subcommand("delta", "solve E Z_n = n for the tilt delta_n");
  common(delta_cmd, true, true);

  auto* llt = subs["llt"] = app.add_subcommand("llt", "P(Z_n = n) by convolution and quadrature");
  common(llt, true, true);
  auto* llt_delta = llt->add_option("--delta", delta, "tilt to use instead of delta_n");
  llt->add_option("-m,--method", config.method, "both, convolution or quadrature");

  auto* special = subs["special"] = app.add_subcommand("special", "special-function values");
  special->add_option("--function", config.function, joined(kFunctions));
  special->add_option("-x,--x", x_text, "comma-separated arguments")->required();
  special->add_option("-f,--format", format, "csv, json or table");
  special->add_option("-o,--output", config.output, "write to FILE instead of stdout");
  special->add_option("--rel-tol", config.rel_tol, "relative tolerance");
  special->add_flag("--dry-run", dry_run, "print the canonical config and exit");

  auto* asymptote = subs["asymptote"] = app.add_subcommand("asymptote", "leading-order estimate or log F expansion");
  common(asymptote, true, true);
  auto* asym_delta = asymptote->add_option("--delta", delta, "evaluate the log F expansion at this delta");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    throw HelpRequested{os.str()};
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    throw HelpRequested{os.str()};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  for (const auto& [cmd, sub] : subs)
    if (sub->parsed()) config.command = cmd;
  config.kind = parse_kind(kind);
  config.format = parse_format(format);
  if (!n_text.empty()) config.n = parse_n_list(n_text);
  if (!deltas_text.empty()) config.deltas = parse_real_list(deltas_text);
  if (!x_text.empty()) config.x = parse_real_list(x_text);
  if (eps_opt->count() > 0) config.epsilon = epsilon;
  if (llt_delta->count() > 0 || asym_delta->count() > 0) config.delta = delta;
  validate(config);
  if (dry_run) throw HelpRequested{to_text(config)};
  return config;
}

namespace {

void require_n(const RunConfig& c) {
  if (c.n.empty()) throw ConfigError("'" + c.command + "' needs --n");
}

std::int64_t max_n(const RunConfig& c) { return *std::max_element(c.n.begin(), c.n.end()); }

Table cmd_count(const RunConfig& c, const WeightSequence& w) {
  require_n(c);
  const CountTable counts = c.bruteforce ? count_bruteforce(w, c.kind, max_n(c)) : count_exact(w, c.kind, max_n(c));
  if (c.labelled) {
    if (c.kind != StructureKind::assembly) throw DomainError("--labelled applies to assemblies only");
    if (counts.labelled.empty())
      throw IntegralityError("--labelled needs integer m_k = k! b_k; " + w.label() + " has a non-integer m_k");
  }
  Table t;
  t.columns = {"n", "c_n"};
  if (c.labelled) t.columns.emplace_back("s_n");
  if (c.log) t.columns.emplace_back("log_c_n");
  for (std::int64_t n : c.n) {
    std::vector<Cell> row{n, to_string(counts[n])};
    if (c.labelled) row.emplace_back(counts.labelled[static_cast<std::size_t>(n)].str());
    if (c.log) row.emplace_back(counts[n] == 0 ? -std::numeric_limits<double>::infinity() : log_of(counts[n]));
    t.add_row(std::move(row));
  }
  return t;
}

Table cmd_compare(const RunConfig& c, const WeightSequence& w) {
  require_n(c);
  w.require_meta("compare");
  const CountTable counts = count_exact(w, c.kind, max_n(c));
  Table t;
  t.columns = {"n", "log_exact", "log_meinardus", "log_khintchine", "ratio_meinardus", "ratio_khintchine"};
  for (std::int64_t n : c.n) {
    if (n < 1) throw DomainError("compare needs n >= 1");
    const double exact = counts[n] == 0 ? -std::numeric_limits<double>::infinity() : log_of(counts[n]);
    const double mein = meinardus_estimate(w, c.kind, n).log_value;
    double khin = kNaN;
    try {
      khin = khintchine_estimate(w, c.kind, n).log_value;
    } catch (const UnsolvableError&) {
    }
    t.add_row({n, exact, mein, khin, std::exp(mein - exact), std::exp(khin - exact)});
  }
  return t;
}

Table report_table(const ConditionReport& r, const WeightSequence& w) {
  Table t;
  t.summary = nlohmann::ordered_json::object();
  t.summary["condition"] = std::string(name(r.condition));
  t.summary["weights"] = w.label();
  if (r.condition == Condition::weak_iii_prime) t.summary["kind"] = std::string(name(r.kind));
  t.summary["epsilon"] = r.epsilon;
  t.summary["verdict"] = std::string(name(r.verdict));
  if (r.verdict == Verdict::fail) {
    t.summary["witness_alpha"] = r.witness_alpha;
    t.summary["witness_delta"] = r.witness_delta;
  }
  if (r.trend_used) t.summary["trend_slope"] = r.trend_slope;
  t.summary["truncation_k"] = r.truncation_k;
  t.summary["alpha_grid"] = r.alpha_grid_spec;
  t.summary["reason"] = r.reason;
  t.summary["note"] = "grid evidence, not a proof";
  t.columns = {"delta", "threshold", "min_margin", "argmin_alpha", "truncation_bound", "grid_points", "verdict",
               "witness_alpha"};
  for (std::size_t i = 0; i < r.delta_grid.size(); ++i)
    t.add_row({r.delta_grid[i], r.threshold[i], r.min_margin[i], r.argmin_alpha[i], r.truncation_bound[i],
               static_cast<std::int64_t>(r.alphas[i].size()), std::string(name(r.verdict)),
               r.verdict == Verdict::fail ? r.witness_alpha : kNaN});
  return t;
}

Table cmd_check(const RunConfig& c, const WeightSequence& w, bool& indeterminate) {
  GridOptions grid;
  grid.refinement = c.refinement;
  if (c.condition == "lemma3") {
    require_n(c);
    Table t;
    t.columns = {"n", "delta_n", "grid_points", "violations", "max_excess", "worst_alpha", "max_ratio", "verdict"};
    for (std::int64_t n : c.n) {
      const Lemma3Report r = check_lemma3_bound(w, c.kind, n, c.epsilon.value_or(1e-6));
      t.add_row({n, r.delta_n, r.grid_points, r.violations, r.max_excess, r.worst_alpha, r.max_ratio,
                 std::string(r.violations == 0 ? "pass" : "fail")});
    }
    return t;
  }
  ConditionReport report;
  if (c.condition == "iii") {
    const double eps = c.epsilon.value_or(std::min(w.require_meta("check").r, 1.0));
    report = check_condition_iii(w, c.deltas, eps, grid);
  } else {
    report = check_condition_iii_prime(w, c.kind, c.deltas, c.epsilon.value_or(0.1), grid);
  }
  indeterminate = report.verdict == Verdict::indeterminate;
  return report_table(report, w);
}

Table cmd_delta(const RunConfig& c, const WeightSequence& w) {
  require_n(c);
  Table t;
  t.columns = {"n", "delta_n", "residual", "mean", "variance", "third_cumulant", "iterations", "delta_asymptotic"};
  for (std::int64_t n : c.n) {
    const SaddlePoint s = solve_saddle(w, c.kind, n);
    const double asym = w.meta() ? delta_asymptotic(w, c.kind, n) : kNaN;
    t.add_row({n, s.delta_n, s.residual, s.mean, s.variance, s.third_cumulant, std::int64_t{s.iterations}, asym});
  }
  return t;
}

Table cmd_llt(const RunConfig& c, const WeightSequence& w) {
  require_n(c);
  Table t;
  t.columns = {"n", "delta", "p_convolution", "p_quadrature", "relative_difference", "quadrature_error",
               "gaussian", "llt_ratio"};
  QuadratureOptions q;
  for (std::int64_t n : c.n) {
    if (n < 1) throw DomainError("llt needs n >= 1");
    const double delta = c.delta ? *c.delta : solve_saddle(w, c.kind, n).delta_n;
    const TiltedEnsemble e(w, c.kind, n, delta);
    double conv = kNaN;
    double quad = kNaN;
    double quad_err = kNaN;
    if (c.method != "quadrature" && n <= kConvolutionLimit) conv = point_prob_convolution(e).value;
    if (c.method != "convolution") {
      const PointProbability p = point_prob_quadrature(e, q);
      quad = p.value;
      quad_err = p.error_estimate;
    }
    const double variance = moments(e).variance;
    const double gaussian = 1.0 / std::sqrt(2.0 * std::numbers::pi * variance);
    const double best = std::isnan(conv) ? quad : conv;
    t.add_row({n, delta, conv, quad, std::fabs(quad - conv) / std::fabs(conv), quad_err, gaussian, best / gaussian});
  }
  return t;
}

Table cmd_special(const RunConfig& c) {
  if (c.x.empty()) throw ConfigError("'special' needs --x");
  const special::Precision prec{c.rel_tol};
  Table t;
  t.columns = {"function", "x", "value"};
  for (double x : c.x) {
    double v = 0.0;
    if (c.function == "gamma")
      v = special::gamma(x);
    else if (c.function == "log-gamma")
      v = special::log_gamma(x);
    else if (c.function == "digamma")
      v = special::digamma(x);
    else if (c.function == "zeta")
      v = special::zeta(x, prec);
    else if (c.function == "zeta-prime")
      v = special::zeta_prime(x, prec);
    else
      v = special::bose_log_integral(x, prec);
    t.add_row({c.function, x, v});
  }
  return t;
}

Table cmd_asymptote(const RunConfig& c, const WeightSequence& w) {
  Table t;
  if (c.delta) {
    const ExpansionTerms e = log_F_expansion(w, c.kind, *c.delta);
    t.columns = {"delta", "leading", "log_term", "constant", "value", "remainder_order", "d1", "d2", "d3"};
    t.add_row({e.delta, e.leading, e.log_term, e.constant, e.value(), e.remainder_order,
               log_F_derivative_expansion(w, c.kind, *c.delta, 1), log_F_derivative_expansion(w, c.kind, *c.delta, 2),
               log_F_derivative_expansion(w, c.kind, *c.delta, 3)});
    return t;
  }
  require_n(c);
  t.columns = {"n", "exponent_coeff", "power_exponent", "log_constant", "log_value", "estimate", "delta_asymptotic"};
  for (std::int64_t n : c.n) {
    const AsymptoticEstimate a = meinardus_estimate(w, c.kind, n);
    t.add_row({n, a.exponent_coeff, a.power_exponent, a.log_constant, a.log_value, exp_of_log(a.log_value),
               delta_asymptotic(w, c.kind, n)});
  }
  return t;
}

}  // namespace

Table execute(const RunConfig& c, bool& indeterminate) {
  indeterminate = false;
  if (c.command == "special") return cmd_special(c);
  const WeightSequence w = parse_weights(c.weights);
  if (c.command == "count") return cmd_count(c, w);
  if (c.command == "compare") return cmd_compare(c, w);
  if (c.command == "check") return cmd_check(c, w, indeterminate);
  if (c.command == "delta") return cmd_delta(c, w);
  if (c.command == "llt") return cmd_llt(c, w);
  if (c.command == "asymptote") return cmd_asymptote(c, w);
  throw ConfigError("unknown command '" + c.command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = parse_command_line(args);
    bool indeterminate = false;
    const Table table = execute(config, indeterminate);
    if (config.output.empty()) {
      write(out, table, config.format);
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + config.output + "'");
      write(file, table, config.format);
    }
    if (indeterminate) {
      err << "indeterminate: the truncation bound dominates a margin\n";
      return kExitIndeterminate;
    }
    return kExitOk;
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIndeterminate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wpart::cli
