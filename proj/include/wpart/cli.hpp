#pragma once

// Command-line front end. Everything except main() lives here so the
// parsing, the canonical config text and the exit-code mapping are testable.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wpart/table.hpp"
#include "wpart/weights.hpp"

namespace wpart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIndeterminate = 4;

struct RunConfig {
  std::string command;
  std::string weights = "power-law";
  StructureKind kind = StructureKind::multiset;
  std::vector<std::int64_t> n;
  OutputFormat format = OutputFormat::csv;
  std::string output;  // empty: stdout
  double rel_tol = 1e-12;
  bool labelled = false;
  bool log = false;
  bool bruteforce = false;
  std::string condition = "iii";  // iii, iii-prime, lemma3
  std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
  std::optional<double> epsilon;
  int refinement = 1;
  std::optional<double> delta;
  std::string method = "both";  // both, convolution, quadrature
  std::string function = "zeta";
  std::vector<double> x;

  bool operator==(const RunConfig&) const = default;
};

/// One "key=value" line per field in a fixed order; empty value for an
/// unset optional. from_text(to_text(c)) == c for every valid config.
std::string to_text(const RunConfig& config);
RunConfig from_text(std::string_view text);

/// "10", "1,5,10", "0:10", "0:100:10" and comma-joined mixtures.
std::vector<std::int64_t> parse_n_list(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);

/// Thrown by parse_command_line for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

/// args excludes the program name. Throws ConfigError or HelpRequested.
RunConfig parse_command_line(const std::vector<std::string>& args);

/// Runs one configured command; `indeterminate` is set when a check could
/// not decide.
Table execute(const RunConfig& config, bool& indeterminate);

/// Parse, execute, write. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wpart::cli
