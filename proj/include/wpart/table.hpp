#pragma once

// Row-oriented results shared by the CSV, JSON and plain-table writers.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace wpart {

/// text covers exact decimals and rationals ("204226", "13/6").
using Cell = std::variant<std::string, double, std::int64_t, bool>;

enum class OutputFormat { csv, json, table };

std::string_view name(OutputFormat f);
OutputFormat parse_format(std::string_view text);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Report-level fields. JSON nests the rows under "rows" when present;
  /// the plain table prints them above the rows; CSV omits them.
  nlohmann::ordered_json summary;

  void add_row(std::vector<Cell> row);
};

/// Doubles print with 17 significant digits, independent of locale.
std::string format_cell(const Cell& cell);

/// RFC 4180: fields with a comma, quote, CR or LF are quoted and quotes
/// doubled. Lines end in "\n".
std::string csv_field(std::string_view text);

void write_csv(std::ostream& out, const Table& t);
void write_json(std::ostream& out, const Table& t);
void write_table(std::ostream& out, const Table& t);
void write(std::ostream& out, const Table& t, OutputFormat format);

}  // namespace wpart
