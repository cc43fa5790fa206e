#include "wpart/table.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wpart/errors.hpp"
#include "wpart/numfmt.hpp"

namespace wpart {

std::string_view name(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::json:
      return "json";
    case OutputFormat::table:
      return "table";
  }
  return "csv";
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "table") return OutputFormat::table;
  throw ConfigError("unknown output format '" + std::string(text) + "' (expected csv, json or table)");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>)
          return v;
        else if constexpr (std::is_same_v<T, double>)
          return significant(v, 17);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else
          return std::to_string(v);
      },
      cell);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(format_cell(row[i]));
    out << '\n';
  }
}

namespace {

nlohmann::ordered_json to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

void write_json(std::ostream& out, const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  if (t.summary.is_object()) {
    nlohmann::ordered_json doc = t.summary;
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
  } else {
    out << rows.dump(2) << '\n';
  }
}

void write_table(std::ostream& out, const Table& t) {
  if (t.summary.is_object())
    for (const auto& [key, value] : t.summary.items())
      out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& row : t.rows) {
    auto& line = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(format_cell(row[i]));
      width[i] = std::max(width[i], line.back().size());
    }
  }
  const auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << "  ";
      out << cells[i];
      if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size(), ' ');
    }
    out << '\n';
  };
  emit(t.columns);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& line : text) emit(line);
}

void write(std::ostream& out, const Table& t, OutputFormat format) {
  switch (format) {
    case OutputFormat::csv:
      write_csv(out, t);
      break;
    case OutputFormat::json:
      write_json(out, t);
      break;
    case OutputFormat::table:
      write_table(out, t);
      break;
  }
}

}  // namespace wpart
