#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hcivalue {

enum class Unit { bits, bits_per_second, seconds, ratio, percent, count, hertz, text };

std::string_view unit_symbol(Unit unit);
std::optional<Unit> parse_unit_symbol(std::string_view symbol);

struct ReportRow {
  std::string label;
  std::variant<double, std::string> value;
  Unit unit = Unit::text;
};

struct ReportSection {
  std::string title;
  std::vector<ReportRow> rows;

  ReportSection& add(std::string label, double value, Unit unit);
  ReportSection& add(std::string label, std::string value);
};

struct Report {
  std::vector<ReportSection> sections;
  std::vector<std::string> notes;
};

enum class ReportFormat { text, json, csv };

std::optional<ReportFormat> parse_report_format(std::string_view text);

/// Text rounds numbers to 3 decimals and appends the unit; JSON keeps full
/// precision; CSV emits one `section,label,value,unit` line per row.
std::string render(const Report& report, ReportFormat format);

/// Inverse of render(report, ReportFormat::json).
Report parse_json_report(std::string_view json_text);

}  // namespace hcivalue
