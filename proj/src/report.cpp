#include "hcivalue/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "hcivalue/error.hpp"

namespace hcivalue {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr Unit kAllUnits[] = {Unit::bits,    Unit::bits_per_second, Unit::seconds, Unit::ratio,
                              Unit::percent, Unit::count,           Unit::hertz,   Unit::text};

std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  auto s = os.str();
  if (s == "-0.000") s = "0.000";
  return s;
}

// Three decimals, widened for small magnitudes so three significant digits survive.
std::string text_number(double v, Unit unit) {
  if (unit == Unit::count && v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  const double mag = std::abs(v);
  if (mag >= 1e-6 && mag < 0.1) {
    const int decimals = 2 - static_cast<int>(std::floor(std::log10(mag)));
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << v;
    return os.str();
  }
  return fixed3(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string full_precision(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string_view unit_symbol(Unit unit) {
  switch (unit) {
    case Unit::bits: return "bits";
    case Unit::bits_per_second: return "bits/s";
    case Unit::seconds: return "s";
    case Unit::ratio: return "ratio";
    case Unit::percent: return "%";
    case Unit::count: return "count";
    case Unit::hertz: return "Hz";
    case Unit::text: return "text";
  }
  return "text";
}

std::optional<Unit> parse_unit_symbol(std::string_view symbol) {
  for (auto u : kAllUnits) {
    if (unit_symbol(u) == symbol) return u;
  }
  return std::nullopt;
}

ReportSection& ReportSection::add(std::string label, double value, Unit unit) {
  rows.push_back({std::move(label), value, unit});
  return *this;
}

ReportSection& ReportSection::add(std::string label, std::string value) {
  rows.push_back({std::move(label), std::move(value), Unit::text});
  return *this;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "text") return ReportFormat::text;
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  return std::nullopt;
}

std::string render(const Report& report, ReportFormat format) {
  std::ostringstream os;
  switch (format) {
    case ReportFormat::text: {
      for (const auto& section : report.sections) {
        os << "== " << section.title << " ==\n";
        for (const auto& row : section.rows) {
          os << "  " << row.label << ": ";
          if (const auto* v = std::get_if<double>(&row.value)) {
            os << text_number(*v, row.unit) << ' ' << unit_symbol(row.unit);
          } else {
            os << std::get<std::string>(row.value);
          }
          os << '\n';
        }
      }
      for (const auto& note : report.notes) os << "note: " << note << '\n';
      break;
    }
    case ReportFormat::json: {
      ordered_json doc;
      doc["schema_version"] = 1;
      doc["sections"] = ordered_json::array();
      for (const auto& section : report.sections) {
        ordered_json s;
        s["title"] = section.title;
        s["rows"] = ordered_json::array();
        for (const auto& row : section.rows) {
          ordered_json r;
          r["label"] = row.label;
          std::visit([&](const auto& v) { r["value"] = v; }, row.value);
          r["unit"] = unit_symbol(row.unit);
          s["rows"].push_back(std::move(r));
        }
        doc["sections"].push_back(std::move(s));
      }
      doc["notes"] = report.notes;
      os << doc.dump(2) << '\n';
      break;
    }
    case ReportFormat::csv: {
      os << "section,label,value,unit\n";
      for (const auto& section : report.sections) {
        for (const auto& row : section.rows) {
          const std::string value = std::holds_alternative<double>(row.value)
                                        ? full_precision(std::get<double>(row.value))
                                        : std::get<std::string>(row.value);
          os << csv_field(section.title) << ',' << csv_field(row.label) << ',' << csv_field(value) << ','
             << csv_field(std::string(unit_symbol(row.unit))) << '\n';
        }
      }
      for (const auto& note : report.notes) os << "notes,note," << csv_field(note) << ",text\n";
      break;
    }
  }
  return os.str();
}

Report parse_json_report(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
    Report report;
    for (const auto& s : doc.at("sections")) {
      ReportSection section{s.at("title").get<std::string>(), {}};
      for (const auto& r : s.at("rows")) {
        const auto unit = parse_unit_symbol(r.at("unit").get<std::string>());
        if (!unit) throw FormatError("report: unknown unit '" + r.at("unit").get<std::string>() + "'");
        ReportRow row{r.at("label").get<std::string>(), 0.0, *unit};
        if (r.at("value").is_number()) {
          row.value = r.at("value").get<double>();
        } else {
          row.value = r.at("value").get<std::string>();
        }
        section.rows.push_back(std::move(row));
      }
      report.sections.push_back(std::move(section));
    }
    report.notes = doc.at("notes").get<std::vector<std::string>>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

}  // namespace hcivalue
