#pragma once

// Tabular reports and their CSV / JSON serializations. Numbers are written
// with 9 significant digits in both formats, so a report parses to the
// same values whichever format it was emitted in.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlcost/core_model.hpp"

namespace dlcost {

enum class ReportKind { Breakdown, Projection, Sweep, Aggregate, Sensitivity, Validate };

inline constexpr std::string_view to_label(ReportKind k) {
  switch (k) {
    case ReportKind::Breakdown: return "breakdown";
    case ReportKind::Projection: return "projection";
    case ReportKind::Sweep: return "sweep";
    case ReportKind::Aggregate: return "aggregate";
    case ReportKind::Sensitivity: return "sensitivity";
    case ReportKind::Validate: return "validate";
  }
  return "unknown";
}

enum class ReportFormat { Csv, Json };

inline ReportFormat parse_format(std::string_view label) {
  if (label == "csv") return ReportFormat::Csv;
  if (label == "json") return ReportFormat::Json;
  throw ParseError("unknown format '" + std::string(label) + "'");
}

/// Empty cells (monostate) serialize as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, std::string, std::int64_t, double, bool>;

struct Report {
  ReportKind kind = ReportKind::Breakdown;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw DomainError("report row has " + std::to_string(row.size()) + " cells, expected " +
                        std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
  }
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// `v` rounded to 9 significant digits.
inline double round_9(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

namespace detail {

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct CsvCell {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(const std::string& s) const { return csv_escape(s); }
  std::string operator()(std::int64_t i) const { return std::to_string(i); }
  std::string operator()(double d) const { return format_number(d); }
  std::string operator()(bool b) const { return b ? "true" : "false"; }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  nlohmann::ordered_json operator()(std::int64_t i) const { return i; }
  // JSON has no inf/nan; non-finite values become strings.
  nlohmann::ordered_json operator()(double d) const {
    if (!std::isfinite(d)) return format_number(d);
    return round_9(d);
  }
  nlohmann::ordered_json operator()(bool b) const { return b; }
};

}  // namespace detail

inline std::string emit_csv(const Report& report) {
  std::string out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    out += (i ? "," : "") + detail::csv_escape(report.columns[i]);
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::visit(detail::CsvCell{}, row[i]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const Report& report) {
  nlohmann::ordered_json j;
  auto meta = report.metadata;
  meta["kind"] = std::string(to_label(report.kind));
  meta["columns"] = report.columns;
  j["metadata"] = std::move(meta);
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[report.columns[i]] = std::visit(detail::JsonCell{}, row[i]);
    j["rows"].push_back(std::move(r));
  }
  return j;
}

inline std::string emit_json(const Report& report) { return report_to_json(report).dump(2) + "\n"; }

inline std::string emit(const Report& report, ReportFormat format) {
  return format == ReportFormat::Csv ? emit_csv(report) : emit_json(report);
}

/// 64-bit FNV-1a, hex encoded. Identifies report inputs; not a security hash.
inline std::string fnv1a_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline nlohmann::ordered_json to_json(const HardwareProfile& hw) {
  return {{"gpu_peak_flops", hw.gpu_peak_flops},       {"gpu_mem_bandwidth", hw.gpu_mem_bandwidth},
          {"pcie_bandwidth", hw.pcie_bandwidth},       {"ethernet_bandwidth", hw.ethernet_bandwidth},
          {"nvlink_bandwidth", hw.nvlink_bandwidth},   {"gpu_mem_capacity", hw.gpu_mem_capacity}};
}

inline nlohmann::ordered_json to_json(const EfficiencyModel& e) {
  return {{"compute_eff", e.compute_eff},   {"mem_eff", e.mem_eff},         {"pcie_eff", e.pcie_eff},
          {"ethernet_eff", e.ethernet_eff}, {"nvlink_eff", e.nvlink_eff}};
}

}  // namespace dlcost
