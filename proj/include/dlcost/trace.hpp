#pragma once

// Newline-delimited JSON workload traces: one WorkloadRecord per line.
//
//   {"job_id":"r50","arch":"allreduce_local","num_cnodes":8,"batch_size":64,
//    "flops":1.56e12,"mem_access_bytes":"31.9GB","input_bytes":3.8e7, ...}
//
// Quantities are either numbers in canonical units or unit strings.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlcost/core_model.hpp"

namespace dlcost {

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string job_id;    // empty if it could not be read
  std::string message;
};

class TraceError : public Error {
 public:
  explicit TraceError(LineError e)
      : Error("line " + std::to_string(e.line) + ": " + e.message), error_(std::move(e)) {}

  const LineError& error() const noexcept { return error_; }

 private:
  LineError error_;
};

struct TraceLoad {
  JobPopulation population;
  std::vector<std::size_t> source_lines;  // line number of each record
  std::vector<LineError> errors;
};

namespace detail {

struct FieldSpec {
  const char* key;
  QuantityKind kind;
  double WorkloadRecord::*member;
};

inline constexpr FieldSpec kQuantityFields[] = {
    {"flops", QuantityKind::FlopCount, &WorkloadRecord::flops},
    {"mem_access_bytes", QuantityKind::Bytes, &WorkloadRecord::mem_access_bytes},
    {"input_bytes", QuantityKind::Bytes, &WorkloadRecord::input_bytes},
    {"weight_traffic_bytes", QuantityKind::Bytes, &WorkloadRecord::weight_traffic_bytes},
    {"dense_weight_bytes", QuantityKind::Bytes, &WorkloadRecord::dense_weight_bytes},
    {"embedding_weight_bytes", QuantityKind::Bytes, &WorkloadRecord::embedding_weight_bytes},
};

inline bool is_known_key(std::string_view key) {
  static constexpr std::string_view kOther[] = {"job_id", "arch", "num_cnodes", "batch_size",
                                                "measured_step_seconds", "raw_network_traffic_bytes"};
  for (auto k : kOther) {
    if (k == key) return true;
  }
  for (const auto& f : kQuantityFields) {
    if (key == f.key) return true;
  }
  return false;
}

// Numbers pass through unchanged (sign checks happen in check_record);
// strings go through the unit grammar.
inline double read_quantity(const nlohmann::json& v, QuantityKind kind, const char* key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_quantity(v.get_ref<const std::string&>(), kind);
  throw ParseError(std::string(key) + " must be a number or a unit string");
}

inline std::int64_t read_integer(const nlohmann::json& v, const char* key) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  throw ParseError(std::string(key) + " must be an integer");
}

}  // namespace detail

/// Parses one JSON object into a validated record. Throws ParseError on
/// schema problems or InvalidRecord on invariant violations; either way the
/// message lists every problem found on the line.
inline WorkloadRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("record must be a JSON object");

  WorkloadRecord rec;
  std::vector<std::string> problems;
  auto attempt = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      problems.emplace_back(e.what());
    } catch (const nlohmann::json::exception& e) {
      problems.emplace_back(e.what());
    }
  };

  for (const auto& [key, _] : j.items()) {
    if (!detail::is_known_key(key)) problems.push_back("unknown field '" + key + "'");
  }

  auto required = [&](const char* key) -> const nlohmann::json* {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      problems.push_back(std::string("missing field '") + key + "'");
      return nullptr;
    }
    return &*it;
  };

  if (const auto* v = required("job_id")) {
    attempt([&] {
      if (!v->is_string()) throw ParseError("job_id must be a string");
      rec.job_id = v->get<std::string>();
    });
  }
  if (const auto* v = required("arch")) {
    attempt([&] {
      if (!v->is_string()) throw ParseError("arch must be a string");
      rec.arch = parse_architecture(v->get_ref<const std::string&>());
    });
  }
  if (const auto* v = required("num_cnodes")) attempt([&] { rec.num_cnodes = detail::read_integer(*v, "num_cnodes"); });
  if (const auto* v = required("batch_size")) attempt([&] { rec.batch_size = detail::read_integer(*v, "batch_size"); });
  for (const auto& f : detail::kQuantityFields) {
    if (const auto* v = required(f.key)) attempt([&] { rec.*f.member = detail::read_quantity(*v, f.kind, f.key); });
  }
  if (auto it = j.find("measured_step_seconds"); it != j.end() && !it->is_null()) {
    attempt([&] {
      if (!it->is_number()) throw ParseError("measured_step_seconds must be a number");
      rec.measured_step_seconds = it->get<double>();
    });
  }
  if (auto it = j.find("raw_network_traffic_bytes"); it != j.end() && !it->is_null()) {
    attempt([&] {
      rec.raw_network_traffic_bytes = detail::read_quantity(*it, QuantityKind::Bytes, "raw_network_traffic_bytes");
    });
  }

  if (!problems.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    throw ParseError(msg);
  }
  return validate_record(std::move(rec));
}

/// Canonical numeric form; keys in a fixed order.
inline nlohmann::ordered_json record_to_json(const WorkloadRecord& rec) {
  nlohmann::ordered_json j;
  j["job_id"] = rec.job_id;
  j["arch"] = std::string(to_label(rec.arch));
  j["num_cnodes"] = rec.num_cnodes;
  j["batch_size"] = rec.batch_size;
  for (const auto& f : detail::kQuantityFields) j[f.key] = rec.*f.member;
  if (rec.measured_step_seconds) j["measured_step_seconds"] = *rec.measured_step_seconds;
  if (rec.raw_network_traffic_bytes) j["raw_network_traffic_bytes"] = *rec.raw_network_traffic_bytes;
  return j;
}

/// Reads records from `in`. Blank lines are skipped. In strict mode the
/// first bad line throws TraceError; otherwise bad lines are collected.
inline TraceLoad parse_trace(std::istream& in, bool strict = false) {
  TraceLoad out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;

    LineError err{lineno, {}, {}};
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.is_object()) {
        if (auto it = j.find("job_id"); it != j.end() && it->is_string()) err.job_id = it->get<std::string>();
      }
      out.population.records.push_back(record_from_json(j));
      out.source_lines.push_back(lineno);
      continue;
    } catch (const InvalidRecord& e) {
      err.message = e.what();
    } catch (const Error& e) {
      err.message = e.what();
    } catch (const nlohmann::json::parse_error& e) {
      err.message = std::string("malformed JSON: ") + e.what();
    }
    if (strict) throw TraceError(std::move(err));
    out.errors.push_back(std::move(err));
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw IoError("cannot read '" + path.string() + "'");
  return std::move(ss).str();
}

inline TraceLoad load_trace(const std::filesystem::path& path, bool strict = false) {
  std::istringstream in(read_file(path));
  return parse_trace(in, strict);
}

inline void write_trace(const JobPopulation& pop, std::ostream& out) {
  for (const auto& r : pop.records) out << record_to_json(r).dump() << '\n';
}

inline std::string trace_to_string(const JobPopulation& pop) {
  std::ostringstream ss;
  write_trace(pop, ss);
  return std::move(ss).str();
}

}  // namespace dlcost
