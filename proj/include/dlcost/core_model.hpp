#pragma once

// Domain types shared by every dlcost module: architectures, hardware
// profiles, efficiency models, per-job workload records and the per-step
// time breakdown. Quantity strings ("25Gbps", "10GB/s", "11TFLOPs") are
// parsed here as well.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dlcost {

inline constexpr std::string_view kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text: quantities, labels, config files.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A caller violated a documented precondition (e.g. t_total <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Architectures
// ---------------------------------------------------------------------------
enum class ArchitectureKind {
  OneWorkerOneGpu,
  OneWorkerNGpu,
  PsWorker,
  AllReduceLocal,
  AllReduceCluster,
  Pearl,
};

inline constexpr std::array<ArchitectureKind, 6> kAllArchitectures = {
    ArchitectureKind::OneWorkerOneGpu,  ArchitectureKind::OneWorkerNGpu,
    ArchitectureKind::PsWorker,         ArchitectureKind::AllReduceLocal,
    ArchitectureKind::AllReduceCluster, ArchitectureKind::Pearl,
};

/// Servers hold eight GPUs; single-server architectures cannot exceed this.
inline constexpr std::int64_t kGpusPerServer = 8;

inline constexpr std::string_view to_label(ArchitectureKind arch) {
  switch (arch) {
    case ArchitectureKind::OneWorkerOneGpu: return "one_worker_one_gpu";
    case ArchitectureKind::OneWorkerNGpu: return "one_worker_n_gpu";
    case ArchitectureKind::PsWorker: return "ps_worker";
    case ArchitectureKind::AllReduceLocal: return "allreduce_local";
    case ArchitectureKind::AllReduceCluster: return "allreduce_cluster";
    case ArchitectureKind::Pearl: return "pearl";
  }
  return "unknown";
}

inline std::optional<ArchitectureKind> try_parse_architecture(std::string_view label) {
  for (auto arch : kAllArchitectures) {
    if (to_label(arch) == label) return arch;
  }
  return std::nullopt;
}

inline ArchitectureKind parse_architecture(std::string_view label) {
  if (auto arch = try_parse_architecture(label)) return *arch;
  throw ParseError("unknown architecture '" + std::string(label) + "'");
}

// ---------------------------------------------------------------------------
// Overlap model
// ---------------------------------------------------------------------------
enum class OverlapMode { NoOverlap, IdealOverlap };

inline constexpr std::string_view to_label(OverlapMode mode) {
  return mode == OverlapMode::NoOverlap ? "none" : "ideal";
}

inline OverlapMode parse_overlap(std::string_view label) {
  if (label == "none") return OverlapMode::NoOverlap;
  if (label == "ideal") return OverlapMode::IdealOverlap;
  throw ParseError("unknown overlap mode '" + std::string(label) + "'");
}

// ---------------------------------------------------------------------------
// Quantities
//
// Grammar: <number>[ ]<prefix><unit>
//   prefix  : K|k M G T   (decimal SI, 1 G = 1e9)
//   bytes   : B (bytes) or b (bits, divided by 8)
//   rates   : bytes unit followed by optional "/s" or "ps"
//   flops   : FLOPs | FLOPS | FLOP/s (rate), FLOP | FLOPs (count)
// A bare number is taken as already being in canonical units.
// ---------------------------------------------------------------------------
enum class QuantityKind {
  Bytes,      // bytes
  Bandwidth,  // bytes / second
  FlopsRate,  // FLOPs / second
  FlopCount,  // FLOPs
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool consume_suffix(std::string_view& s, std::string_view suffix) {
  if (s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix) {
    s.remove_suffix(suffix.size());
    return true;
  }
  return false;
}

// Strips a trailing SI prefix letter and returns its multiplier (1 if none).
inline double consume_prefix(std::string_view& s) {
  if (s.empty()) return 1.0;
  switch (s.back()) {
    case 'K':
    case 'k': s.remove_suffix(1); return 1e3;
    case 'M': s.remove_suffix(1); return 1e6;
    case 'G': s.remove_suffix(1); return 1e9;
    case 'T': s.remove_suffix(1); return 1e12;
    default: return 1.0;
  }
}

inline std::string_view kind_name(QuantityKind kind) {
  switch (kind) {
    case QuantityKind::Bytes: return "bytes";
    case QuantityKind::Bandwidth: return "bandwidth";
    case QuantityKind::FlopsRate: return "FLOPs rate";
    case QuantityKind::FlopCount: return "FLOP count";
  }
  return "quantity";
}

}  // namespace detail

inline bool requires_positive(QuantityKind kind) {
  return kind == QuantityKind::Bandwidth || kind == QuantityKind::FlopsRate;
}

/// Parses a quantity string into canonical units (bytes, bytes/s, FLOPs/s,
/// FLOPs). Rates must be strictly positive; sizes and counts must be >= 0.
inline double parse_quantity(std::string_view text, QuantityKind kind) {
  const std::string_view original = text;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("invalid " + std::string(detail::kind_name(kind)) + " '" +
                      std::string(original) + "': " + why);
  };

  text = detail::trim(text);
  if (text.empty()) throw fail("empty");

  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range) throw fail("out of range");
  if (ec != std::errc() || ptr == first) throw fail("missing number");
  if (!std::isfinite(value)) throw fail("not finite");

  std::string_view unit = detail::trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
  double scale = 1.0;

  if (!unit.empty()) {
    switch (kind) {
      case QuantityKind::FlopsRate:
        if (!(detail::consume_suffix(unit, "FLOP/s") || detail::consume_suffix(unit, "FLOPs/s") ||
              detail::consume_suffix(unit, "FLOPs") || detail::consume_suffix(unit, "FLOPS"))) {
          throw fail("unknown unit");
        }
        scale = detail::consume_prefix(unit);
        break;
      case QuantityKind::FlopCount:
        if (!(detail::consume_suffix(unit, "FLOPs") || detail::consume_suffix(unit, "FLOP"))) {
          throw fail("unknown unit");
        }
        scale = detail::consume_prefix(unit);
        break;
      case QuantityKind::Bandwidth:
        if (!detail::consume_suffix(unit, "/s")) detail::consume_suffix(unit, "ps");
        [[fallthrough]];
      case QuantityKind::Bytes:
        if (detail::consume_suffix(unit, "B")) {
          scale = 1.0;
        } else if (detail::consume_suffix(unit, "b")) {
          scale = 1.0 / 8.0;
        } else {
          throw fail("unknown unit");
        }
        scale *= detail::consume_prefix(unit);
        break;
    }
    if (!unit.empty()) throw fail("unknown unit");
  }

  value *= scale;
  if (value == 0.0) value = 0.0;  // drop the sign of "-0"
  if (!std::isfinite(value)) throw fail("out of range");
  if (value < 0.0) throw fail("negative value");
  if (requires_positive(kind) && value <= 0.0) throw fail("must be positive");
  return value;
}

/// Canonical unit suffix used by format_quantity.
inline constexpr std::string_view canonical_unit(QuantityKind kind) {
  switch (kind) {
    case QuantityKind::Bytes: return "B";
    case QuantityKind::Bandwidth: return "B/s";
    case QuantityKind::FlopsRate: return "FLOP/s";
    case QuantityKind::FlopCount: return "FLOP";
  }
  return "";
}

/// Formats with 17 significant digits so parse_quantity recovers the exact value.
inline std::string format_quantity(double value, QuantityKind kind) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf) + std::string(canonical_unit(kind));
}

// ---------------------------------------------------------------------------
// Hardware and efficiency
// ---------------------------------------------------------------------------
struct HardwareProfile {
  double gpu_peak_flops = 0.0;     // FLOPs / s
  double gpu_mem_bandwidth = 0.0;  // bytes / s
  double pcie_bandwidth = 0.0;     // bytes / s
  double ethernet_bandwidth = 0.0; // bytes / s
  double nvlink_bandwidth = 0.0;   // bytes / s
  double gpu_mem_capacity = 16e9;  // bytes; only used for AllReduce eligibility

  bool operator==(const HardwareProfile&) const = default;

  void validate() const {
    auto check = [](double v, const char* name) {
      if (!(std::isfinite(v) && v > 0.0)) {
        throw DomainError(std::string("hardware profile: ") + name + " must be positive");
      }
    };
    check(gpu_peak_flops, "gpu_peak_flops");
    check(gpu_mem_bandwidth, "gpu_mem_bandwidth");
    check(pcie_bandwidth, "pcie_bandwidth");
    check(ethernet_bandwidth, "ethernet_bandwidth");
    check(nvlink_bandwidth, "nvlink_bandwidth");
    check(gpu_mem_capacity, "gpu_mem_capacity");
  }
};

inline constexpr double kDefaultEfficiency = 0.7;

/// Attainable fraction of each peak capacity.
struct EfficiencyModel {
  double compute_eff = kDefaultEfficiency;
  double mem_eff = kDefaultEfficiency;
  double pcie_eff = kDefaultEfficiency;
  double ethernet_eff = kDefaultEfficiency;
  double nvlink_eff = kDefaultEfficiency;

  bool operator==(const EfficiencyModel&) const = default;

  static EfficiencyModel uniform(double eff) { return {eff, eff, eff, eff, eff}; }

  /// Compute-side (GPU FLOPs, GPU memory) and communication-side (PCIe,
  /// Ethernet, NVLink) efficiencies set separately.
  static EfficiencyModel split(double compute, double comm) {
    return {compute, compute, comm, comm, comm};
  }

  void validate() const {
    auto check = [](double v, const char* name) {
      if (!(v > 0.0 && v <= 1.0)) {
        throw DomainError(std::string("efficiency model: ") + name + " must lie in (0, 1]");
      }
    };
    check(compute_eff, "compute_eff");
    check(mem_eff, "mem_eff");
    check(pcie_eff, "pcie_eff");
    check(ethernet_eff, "ethernet_eff");
    check(nvlink_eff, "nvlink_eff");
  }
};

// ---------------------------------------------------------------------------
// Workload records
// ---------------------------------------------------------------------------

/// One job's per-cNode, per-step resource demands.
struct WorkloadRecord {
  std::string job_id;
  ArchitectureKind arch = ArchitectureKind::OneWorkerOneGpu;
  std::int64_t num_cnodes = 1;
  std::int64_t batch_size = 1;          // samples per cNode per step
  double flops = 0.0;                   // FLOPs per cNode per step
  double mem_access_bytes = 0.0;        // GPU memory traffic per cNode per step
  double input_bytes = 0.0;             // host-to-GPU input per cNode per step
  double weight_traffic_bytes = 0.0;    // weight/gradient traffic per cNode per step
  double dense_weight_bytes = 0.0;      // resident model size
  double embedding_weight_bytes = 0.0;  // resident model size
  std::optional<double> measured_step_seconds;
  // Raw network traffic as reported for jobs whose architecture has no
  // weight path. Carried as metadata only; never enters the model.
  std::optional<double> raw_network_traffic_bytes;

  bool operator==(const WorkloadRecord&) const = default;

  double model_bytes() const { return dense_weight_bytes + embedding_weight_bytes; }
};

struct RecordIssue {
  std::string field;
  std::string message;

  bool operator==(const RecordIssue&) const = default;
};

class InvalidRecord : public Error {
 public:
  InvalidRecord(std::string job_id, std::vector<RecordIssue> issues)
      : Error(compose(job_id, issues)), job_id_(std::move(job_id)), issues_(std::move(issues)) {}

  const std::string& job_id() const noexcept { return job_id_; }
  const std::vector<RecordIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string compose(const std::string& job_id, const std::vector<RecordIssue>& issues) {
    std::string out = "invalid record '" + job_id + "':";
    for (std::size_t i = 0; i < issues.size(); ++i) {
      out += (i == 0 ? " " : "; ") + issues[i].message;
    }
    return out;
  }

  std::string job_id_;
  std::vector<RecordIssue> issues_;
};

/// Every invariant violation in `rec`; empty when the record is valid.
inline std::vector<RecordIssue> check_record(const WorkloadRecord& rec) {
  std::vector<RecordIssue> issues;

  if (rec.job_id.empty()) issues.push_back({"job_id", "empty job_id"});
  if (rec.num_cnodes < 1) issues.push_back({"num_cnodes", "num_cnodes must be positive"});
  if (rec.batch_size < 1) issues.push_back({"batch_size", "batch_size must be positive"});

  const std::pair<const char*, double> quantities[] = {
      {"flops", rec.flops},
      {"mem_access_bytes", rec.mem_access_bytes},
      {"input_bytes", rec.input_bytes},
      {"weight_traffic_bytes", rec.weight_traffic_bytes},
      {"dense_weight_bytes", rec.dense_weight_bytes},
      {"embedding_weight_bytes", rec.embedding_weight_bytes},
  };
  for (const auto& [name, value] : quantities) {
    if (!std::isfinite(value)) {
      issues.push_back({name, std::string("non-finite ") + name});
    } else if (value < 0.0) {
      issues.push_back({name, std::string("negative ") + name});
    }
  }

  if (rec.measured_step_seconds &&
      !(std::isfinite(*rec.measured_step_seconds) && *rec.measured_step_seconds > 0.0)) {
    issues.push_back({"measured_step_seconds", "measured_step_seconds must be positive"});
  }
  if (rec.raw_network_traffic_bytes &&
      !(std::isfinite(*rec.raw_network_traffic_bytes) && *rec.raw_network_traffic_bytes >= 0.0)) {
    issues.push_back({"raw_network_traffic_bytes", "negative raw_network_traffic_bytes"});
  }

  if (rec.arch == ArchitectureKind::OneWorkerOneGpu) {
    if (rec.num_cnodes != 1) issues.push_back({"num_cnodes", "cnodes must be 1 for 1w1g"});
    if (rec.weight_traffic_bytes != 0.0) {
      issues.push_back({"weight_traffic_bytes", "nonzero weight traffic on 1w1g"});
    }
  }
  return issues;
}

/// Returns `rec` unchanged if valid; otherwise throws InvalidRecord listing
/// every violation.
inline WorkloadRecord validate_record(WorkloadRecord rec) {
  auto issues = check_record(rec);
  if (!issues.empty()) throw InvalidRecord(rec.job_id, std::move(issues));
  return rec;
}

/// A set of jobs; cNode counts serve as aggregation weights.
struct JobPopulation {
  std::vector<WorkloadRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  std::int64_t total_cnodes() const {
    std::int64_t total = 0;
    for (const auto& r : records) total += r.num_cnodes;
    return total;
  }

  const WorkloadRecord* find(std::string_view job_id) const {
    for (const auto& r : records) {
      if (r.job_id == job_id) return &r;
    }
    return nullptr;
  }

  const WorkloadRecord& at(std::string_view job_id) const {
    if (const auto* r = find(job_id)) return *r;
    throw DomainError("no job '" + std::string(job_id) + "' in population");
  }
};

// ---------------------------------------------------------------------------
// Time breakdown
// ---------------------------------------------------------------------------
enum class Medium { PCIe, Ethernet, NVLink };

inline constexpr std::string_view to_label(Medium m) {
  switch (m) {
    case Medium::PCIe: return "pcie";
    case Medium::Ethernet: return "ethernet";
    case Medium::NVLink: return "nvlink";
  }
  return "unknown";
}

struct Shares {
  double data = 0.0;
  double compute_bound = 0.0;
  double memory_bound = 0.0;
  double weight = 0.0;

  bool operator==(const Shares&) const = default;
  double sum() const { return data + compute_bound + memory_bound + weight; }
};

enum class Component { Data, ComputeBound, MemoryBound, Weight };

inline constexpr std::array<Component, 4> kAllComponents = {
    Component::Data, Component::ComputeBound, Component::MemoryBound, Component::Weight};

inline constexpr std::string_view to_label(Component c) {
  switch (c) {
    case Component::Data: return "data";
    case Component::ComputeBound: return "compute_bound";
    case Component::MemoryBound: return "memory_bound";
    case Component::Weight: return "weight";
  }
  return "unknown";
}

inline Component parse_component(std::string_view label) {
  for (auto c : kAllComponents) {
    if (to_label(c) == label) return c;
  }
  throw ParseError("unknown component '" + std::string(label) + "'");
}

inline double share_of(const Shares& s, Component c) {
  switch (c) {
    case Component::Data: return s.data;
    case Component::ComputeBound: return s.compute_bound;
    case Component::MemoryBound: return s.memory_bound;
    case Component::Weight: return s.weight;
  }
  return 0.0;
}

struct TimeBreakdown {
  double t_data = 0.0;
  double t_compute_bound = 0.0;
  double t_memory_bound = 0.0;
  double t_compute = 0.0;
  std::vector<std::pair<Medium, double>> t_weight_per_medium;  // in path order
  double t_weight = 0.0;
  double t_total = 0.0;
  Shares shares;
  bool shares_defined = false;  // false when every component is zero

  double weight_on(Medium m) const {
    double t = 0.0;
    for (const auto& [medium, seconds] : t_weight_per_medium) {
      if (medium == m) t += seconds;
    }
    return t;
  }
};

}  // namespace dlcost
