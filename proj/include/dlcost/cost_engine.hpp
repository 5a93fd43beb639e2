#pragma once

// Analytical per-step time model.
//
//   T_d = S_d / (B_pcie * eff_pcie / contention)
//   T_c = #FLOPs / (peak_FLOPs * eff_compute) + S_mem / (B_mem * eff_mem)
//   T_w = sum over the architecture's weight path of S_w / (B_m * eff_m)
//   T_total = T_d + T_c + T_w            (no overlap)
//           = max{T_d, T_c, T_w}         (ideal overlap)

#include <algorithm>
#include <optional>
#include <span>

#include "dlcost/core_model.hpp"

namespace dlcost {

/// Media traversed, in order, by one step's weight/gradient traffic.
inline std::span<const Medium> weight_medium_path(ArchitectureKind arch) {
  static constexpr Medium kPcie[] = {Medium::PCIe};
  static constexpr Medium kEthPcie[] = {Medium::Ethernet, Medium::PCIe};
  static constexpr Medium kNvlink[] = {Medium::NVLink};
  static constexpr Medium kEthNvlink[] = {Medium::Ethernet, Medium::NVLink};

  switch (arch) {
    case ArchitectureKind::OneWorkerOneGpu: return {};
    case ArchitectureKind::OneWorkerNGpu: return kPcie;
    case ArchitectureKind::PsWorker: return kEthPcie;
    case ArchitectureKind::AllReduceLocal: return kNvlink;
    case ArchitectureKind::AllReduceCluster: return kEthNvlink;
    case ArchitectureKind::Pearl: return kNvlink;
  }
  return {};
}

/// Effective (efficiency-scaled) bandwidth of one medium in bytes/s.
inline double effective_bandwidth(Medium m, const HardwareProfile& hw, const EfficiencyModel& eff) {
  switch (m) {
    case Medium::PCIe: return hw.pcie_bandwidth * eff.pcie_eff;
    case Medium::Ethernet: return hw.ethernet_bandwidth * eff.ethernet_eff;
    case Medium::NVLink: return hw.nvlink_bandwidth * eff.nvlink_eff;
  }
  return 0.0;
}

/// Number of cNodes on one server sharing the host's PCIe link for input.
inline std::int64_t pcie_contention(ArchitectureKind arch, std::int64_t num_cnodes) {
  if (arch == ArchitectureKind::OneWorkerNGpu || arch == ArchitectureKind::AllReduceLocal) {
    return std::clamp<std::int64_t>(num_cnodes, 1, kGpusPerServer);
  }
  return 1;
}

inline double data_io_time(const WorkloadRecord& rec, const HardwareProfile& hw,
                           const EfficiencyModel& eff) {
  const auto contention = static_cast<double>(pcie_contention(rec.arch, rec.num_cnodes));
  return rec.input_bytes / (hw.pcie_bandwidth * eff.pcie_eff / contention);
}

struct ComputeTime {
  double compute_bound = 0.0;
  double memory_bound = 0.0;

  double total() const { return compute_bound + memory_bound; }
};

inline ComputeTime compute_time(const WorkloadRecord& rec, const HardwareProfile& hw,
                                const EfficiencyModel& eff) {
  return {rec.flops / (hw.gpu_peak_flops * eff.compute_eff),
          rec.mem_access_bytes / (hw.gpu_mem_bandwidth * eff.mem_eff)};
}

struct WeightTime {
  std::vector<std::pair<Medium, double>> per_medium;
  double total = 0.0;
};

/// Weight/gradient transfer time, serial over every medium in the path.
/// `arch_override` replaces the record's own architecture when choosing the
/// path.
inline WeightTime weight_time(const WorkloadRecord& rec, const HardwareProfile& hw,
                              const EfficiencyModel& eff,
                              std::optional<ArchitectureKind> arch_override = std::nullopt) {
  WeightTime out;
  for (Medium m : weight_medium_path(arch_override.value_or(rec.arch))) {
    const double t = rec.weight_traffic_bytes / effective_bandwidth(m, hw, eff);
    out.per_medium.emplace_back(m, t);
    out.total += t;
  }
  return out;
}

inline TimeBreakdown breakdown(const WorkloadRecord& rec, const HardwareProfile& hw,
                               const EfficiencyModel& eff,
                               OverlapMode overlap = OverlapMode::NoOverlap) {
  TimeBreakdown b;
  b.t_data = data_io_time(rec, hw, eff);

  const auto c = compute_time(rec, hw, eff);
  b.t_compute_bound = c.compute_bound;
  b.t_memory_bound = c.memory_bound;
  b.t_compute = c.total();

  auto w = weight_time(rec, hw, eff);
  b.t_weight_per_medium = std::move(w.per_medium);
  b.t_weight = w.total;

  const double sum = b.t_data + b.t_compute + b.t_weight;
  b.t_total = overlap == OverlapMode::NoOverlap ? sum : std::max({b.t_data, b.t_compute, b.t_weight});

  // Shares always partition the sum of components, in both overlap modes.
  if (sum > 0.0) {
    b.shares_defined = true;
    b.shares = {b.t_data / sum, b.t_compute_bound / sum, b.t_memory_bound / sum, b.t_weight / sum};
  }
  return b;
}

/// Samples per second across all cNodes: (#cNode / T_total) * batch_size.
inline double throughput(const WorkloadRecord& rec, double t_total) {
  if (!(t_total > 0.0)) throw DomainError("throughput requires t_total > 0");
  return static_cast<double>(rec.num_cnodes) / t_total * static_cast<double>(rec.batch_size);
}

/// Signed relative difference (predicted - measured) / measured.
inline double validation_gap(double predicted, double measured) {
  if (!(measured > 0.0)) throw DomainError("validation_gap requires measured > 0");
  return (predicted - measured) / measured;
}

/// Seconds per byte of weight traffic along an architecture's path. The
/// ratio of two of these is the pure weight-path speedup, independent of S_w.
inline double weight_seconds_per_byte(ArchitectureKind arch, const HardwareProfile& hw,
                                      const EfficiencyModel& eff) {
  double s = 0.0;
  for (Medium m : weight_medium_path(arch)) s += 1.0 / effective_bandwidth(m, hw, eff);
  return s;
}

}  // namespace dlcost
