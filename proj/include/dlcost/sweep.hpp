#pragma once

// What-if analyses over a population: hardware upgrades one resource at a
// time, efficiency sensitivity of the weight-traffic share, and the
// no-overlap versus ideal-overlap comparison.

#include <string>
#include <vector>

#include "dlcost/aggregate.hpp"
#include "dlcost/projection.hpp"

namespace dlcost {

enum class Resource { Ethernet, PCIe, GpuFlops, GpuMemBandwidth };

inline constexpr std::array<Resource, 4> kAllResources = {Resource::Ethernet, Resource::PCIe,
                                                         Resource::GpuFlops, Resource::GpuMemBandwidth};

inline constexpr std::string_view to_label(Resource r) {
  switch (r) {
    case Resource::Ethernet: return "ethernet";
    case Resource::PCIe: return "pcie";
    case Resource::GpuFlops: return "gpu_flops";
    case Resource::GpuMemBandwidth: return "gpu_mem";
  }
  return "unknown";
}

inline Resource parse_resource(std::string_view label) {
  for (auto r : kAllResources) {
    if (to_label(r) == label) return r;
  }
  throw ParseError("unknown sweep axis '" + std::string(label) + "'");
}

/// Unit kind used to parse candidate strings for a resource.
inline QuantityKind resource_quantity_kind(Resource r) {
  return r == Resource::GpuFlops ? QuantityKind::FlopsRate : QuantityKind::Bandwidth;
}

inline double resource_value(const HardwareProfile& hw, Resource r) {
  switch (r) {
    case Resource::Ethernet: return hw.ethernet_bandwidth;
    case Resource::PCIe: return hw.pcie_bandwidth;
    case Resource::GpuFlops: return hw.gpu_peak_flops;
    case Resource::GpuMemBandwidth: return hw.gpu_mem_bandwidth;
  }
  return 0.0;
}

inline HardwareProfile with_resource(HardwareProfile hw, Resource r, double value) {
  switch (r) {
    case Resource::Ethernet: hw.ethernet_bandwidth = value; break;
    case Resource::PCIe: hw.pcie_bandwidth = value; break;
    case Resource::GpuFlops: hw.gpu_peak_flops = value; break;
    case Resource::GpuMemBandwidth: hw.gpu_mem_bandwidth = value; break;
  }
  return hw;
}

struct SweepAxis {
  Resource resource = Resource::Ethernet;
  std::vector<double> candidates;  // canonical units
  std::optional<double> baseline;  // normalization unit; defaults to the base profile's value

  double baseline_or(const HardwareProfile& base) const {
    return baseline.value_or(resource_value(base, resource));
  }

  void validate() const {
    if (candidates.empty()) {
      throw DomainError("sweep axis " + std::string(to_label(resource)) + ": no candidates");
    }
    for (double c : candidates) {
      if (!(std::isfinite(c) && c > 0.0)) {
        throw DomainError("sweep axis " + std::string(to_label(resource)) + ": candidates must be positive");
      }
    }
    if (baseline && !(std::isfinite(*baseline) && *baseline > 0.0)) {
      throw DomainError("sweep axis " + std::string(to_label(resource)) + ": baseline must be positive");
    }
  }
};

/// The hardware variations studied for the production cluster:
/// Ethernet {10, 25, 100} Gbps, PCIe {10, 50} GB/s, GPU peak {8, 16, 32, 64}
/// TFLOPs, GPU memory bandwidth {1, 2, 4} TB/s.
inline std::vector<SweepAxis> standard_axes() {
  return {
      {Resource::Ethernet, {10e9 / 8, 25e9 / 8, 100e9 / 8}, std::nullopt},
      {Resource::PCIe, {10e9, 50e9}, std::nullopt},
      {Resource::GpuFlops, {8e12, 16e12, 32e12, 64e12}, std::nullopt},
      {Resource::GpuMemBandwidth, {1e12, 2e12, 4e12}, std::nullopt},
  };
}

inline SweepAxis standard_axis(Resource r) {
  for (auto& axis : standard_axes()) {
    if (axis.resource == r) return axis;
  }
  throw DomainError("no standard axis");
}

inline double speedup_ratio(double t_base, double t_modified) {
  if (t_base == 0.0 && t_modified == 0.0) return 1.0;
  return t_base / t_modified;
}

struct SweepCell {
  std::size_t job_index = 0;
  std::string job_id;
  ArchitectureKind arch = ArchitectureKind::OneWorkerOneGpu;
  Resource resource = Resource::Ethernet;
  double candidate = 0.0;
  double normalized = 0.0;  // candidate / axis baseline
  double t_base = 0.0;
  double t_modified = 0.0;
  double speedup = 1.0;  // t_base / t_modified
};

namespace detail {

inline void check_sweep_inputs(const JobPopulation& pop, const std::vector<SweepAxis>& axes) {
  require_non_empty(pop, "hardware_sweep");
  if (axes.empty()) throw DomainError("hardware_sweep: no axes");
  for (const auto& a : axes) a.validate();
}

// Last axis varies fastest; returns false after the final combination.
inline bool advance_odometer(std::vector<std::size_t>& idx, const std::vector<SweepAxis>& axes) {
  for (std::size_t a = axes.size(); a-- > 0;) {
    if (++idx[a] < axes[a].candidates.size()) return true;
    idx[a] = 0;
  }
  return false;
}

}  // namespace detail

/// Varies one resource at a time; every other resource stays at `base_hw`.
/// Cells are ordered job-major, then axis, then candidate.
inline std::vector<SweepCell> hardware_sweep(const JobPopulation& pop, const std::vector<SweepAxis>& axes,
                                             const HardwareProfile& base_hw, const EfficiencyModel& eff,
                                             OverlapMode overlap = OverlapMode::NoOverlap) {
  detail::check_sweep_inputs(pop, axes);
  std::vector<SweepCell> cells;
  for (std::size_t j = 0; j < pop.size(); ++j) {
    const auto& rec = pop.records[j];
    const double t_base = breakdown(rec, base_hw, eff, overlap).t_total;
    for (const auto& axis : axes) {
      const double unit = axis.baseline_or(base_hw);
      for (double c : axis.candidates) {
        SweepCell cell;
        cell.job_index = j;
        cell.job_id = rec.job_id;
        cell.arch = rec.arch;
        cell.resource = axis.resource;
        cell.candidate = c;
        cell.normalized = c / unit;
        cell.t_base = t_base;
        cell.t_modified = breakdown(rec, with_resource(base_hw, axis.resource, c), eff, overlap).t_total;
        cell.speedup = speedup_ratio(t_base, cell.t_modified);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

struct CartesianCell {
  std::size_t job_index = 0;
  std::string job_id;
  std::vector<double> candidates;  // one per axis, axis order
  double t_base = 0.0;
  double t_modified = 0.0;
  double speedup = 1.0;
};

inline std::size_t cartesian_size(const JobPopulation& pop, const std::vector<SweepAxis>& axes) {
  std::size_t n = pop.size();
  for (const auto& a : axes) n *= a.candidates.size();
  return n;
}

/// Every combination of candidates across all axes. Output grows as the
/// product of candidate counts; see cartesian_size.
inline std::vector<CartesianCell> cartesian_sweep(const JobPopulation& pop, const std::vector<SweepAxis>& axes,
                                                  const HardwareProfile& base_hw, const EfficiencyModel& eff,
                                                  OverlapMode overlap = OverlapMode::NoOverlap) {
  detail::check_sweep_inputs(pop, axes);
  std::vector<CartesianCell> cells;
  cells.reserve(cartesian_size(pop, axes));
  for (std::size_t j = 0; j < pop.size(); ++j) {
    const auto& rec = pop.records[j];
    const double t_base = breakdown(rec, base_hw, eff, overlap).t_total;
    std::vector<std::size_t> idx(axes.size(), 0);
    do {
      HardwareProfile hw = base_hw;
      CartesianCell cell;
      cell.job_index = j;
      cell.job_id = rec.job_id;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        const double c = axes[a].candidates[idx[a]];
        hw = with_resource(hw, axes[a].resource, c);
        cell.candidates.push_back(c);
      }
      cell.t_base = t_base;
      cell.t_modified = breakdown(rec, hw, eff, overlap).t_total;
      cell.speedup = speedup_ratio(t_base, cell.t_modified);
      cells.push_back(std::move(cell));
    } while (detail::advance_odometer(idx, axes));
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Efficiency sensitivity
// ---------------------------------------------------------------------------
struct SensitivityCell {
  double compute_eff = 0.0;  // applied to GPU FLOPs and GPU memory
  double comm_eff = 0.0;     // applied to PCIe, Ethernet and NVLink
  double job_weight_share = 0.0;
  double cnode_weight_share = 0.0;
};

/// Population-average weight-traffic share on a (compute, communication)
/// efficiency grid. Cells are ordered compute-major.
inline std::vector<SensitivityCell> efficiency_sensitivity(const JobPopulation& pop, const HardwareProfile& hw,
                                                           const std::vector<double>& compute_grid,
                                                           const std::vector<double>& comm_grid,
                                                           OverlapMode overlap = OverlapMode::NoOverlap) {
  detail::require_non_empty(pop, "efficiency_sensitivity");
  auto check_grid = [](const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw DomainError(std::string("efficiency_sensitivity: empty ") + name + " grid");
    for (double v : grid) {
      if (!(v > 0.0 && v <= 1.0)) {
        throw DomainError(std::string("efficiency_sensitivity: ") + name + " grid values must lie in (0, 1]");
      }
    }
  };
  check_grid(compute_grid, "compute");
  check_grid(comm_grid, "communication");

  std::vector<SensitivityCell> cells;
  for (double ce : compute_grid) {
    for (double me : comm_grid) {
      const auto avg = weighted_breakdown(pop, hw, EfficiencyModel::split(ce, me), overlap);
      cells.push_back({ce, me, avg.job_level.weight, avg.cnode_level.weight});
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Overlap comparison
// ---------------------------------------------------------------------------

/// Pure weight-path speedup between two architectures (S_w cancels out).
/// Zero when either path is empty.
inline double weight_path_ratio(ArchitectureKind source, ArchitectureKind target, const HardwareProfile& hw,
                                const EfficiencyModel& eff) {
  const double s = weight_seconds_per_byte(source, hw, eff);
  const double t = weight_seconds_per_byte(target, hw, eff);
  if (s == 0.0 || t == 0.0) return 0.0;
  return s / t;
}

struct OverlapSummary {
  OverlapMode mode = OverlapMode::NoOverlap;
  std::vector<double> weight_shares;  // per job, ascending
  ShareAverages averages;
  ProjectionSummary projection;
  // Jobs whose projected step speedup equals the pure weight-path ratio,
  // i.e. weight-bound both before and after projection.
  double fraction_at_path_ratio = 0.0;
};

struct OverlapComparison {
  ArchitectureKind target = ArchitectureKind::AllReduceLocal;
  OverlapSummary none;
  OverlapSummary ideal;
};

inline constexpr double kPathRatioTolerance = 1e-9;

inline OverlapSummary summarize_overlap(const JobPopulation& pop, const HardwareProfile& hw,
                                        const EfficiencyModel& eff, ArchitectureKind target, OverlapMode mode) {
  OverlapSummary s;
  s.mode = mode;
  const auto shares = job_shares(pop, hw, eff, mode);
  for (const auto& js : shares) s.weight_shares.push_back(js.shares.weight);
  std::sort(s.weight_shares.begin(), s.weight_shares.end());
  s.averages = average_shares(shares);

  const auto proj = population_speedup_profile(pop, target, hw, eff, mode);
  s.projection = proj.summary;

  std::size_t at_ratio = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto& r = proj.results[i];
    if (!r.feasible()) continue;
    const double ratio = weight_path_ratio(pop.records[i].arch, target, hw, eff);
    if (ratio > 0.0 && std::abs(*r.step_speedup - ratio) <= kPathRatioTolerance * ratio) ++at_ratio;
  }
  s.fraction_at_path_ratio = static_cast<double>(at_ratio) / static_cast<double>(pop.size());
  return s;
}

inline OverlapComparison overlap_comparison(const JobPopulation& pop, const HardwareProfile& hw,
                                            const EfficiencyModel& eff, ArchitectureKind target) {
  detail::require_non_empty(pop, "overlap_comparison");
  return {target, summarize_overlap(pop, hw, eff, target, OverlapMode::NoOverlap),
          summarize_overlap(pop, hw, eff, target, OverlapMode::IdealOverlap)};
}

}  // namespace dlcost
