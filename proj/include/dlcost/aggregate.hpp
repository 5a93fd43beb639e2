#pragma once

// Cluster-level statistics over a job population: architecture composition,
// job-level and cNode-weighted breakdown averages, and empirical CDFs.
//
// Every reduction sums its terms in sorted order, so results are bitwise
// invariant under permutation of the population.

#include <algorithm>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "dlcost/cost_engine.hpp"
#include "dlcost/ecdf.hpp"

namespace dlcost {

enum class AggregationLevel { Job, CNode };

inline constexpr std::string_view to_label(AggregationLevel level) {
  return level == AggregationLevel::Job ? "job" : "cnode";
}

inline AggregationLevel parse_level(std::string_view label) {
  if (label == "job") return AggregationLevel::Job;
  if (label == "cnode") return AggregationLevel::CNode;
  throw ParseError("unknown aggregation level '" + std::string(label) + "'");
}

namespace detail {

inline double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

inline void require_non_empty(const JobPopulation& pop, const char* what) {
  if (pop.empty()) throw DomainError(std::string(what) + ": empty population");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------
struct CompositionRow {
  ArchitectureKind arch;
  std::int64_t jobs = 0;
  double job_fraction = 0.0;
  std::int64_t cnodes = 0;
  double cnode_fraction = 0.0;
};

/// One row per architecture (all six, including absent ones).
inline std::vector<CompositionRow> composition(const JobPopulation& pop) {
  detail::require_non_empty(pop, "composition");
  const auto total_jobs = static_cast<double>(pop.size());
  const auto total_cnodes = static_cast<double>(pop.total_cnodes());

  std::vector<CompositionRow> rows;
  for (auto arch : kAllArchitectures) {
    CompositionRow row{arch};
    for (const auto& r : pop.records) {
      if (r.arch != arch) continue;
      ++row.jobs;
      row.cnodes += r.num_cnodes;
    }
    row.job_fraction = static_cast<double>(row.jobs) / total_jobs;
    row.cnode_fraction = static_cast<double>(row.cnodes) / total_cnodes;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Weighted breakdown averages
// ---------------------------------------------------------------------------
struct JobShares {
  std::int64_t cnodes = 1;
  Shares shares;
};

struct ShareAverages {
  Shares job_level;    // unweighted mean over jobs
  Shares cnode_level;  // sum_j (cnodes_j / total_cnodes) * share_j
};

inline ShareAverages average_shares(std::span<const JobShares> jobs) {
  if (jobs.empty()) throw DomainError("average_shares: no jobs");
  std::int64_t total_cnodes = 0;
  for (const auto& j : jobs) total_cnodes += j.cnodes;
  const auto n = static_cast<double>(jobs.size());
  const auto total = static_cast<double>(total_cnodes);

  auto reduce = [&](auto member) {
    std::vector<double> plain, weighted;
    plain.reserve(jobs.size());
    weighted.reserve(jobs.size());
    for (const auto& j : jobs) {
      const double s = j.shares.*member;
      plain.push_back(s);
      weighted.push_back(static_cast<double>(j.cnodes) / total * s);
    }
    return std::pair{detail::sorted_sum(std::move(plain)) / n, detail::sorted_sum(std::move(weighted))};
  };

  ShareAverages out;
  std::tie(out.job_level.data, out.cnode_level.data) = reduce(&Shares::data);
  std::tie(out.job_level.compute_bound, out.cnode_level.compute_bound) = reduce(&Shares::compute_bound);
  std::tie(out.job_level.memory_bound, out.cnode_level.memory_bound) = reduce(&Shares::memory_bound);
  std::tie(out.job_level.weight, out.cnode_level.weight) = reduce(&Shares::weight);
  return out;
}

/// Per-job shares in population order. Zero-demand jobs contribute all-zero
/// shares; 1w1g jobs contribute a weight share of 0.
inline std::vector<JobShares> job_shares(const JobPopulation& pop, const HardwareProfile& hw,
                                         const EfficiencyModel& eff, OverlapMode overlap) {
  std::vector<JobShares> out;
  out.reserve(pop.size());
  for (const auto& r : pop.records) out.push_back({r.num_cnodes, breakdown(r, hw, eff, overlap).shares});
  return out;
}

inline ShareAverages weighted_breakdown(const JobPopulation& pop, const HardwareProfile& hw,
                                        const EfficiencyModel& eff,
                                        OverlapMode overlap = OverlapMode::NoOverlap) {
  detail::require_non_empty(pop, "weighted_breakdown");
  const auto shares = job_shares(pop, hw, eff, overlap);
  return average_shares(shares);
}

// ---------------------------------------------------------------------------
// CDFs
// ---------------------------------------------------------------------------
inline std::int64_t level_weight(const WorkloadRecord& r, AggregationLevel level) {
  return level == AggregationLevel::Job ? 1 : r.num_cnodes;
}

inline std::vector<CdfPoint<double>> share_cdf(const JobPopulation& pop, Component component,
                                               const HardwareProfile& hw, const EfficiencyModel& eff,
                                               OverlapMode overlap, AggregationLevel level) {
  detail::require_non_empty(pop, "share_cdf");
  std::vector<std::pair<double, std::int64_t>> samples;
  samples.reserve(pop.size());
  for (const auto& r : pop.records) {
    samples.emplace_back(share_of(breakdown(r, hw, eff, overlap).shares, component),
                         level_weight(r, level));
  }
  return WeightedEcdf<double>(std::move(samples)).points();
}

struct ScaleDistribution {
  ArchitectureKind arch;
  WeightedEcdf<std::int64_t> cnodes;
  WeightedEcdf<double> model_bytes;  // dense + embedding
};

/// Job-level CDFs of cNode count and model size, one entry per architecture
/// present in the population (in canonical architecture order).
inline std::vector<ScaleDistribution> scale_distribution(const JobPopulation& pop) {
  detail::require_non_empty(pop, "scale_distribution");
  std::vector<ScaleDistribution> out;
  for (auto arch : kAllArchitectures) {
    std::vector<std::pair<std::int64_t, std::int64_t>> cnodes;
    std::vector<std::pair<double, std::int64_t>> sizes;
    for (const auto& r : pop.records) {
      if (r.arch != arch) continue;
      cnodes.emplace_back(r.num_cnodes, 1);
      sizes.emplace_back(r.model_bytes(), 1);
    }
    if (cnodes.empty()) continue;
    out.push_back({arch, WeightedEcdf<std::int64_t>(std::move(cnodes)),
                   WeightedEcdf<double>(std::move(sizes))});
  }
  return out;
}

}  // namespace dlcost
