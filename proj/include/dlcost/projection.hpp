#pragma once

// Architecture what-if: re-evaluate a job as if it ran under a different
// distributed-training architecture, holding its per-cNode demands fixed.

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "dlcost/cost_engine.hpp"

namespace dlcost {

struct Feasibility {
  bool feasible = true;
  std::string reason;  // empty when feasible
};

/// AllReduce runs in weight-replica mode: the whole model must fit in one
/// GPU's memory.
inline Feasibility check_allreduce_eligibility(const WorkloadRecord& rec, const HardwareProfile& hw) {
  if (rec.model_bytes() <= hw.gpu_mem_capacity) return {};
  return {false, "model does not fit in GPU memory"};
}

/// cNode count a job keeps after moving to `target`.
inline std::int64_t projected_cnodes(const WorkloadRecord& rec, ArchitectureKind target) {
  if (target == rec.arch) return rec.num_cnodes;
  switch (target) {
    case ArchitectureKind::OneWorkerOneGpu: return 1;
    case ArchitectureKind::OneWorkerNGpu:
    case ArchitectureKind::AllReduceLocal: return std::min(rec.num_cnodes, kGpusPerServer);
    case ArchitectureKind::PsWorker:
    case ArchitectureKind::AllReduceCluster:
    case ArchitectureKind::Pearl: return rec.num_cnodes;
  }
  return rec.num_cnodes;
}

/// Whether `rec` can run under `target` at all. The source architecture is
/// always feasible.
inline Feasibility target_feasibility(const WorkloadRecord& rec, ArchitectureKind target,
                                      const HardwareProfile& hw) {
  if (target == rec.arch) return {};
  switch (target) {
    case ArchitectureKind::AllReduceLocal:
    case ArchitectureKind::AllReduceCluster: return check_allreduce_eligibility(rec, hw);
    case ArchitectureKind::Pearl:
      if (rec.embedding_weight_bytes > 0.0) return {};
      return {false, "no sparse embedding"};
    default: return {};
  }
}

struct ProjectionResult {
  std::string job_id;
  ArchitectureKind source_arch = ArchitectureKind::OneWorkerOneGpu;
  ArchitectureKind target_arch = ArchitectureKind::OneWorkerOneGpu;
  std::int64_t source_cnodes = 1;
  std::int64_t target_cnodes = 1;
  TimeBreakdown source;
  TimeBreakdown target;  // left default-initialized when infeasible
  std::optional<double> step_speedup;        // source.t_total / target.t_total
  std::optional<double> throughput_speedup;  // target throughput / source throughput
  Feasibility feasibility;

  bool feasible() const { return feasibility.feasible; }
};

/// The record `rec` would become under `target`: same per-cNode demands,
/// new architecture and cNode count.
inline WorkloadRecord projected_record(const WorkloadRecord& rec, ArchitectureKind target) {
  WorkloadRecord out = rec;
  out.arch = target;
  out.num_cnodes = projected_cnodes(rec, target);
  return out;
}

inline ProjectionResult project(const WorkloadRecord& rec, ArchitectureKind target,
                                const HardwareProfile& hw, const EfficiencyModel& eff,
                                OverlapMode overlap = OverlapMode::NoOverlap) {
  ProjectionResult r;
  r.job_id = rec.job_id;
  r.source_arch = rec.arch;
  r.target_arch = target;
  r.source_cnodes = rec.num_cnodes;
  r.target_cnodes = projected_cnodes(rec, target);
  r.source = breakdown(rec, hw, eff, overlap);
  r.feasibility = target_feasibility(rec, target, hw);
  if (!r.feasible()) return r;

  const WorkloadRecord moved = projected_record(rec, target);
  r.target = breakdown(moved, hw, eff, overlap);

  const double ts = r.source.t_total;
  const double tt = r.target.t_total;
  if (ts > 0.0 && tt > 0.0) {
    r.step_speedup = ts / tt;
    r.throughput_speedup = throughput(moved, tt) / throughput(rec, ts);
  } else if (ts == 0.0 && tt == 0.0) {
    // Zero-demand job: nothing changes per step; only the cNode count does.
    r.step_speedup = 1.0;
    r.throughput_speedup =
        static_cast<double>(r.target_cnodes) / static_cast<double>(r.source_cnodes);
  } else {
    r.step_speedup = tt == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    r.throughput_speedup = r.step_speedup;
  }
  return r;
}

struct ProjectionSummary {
  std::size_t jobs = 0;
  double fraction_throughput_sped_up = 0.0;
  double fraction_step_sped_up = 0.0;
  double fraction_infeasible = 0.0;
  std::vector<double> step_speedups;        // feasible jobs, ascending
  std::vector<double> throughput_speedups;  // feasible jobs, ascending
};

struct PopulationProjection {
  std::vector<ProjectionResult> results;  // population order
  ProjectionSummary summary;
};

/// Fractions are over all jobs in the population, infeasible ones included.
inline ProjectionSummary summarize_projection(const std::vector<ProjectionResult>& results) {
  ProjectionSummary s;
  s.jobs = results.size();
  std::size_t thr_up = 0, step_up = 0, infeasible = 0;
  for (const auto& r : results) {
    if (!r.feasible()) {
      ++infeasible;
      continue;
    }
    if (*r.throughput_speedup > 1.0) ++thr_up;
    if (*r.step_speedup > 1.0) ++step_up;
    s.step_speedups.push_back(*r.step_speedup);
    s.throughput_speedups.push_back(*r.throughput_speedup);
  }
  std::sort(s.step_speedups.begin(), s.step_speedups.end());
  std::sort(s.throughput_speedups.begin(), s.throughput_speedups.end());
  if (s.jobs > 0) {
    const auto n = static_cast<double>(s.jobs);
    s.fraction_throughput_sped_up = static_cast<double>(thr_up) / n;
    s.fraction_step_sped_up = static_cast<double>(step_up) / n;
    s.fraction_infeasible = static_cast<double>(infeasible) / n;
  }
  return s;
}

inline PopulationProjection population_speedup_profile(const JobPopulation& pop, ArchitectureKind target,
                                                       const HardwareProfile& hw,
                                                       const EfficiencyModel& eff,
                                                       OverlapMode overlap = OverlapMode::NoOverlap) {
  if (pop.empty()) throw DomainError("population_speedup_profile: empty population");
  PopulationProjection out;
  out.results.reserve(pop.size());
  for (const auto& rec : pop.records) out.results.push_back(project(rec, target, hw, eff, overlap));
  out.summary = summarize_projection(out.results);
  return out;
}

}  // namespace dlcost
