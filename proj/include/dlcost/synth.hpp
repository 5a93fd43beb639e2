#pragma once

// Seeded synthetic job populations for desk-scale cluster analyses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dlcost/core_model.hpp"

namespace dlcost {

struct LogRange {
  double lo = 1.0;
  double hi = 1.0;
};

struct SynthSpec {
  std::size_t size = 1000;
  std::vector<std::pair<ArchitectureKind, double>> mix;
  LogRange flops{1e9, 1e13};
  LogRange mem_access_bytes{1e8, 2e11};
  LogRange input_bytes{1e3, 1e9};
  LogRange weight_traffic_bytes{1e5, 1e10};
  LogRange dense_weight_bytes{1e5, 5e9};
  LogRange embedding_weight_bytes{1e6, 5e11};
  double embedding_probability = 0.3;  // chance a job carries sparse embeddings
  LogRange batch_size{1, 4096};
  LogRange cnodes{2, 256};  // multi-GPU jobs; single-server kinds are capped at 8
  std::optional<std::uint64_t> seed;

  /// Illustrative mix weighted toward PS/Worker and 1w1g jobs.
  static SynthSpec with_seed(std::uint64_t seed) {
    SynthSpec s;
    s.mix = {{ArchitectureKind::OneWorkerOneGpu, 0.3}, {ArchitectureKind::OneWorkerNGpu, 0.1},
             {ArchitectureKind::PsWorker, 0.5},        {ArchitectureKind::AllReduceLocal, 0.05},
             {ArchitectureKind::AllReduceCluster, 0.03}, {ArchitectureKind::Pearl, 0.02}};
    s.seed = seed;
    return s;
  }

  void validate() const {
    if (!seed) throw DomainError("synth spec: seed is required");
    if (mix.empty()) throw DomainError("synth spec: empty architecture mix");
    double total = 0.0;
    for (const auto& [arch, f] : mix) {
      if (!(f >= 0.0 && f <= 1.0)) throw DomainError("synth spec: mix fractions must lie in [0, 1]");
      total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("synth spec: mix fractions must sum to 1");
    const std::pair<const char*, LogRange> ranges[] = {
        {"flops", flops},
        {"mem_access_bytes", mem_access_bytes},
        {"input_bytes", input_bytes},
        {"weight_traffic_bytes", weight_traffic_bytes},
        {"dense_weight_bytes", dense_weight_bytes},
        {"embedding_weight_bytes", embedding_weight_bytes},
        {"batch_size", batch_size},
        {"cnodes", cnodes},
    };
    for (const auto& [name, r] : ranges) {
      if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo > 0.0 && r.lo <= r.hi)) {
        throw DomainError(std::string("synth spec: invalid range for ") + name);
      }
    }
    if (batch_size.lo < 1.0 || cnodes.lo < 1.0) throw DomainError("synth spec: integer ranges must start at >= 1");
    if (!(embedding_probability >= 0.0 && embedding_probability <= 1.0)) {
      throw DomainError("synth spec: embedding_probability must lie in [0, 1]");
    }
  }
};

namespace detail {

// Maps the raw mt19937_64 stream to values without the implementation-
// defined std:: distributions, so populations match across standard libraries.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double log_uniform(LogRange r) {
    const double u = uniform01();
    if (r.lo == r.hi) return r.lo;
    const double a = std::log(r.lo);
    return std::exp(a + u * (std::log(r.hi) - a));
  }

  std::int64_t log_uniform_int(LogRange r) {
    const auto lo = static_cast<std::int64_t>(std::ceil(r.lo));
    const auto hi = static_cast<std::int64_t>(std::floor(r.hi));
    const double x = log_uniform({static_cast<double>(lo), static_cast<double>(hi) + 1.0});
    return std::clamp(static_cast<std::int64_t>(std::floor(x)), lo, std::max(lo, hi));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Deterministic for a given spec (including seed). Every record passes
/// validate_record.
inline JobPopulation synth_population(const SynthSpec& spec) {
  spec.validate();
  detail::SynthRng rng(*spec.seed);
  const std::size_t width = std::max<std::size_t>(6, std::to_string(spec.size).size());

  JobPopulation pop;
  pop.records.reserve(spec.size);
  for (std::size_t i = 0; i < spec.size; ++i) {
    // Every field is drawn for every job so the stream stays aligned
    // regardless of which architecture is chosen.
    const double u_arch = rng.uniform01();
    const double flops = rng.log_uniform(spec.flops);
    const double mem = rng.log_uniform(spec.mem_access_bytes);
    const double input = rng.log_uniform(spec.input_bytes);
    const double weight = rng.log_uniform(spec.weight_traffic_bytes);
    const double dense = rng.log_uniform(spec.dense_weight_bytes);
    const bool has_emb = rng.uniform01() < spec.embedding_probability;
    const double emb = rng.log_uniform(spec.embedding_weight_bytes);
    const std::int64_t batch = rng.log_uniform_int(spec.batch_size);
    const std::int64_t cnodes = rng.log_uniform_int(spec.cnodes);

    ArchitectureKind arch = spec.mix.back().first;
    double acc = 0.0;
    for (const auto& [a, f] : spec.mix) {
      acc += f;
      if (u_arch < acc) {
        arch = a;
        break;
      }
    }

    WorkloadRecord r;
    std::string id = std::to_string(i);
    r.job_id = "synth-" + std::string(width - std::min(width, id.size()), '0') + id;
    r.arch = arch;
    r.batch_size = batch;
    r.flops = flops;
    r.mem_access_bytes = mem;
    r.input_bytes = input;
    r.dense_weight_bytes = dense;
    r.embedding_weight_bytes = has_emb ? emb : 0.0;
    switch (arch) {
      case ArchitectureKind::OneWorkerOneGpu:
        r.num_cnodes = 1;
        r.weight_traffic_bytes = 0.0;
        break;
      case ArchitectureKind::OneWorkerNGpu:
      case ArchitectureKind::AllReduceLocal:
        r.num_cnodes = std::min(cnodes, kGpusPerServer);
        r.weight_traffic_bytes = weight;
        break;
      default:
        r.num_cnodes = cnodes;
        r.weight_traffic_bytes = weight;
        break;
    }
    pop.records.push_back(validate_record(std::move(r)));
  }
  return pop;
}

}  // namespace dlcost
