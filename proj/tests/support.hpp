#pragma once

#include <cstdint>
#include <string>

#include "dlcost/dlcost.hpp"

namespace testutil {

inline dlcost::WorkloadRecord make_record(std::string id, dlcost::ArchitectureKind arch, std::int64_t cnodes,
                                          double flops, double mem, double input, double weight,
                                          double dense = 1e6, double emb = 0.0, std::int64_t batch = 32) {
  dlcost::WorkloadRecord r;
  r.job_id = std::move(id);
  r.arch = arch;
  r.num_cnodes = cnodes;
  r.batch_size = batch;
  r.flops = flops;
  r.mem_access_bytes = mem;
  r.input_bytes = input;
  r.weight_traffic_bytes = weight;
  r.dense_weight_bytes = dense;
  r.embedding_weight_bytes = emb;
  return r;
}

// Only weight traffic; data and compute times are zero.
inline dlcost::WorkloadRecord weight_only(dlcost::ArchitectureKind arch, std::int64_t cnodes, double weight) {
  return make_record("w", arch, cnodes, 0, 0, 0, weight);
}

inline dlcost::JobPopulation population(std::initializer_list<dlcost::WorkloadRecord> recs) {
  dlcost::JobPopulation p;
  p.records = recs;
  return p;
}

inline dlcost::JobPopulation synthetic(std::uint64_t seed, std::size_t size) {
  auto spec = dlcost::SynthSpec::with_seed(seed);
  spec.size = size;
  return dlcost::synth_population(spec);
}

inline bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale;
}

}  // namespace testutil
