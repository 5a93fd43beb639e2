#include <gtest/gtest.h>

#include "dlcost/dlcost.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace dlcost;
using testutil::make_record;

namespace {
const EfficiencyModel kEff;
using A = ArchitectureKind;
}  // namespace

TEST(Eligibility, ResNet50Fits) {
  const auto f = check_allreduce_eligibility(builtin_corpus().at("resnet50"), pai_baseline());
  EXPECT_TRUE(f.feasible);
  EXPECT_TRUE(f.reason.empty());
}

TEST(Eligibility, MultiInterestsTooLarge) {
  const auto f = check_allreduce_eligibility(builtin_corpus().at("multi_interests"), pai_baseline());
  EXPECT_FALSE(f.feasible);
  EXPECT_EQ(f.reason, "model does not fit in GPU memory");
}

TEST(Eligibility, BoundaryIncluded) {
  auto r = make_record("edge", A::PsWorker, 4, 1, 1, 1, 1, 10e9, 6e9);
  EXPECT_TRUE(check_allreduce_eligibility(r, pai_baseline()).feasible);
  r.embedding_weight_bytes = 6e9 + 1.0;
  EXPECT_FALSE(check_allreduce_eligibility(r, pai_baseline()).feasible);
}

TEST(Projection, AllReduceLocalCapsCnodes) {
  auto r = make_record("ps", A::PsWorker, 32, 1e9, 1e9, 1e6, 1e8);
  const auto p = project(r, A::AllReduceLocal, pai_baseline(), kEff);
  EXPECT_EQ(p.source_cnodes, 32);
  EXPECT_EQ(p.target_cnodes, 8);
}

TEST(Projection, CnodeRules) {
  auto r = make_record("ps", A::PsWorker, 32, 1, 1, 1, 1);
  EXPECT_EQ(projected_cnodes(r, A::OneWorkerOneGpu), 1);
  EXPECT_EQ(projected_cnodes(r, A::OneWorkerNGpu), 8);
  EXPECT_EQ(projected_cnodes(r, A::AllReduceCluster), 32);
  EXPECT_EQ(projected_cnodes(r, A::Pearl), 32);
  r.num_cnodes = 4;
  EXPECT_EQ(projected_cnodes(r, A::AllReduceLocal), 4);
}

TEST(Projection, PureWeightToAllReduceLocal) {
  const auto r = testutil::weight_only(A::PsWorker, 32, 1e9);
  const auto p = project(r, A::AllReduceLocal, pai_baseline(), kEff);
  ASSERT_TRUE(p.feasible());
  EXPECT_NEAR(*p.step_speedup, 21.0, 21.0 * 1e-9);
  EXPECT_NEAR(*p.throughput_speedup, 5.25, 5.25 * 1e-9);
}

TEST(Projection, PureWeightToAllReduceCluster) {
  const auto r = testutil::weight_only(A::PsWorker, 32, 1e9);
  const auto p = project(r, A::AllReduceCluster, pai_baseline(), kEff);
  ASSERT_TRUE(p.feasible());
  const double expected = (1 / 3.125 + 1 / 10.0) / (1 / 3.125 + 1 / 50.0);
  EXPECT_NEAR(*p.step_speedup, expected, 1e-12);
  EXPECT_NEAR(*p.step_speedup, 1.2353, 1e-4);
  EXPECT_EQ(p.target_cnodes, 32);
}

TEST(Projection, InfeasibleIsAResultNotAnError) {
  const auto mi = builtin_corpus().at("multi_interests");
  const auto p = project(mi, A::AllReduceLocal, pai_baseline(), kEff);
  EXPECT_FALSE(p.feasible());
  EXPECT_FALSE(p.step_speedup.has_value());
  EXPECT_FALSE(p.throughput_speedup.has_value());
  EXPECT_GT(p.source.t_total, 0.0);
}

TEST(Projection, PearlNeedsEmbeddings) {
  const auto r50 = builtin_corpus().at("resnet50");
  const auto p = project(r50, A::Pearl, pai_baseline(), kEff);
  EXPECT_FALSE(p.feasible());
  EXPECT_EQ(p.feasibility.reason, "no sparse embedding");
  const auto mi = builtin_corpus().at("multi_interests");
  EXPECT_TRUE(project(mi, A::Pearl, pai_baseline(), kEff).feasible());
}

TEST(Projection, IdentityIsExactlyOne) {
  for (const auto& r : builtin_corpus().records) {
    for (auto mode : {OverlapMode::NoOverlap, OverlapMode::IdealOverlap}) {
      const auto p = project(r, r.arch, pai_baseline(), kEff, mode);
      ASSERT_TRUE(p.feasible()) << r.job_id;
      EXPECT_EQ(*p.step_speedup, 1.0) << r.job_id;
      EXPECT_EQ(*p.throughput_speedup, 1.0) << r.job_id;
    }
  }
  // Even an oversized model stays feasible where it already runs.
  auto big = make_record("big", A::AllReduceLocal, 8, 1, 1, 1, 1, 1e12, 0);
  EXPECT_TRUE(project(big, A::AllReduceLocal, pai_baseline(), kEff).feasible());
}

TEST(Projection, DemandFieldsUnchanged) {
  const auto mi = builtin_corpus().at("multi_interests");
  const auto moved = projected_record(mi, A::AllReduceCluster);
  EXPECT_EQ(moved.flops, mi.flops);
  EXPECT_EQ(moved.mem_access_bytes, mi.mem_access_bytes);
  EXPECT_EQ(moved.input_bytes, mi.input_bytes);
  EXPECT_EQ(moved.weight_traffic_bytes, mi.weight_traffic_bytes);
  EXPECT_EQ(moved.batch_size, mi.batch_size);
  EXPECT_EQ(moved.arch, A::AllReduceCluster);
}

TEST(Projection, ZeroDemandJob) {
  auto r = make_record("z", A::PsWorker, 16, 0, 0, 0, 0);
  const auto p = project(r, A::AllReduceLocal, pai_baseline(), kEff);
  EXPECT_EQ(*p.step_speedup, 1.0);
  EXPECT_EQ(*p.throughput_speedup, 0.5);
}

TEST(PopulationProjection, SingleWeightBoundJob) {
  auto pop = testutil::population({testutil::weight_only(A::PsWorker, 8, 1e9)});
  const auto out = population_speedup_profile(pop, A::AllReduceLocal, pai_baseline(), kEff);
  EXPECT_EQ(out.summary.fraction_throughput_sped_up, 1.0);
  EXPECT_EQ(out.summary.fraction_step_sped_up, 1.0);
}

TEST(PopulationProjection, HalfInfeasible) {
  auto pop = testutil::population({testutil::weight_only(A::PsWorker, 8, 1e9), builtin_corpus().at("multi_interests")});
  const auto out = population_speedup_profile(pop, A::AllReduceLocal, pai_baseline(), kEff);
  EXPECT_EQ(out.summary.fraction_infeasible, 0.5);
  EXPECT_EQ(out.results.size(), 2u);
  EXPECT_EQ(out.summary.step_speedups.size(), 1u);
}

TEST(PopulationProjection, ContentionSlowsDataBoundJob) {
  // Input I/O on a full server shares PCIe eight ways; the weight-bound job
  // gets faster.
  auto io_bound = make_record("io", A::PsWorker, 16, 0, 0, 1e9, 0);
  auto weight_bound = testutil::weight_only(A::PsWorker, 8, 1e9);
  auto pop = testutil::population({io_bound, weight_bound});
  const auto out = population_speedup_profile(pop, A::AllReduceLocal, pai_baseline(), kEff);

  // Hand oracle: io job goes from 1e9/7e9 to 1e9/(7e9/8), cNodes 16 -> 8.
  const double io_step = (1e9 / 7e9) / (1e9 / (7e9 / 8));
  EXPECT_NEAR(*out.results[0].step_speedup, io_step, 1e-12);
  EXPECT_NEAR(*out.results[0].throughput_speedup, io_step * 8 / 16, 1e-12);
  EXPECT_LT(*out.results[0].throughput_speedup, 1.0);
  EXPECT_GT(*out.results[1].throughput_speedup, 1.0);
  EXPECT_EQ(out.summary.fraction_throughput_sped_up, 0.5);
}

TEST(PopulationProjection, EmptyPopulationRejected) {
  EXPECT_THROW(population_speedup_profile(JobPopulation{}, A::AllReduceLocal, pai_baseline(), kEff), DomainError);
}

TEST(PopulationProjection, MatchesOracle) {
  const auto pop = testutil::synthetic(77, 100);
  for (auto target : kAllArchitectures) {
    for (auto mode : {OverlapMode::NoOverlap, OverlapMode::IdealOverlap}) {
      const auto out = population_speedup_profile(pop, target, pai_baseline(), kEff, mode);
      std::size_t up = 0, infeasible = 0;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto o = oracle::project(pop.records[i], target, pai_baseline(), kEff, mode);
        const auto& r = out.results[i];
        ASSERT_EQ(r.feasible(), o.feasible);
        EXPECT_EQ(r.target_cnodes, o.cnodes);
        if (!o.feasible) {
          ++infeasible;
          continue;
        }
        EXPECT_TRUE(testutil::rel_close(*r.step_speedup, o.step, 1e-9));
        EXPECT_TRUE(testutil::rel_close(*r.throughput_speedup, o.thr, 1e-9));
        if (o.thr > 1.0) ++up;
      }
      EXPECT_NEAR(out.summary.fraction_throughput_sped_up, double(up) / pop.size(), 1e-12);
      EXPECT_NEAR(out.summary.fraction_infeasible, double(infeasible) / pop.size(), 1e-12);
    }
  }
}
