#include <gtest/gtest.h>

#include "dlcost/dlcost.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace dlcost;
using testutil::make_record;

namespace {
const EfficiencyModel kEff;
using A = ArchitectureKind;

SweepAxis ethernet_axis() { return standard_axis(Resource::Ethernet); }
}  // namespace

TEST(Sweep, StandardAxes) {
  const auto axes = standard_axes();
  ASSERT_EQ(axes.size(), 4u);
  EXPECT_EQ(axes[0].candidates, (std::vector<double>{1.25e9, 3.125e9, 12.5e9}));
  EXPECT_EQ(axes[1].candidates, (std::vector<double>{10e9, 50e9}));
  EXPECT_EQ(axes[2].candidates, (std::vector<double>{8e12, 16e12, 32e12, 64e12}));
  EXPECT_EQ(axes[3].candidates, (std::vector<double>{1e12, 2e12, 4e12}));
}

TEST(Sweep, BaselineCandidateIsExactlyOne) {
  const auto cells = hardware_sweep(builtin_corpus(), {ethernet_axis()}, pai_baseline(), kEff);
  ASSERT_EQ(cells.size(), 18u);
  for (const auto& c : cells) {
    if (c.candidate == 3.125e9) {
      EXPECT_EQ(c.speedup, 1.0) << c.job_id;
      EXPECT_EQ(c.normalized, 1.0);
    }
  }
}

TEST(Sweep, NormalizedToBaseUnit) {
  const auto cells = hardware_sweep(builtin_corpus(), {ethernet_axis()}, pai_baseline(), kEff);
  EXPECT_DOUBLE_EQ(cells[0].normalized, 0.4);
  EXPECT_DOUBLE_EQ(cells[2].normalized, 4.0);
}

TEST(Sweep, PureWeightEthernetUpgrade) {
  auto pop = testutil::population({testutil::weight_only(A::PsWorker, 16, 1e9)});
  SweepAxis axis{Resource::Ethernet, {12.5e9}, std::nullopt};
  const auto cells = hardware_sweep(pop, {axis}, pai_baseline(), kEff);
  ASSERT_EQ(cells.size(), 1u);
  const double expected =
      (1 / (3.125 * 0.7) + 1 / (10 * 0.7)) / (1 / (12.5 * 0.7) + 1 / (10 * 0.7));
  EXPECT_NEAR(cells[0].speedup, expected, 1e-12);
  EXPECT_NEAR(cells[0].speedup, 2.3333, 1e-4);
}

TEST(Sweep, UnusedResourceGivesNoSpeedup) {
  auto pop = testutil::population({make_record("c", A::PsWorker, 8, 1e12, 0, 0, 0)});
  for (const auto& c : hardware_sweep(pop, {ethernet_axis()}, pai_baseline(), kEff)) {
    EXPECT_EQ(c.speedup, 1.0);
  }
}

TEST(Sweep, ErrorsOnEmptyInputs) {
  EXPECT_THROW(hardware_sweep(JobPopulation{}, standard_axes(), pai_baseline(), kEff), DomainError);
  EXPECT_THROW(hardware_sweep(builtin_corpus(), {}, pai_baseline(), kEff), DomainError);
  SweepAxis bad{Resource::PCIe, {}, std::nullopt};
  EXPECT_THROW(hardware_sweep(builtin_corpus(), {bad}, pai_baseline(), kEff), DomainError);
  bad.candidates = {-1.0};
  EXPECT_THROW(hardware_sweep(builtin_corpus(), {bad}, pai_baseline(), kEff), DomainError);
}

TEST(Sweep, OneFieldDiffersPerCell) {
  const auto base = pai_baseline();
  for (const auto& axis : standard_axes()) {
    for (double c : axis.candidates) {
      const auto hw = with_resource(base, axis.resource, c);
      int differing = (hw.ethernet_bandwidth != base.ethernet_bandwidth) + (hw.pcie_bandwidth != base.pcie_bandwidth) +
                      (hw.gpu_peak_flops != base.gpu_peak_flops) + (hw.gpu_mem_bandwidth != base.gpu_mem_bandwidth) +
                      (hw.nvlink_bandwidth != base.nvlink_bandwidth) + (hw.gpu_mem_capacity != base.gpu_mem_capacity);
      EXPECT_LE(differing, 1);
      EXPECT_EQ(resource_value(hw, axis.resource), c);
    }
  }
}

TEST(Sweep, SpeedupBoundedByUntouchedTime) {
  const auto pop = testutil::synthetic(5, 200);
  const auto base = pai_baseline();
  for (const auto& c : hardware_sweep(pop, standard_axes(), base, kEff)) {
    const auto b = breakdown(pop.records[c.job_index], base, kEff);
    double touched = 0.0;
    switch (c.resource) {
      case Resource::Ethernet: touched = b.weight_on(Medium::Ethernet); break;
      case Resource::PCIe: touched = b.t_data + b.weight_on(Medium::PCIe); break;
      case Resource::GpuFlops: touched = b.t_compute_bound; break;
      case Resource::GpuMemBandwidth: touched = b.t_memory_bound; break;
    }
    const double untouched = b.t_total - touched;
    if (untouched > 0.0) { EXPECT_LE(c.speedup, b.t_total / untouched * (1 + 1e-12)) << c.job_id; }
  }
}

TEST(Cartesian, SizeAndCorners) {
  const auto pop = builtin_corpus();
  const auto axes = standard_axes();
  EXPECT_EQ(cartesian_size(pop, axes), 6u * 3 * 2 * 4 * 3);
  const auto cells = cartesian_sweep(pop, axes, pai_baseline(), kEff);
  ASSERT_EQ(cells.size(), cartesian_size(pop, axes));
  // Last axis fastest.
  EXPECT_EQ(cells[0].candidates, (std::vector<double>{1.25e9, 10e9, 8e12, 1e12}));
  EXPECT_EQ(cells[1].candidates, (std::vector<double>{1.25e9, 10e9, 8e12, 2e12}));
  for (const auto& c : cells) {
    auto hw = pai_baseline();
    for (std::size_t a = 0; a < axes.size(); ++a) hw = with_resource(hw, axes[a].resource, c.candidates[a]);
    const auto t = oracle::times(pop.records[c.job_index], hw, kEff);
    EXPECT_NEAR(c.t_modified, t.sum(), 1e-12 * t.sum());
  }
}

TEST(Sensitivity, DefaultPointReproducesBreakdown) {
  const auto pop = builtin_corpus();
  const auto cells = efficiency_sensitivity(pop, pai_baseline(), {0.7}, {0.7});
  ASSERT_EQ(cells.size(), 1u);
  const auto avg = weighted_breakdown(pop, pai_baseline(), kEff);
  EXPECT_EQ(cells[0].job_weight_share, avg.job_level.weight);
  EXPECT_EQ(cells[0].cnode_weight_share, avg.cnode_level.weight);
}

TEST(Sensitivity, LowerCommEfficiencyRaisesWeightShare) {
  auto pop = testutil::population({builtin_corpus().at("resnet50")});
  const auto cells = efficiency_sensitivity(pop, pai_baseline(), {0.7}, {0.5, 0.7});
  EXPECT_GT(cells[0].job_weight_share, cells[1].job_weight_share);
}

TEST(Sensitivity, SymmetricJobIsHalfWeight) {
  // T_c == T_w at (0.7, 0.7): flops / 11e12 == weight / 50e9 on NVLink.
  auto r = make_record("sym", A::AllReduceLocal, 8, 11e12, 0, 0, 50e9);
  const auto cells = efficiency_sensitivity(testutil::population({r}), pai_baseline(), {0.7}, {0.7});
  EXPECT_DOUBLE_EQ(cells[0].job_weight_share, 0.5);
}

TEST(Sensitivity, GcnLowComputeEfficiency) {
  auto gcn = builtin_corpus().at("gcn");
  gcn.arch = A::PsWorker;
  const auto cells = efficiency_sensitivity(testutil::population({gcn}), case_study_testbed(), {0.25}, {0.7});
  // Oracle: compute time scaled by 0.7/0.25, weight time unchanged.
  const auto t = oracle::times(gcn, case_study_testbed(), kEff);
  const double tc = (t.cb + t.mb) * 0.7 / 0.25;
  EXPECT_NEAR(cells[0].job_weight_share, t.weight / (t.data + tc + t.weight), 1e-12);
  EXPECT_NEAR(cells[0].job_weight_share, 0.904, 1e-3);
}

TEST(Sensitivity, GridOutsideUnitIntervalRejected) {
  EXPECT_THROW(efficiency_sensitivity(builtin_corpus(), pai_baseline(), {0.0}, {0.7}), DomainError);
  EXPECT_THROW(efficiency_sensitivity(builtin_corpus(), pai_baseline(), {0.7}, {1.5}), DomainError);
}

TEST(Overlap, WeightBoundJobHitsPathRatio) {
  auto weight_bound = make_record("w", A::PsWorker, 8, 1e9, 1e8, 1e3, 10e9);
  auto compute_bound = make_record("c", A::PsWorker, 8, 50e12, 1e9, 1e3, 1e6);
  const auto cmp = overlap_comparison(testutil::population({weight_bound, compute_bound}), pai_baseline(), kEff,
                                      A::AllReduceLocal);
  const auto proj = population_speedup_profile(testutil::population({weight_bound, compute_bound}),
                                               A::AllReduceLocal, pai_baseline(), kEff, OverlapMode::IdealOverlap);
  EXPECT_NEAR(*proj.results[0].step_speedup, 21.0, 21.0 * 1e-9);
  EXPECT_EQ(*proj.results[1].step_speedup, 1.0);
  EXPECT_EQ(cmp.ideal.fraction_at_path_ratio, 0.5);
  EXPECT_EQ(cmp.none.fraction_at_path_ratio, 0.0);
  EXPECT_EQ(cmp.target, A::AllReduceLocal);
}

TEST(Overlap, EmptyPopulationRejected) {
  EXPECT_THROW(overlap_comparison(JobPopulation{}, pai_baseline(), kEff, A::AllReduceLocal), DomainError);
}
