#include <gtest/gtest.h>

#include "dlcost/dlcost.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace dlcost;
using testutil::make_record;

namespace {

const EfficiencyModel kEff;

std::vector<Medium> path(ArchitectureKind a) {
  auto p = weight_medium_path(a);
  return {p.begin(), p.end()};
}

}  // namespace

TEST(MediumPath, PerArchitecture) {
  using M = Medium;
  EXPECT_EQ(path(ArchitectureKind::OneWorkerOneGpu), std::vector<M>{});
  EXPECT_EQ(path(ArchitectureKind::OneWorkerNGpu), (std::vector<M>{M::PCIe}));
  EXPECT_EQ(path(ArchitectureKind::PsWorker), (std::vector<M>{M::Ethernet, M::PCIe}));
  EXPECT_EQ(path(ArchitectureKind::AllReduceLocal), (std::vector<M>{M::NVLink}));
  EXPECT_EQ(path(ArchitectureKind::AllReduceCluster), (std::vector<M>{M::Ethernet, M::NVLink}));
  EXPECT_EQ(path(ArchitectureKind::Pearl), (std::vector<M>{M::NVLink}));
}

TEST(DataIo, SpeechSingleGpu) {
  const auto speech = builtin_corpus().at("speech");
  EXPECT_NEAR(data_io_time(speech, pai_baseline(), kEff), 804e6 / 7e9, 1e-15);
  EXPECT_NEAR(data_io_time(speech, pai_baseline(), kEff), 0.11486, 1e-5);
}

TEST(DataIo, ContentionOnSharedServer) {
  auto r = make_record("s", ArchitectureKind::AllReduceLocal, 8, 0, 0, 804e6, 0);
  EXPECT_NEAR(data_io_time(r, pai_baseline(), kEff), 0.91886, 1e-5);
  r.arch = ArchitectureKind::OneWorkerNGpu;
  r.num_cnodes = 4;
  EXPECT_NEAR(data_io_time(r, pai_baseline(), kEff), 804e6 / (7e9 / 4), 1e-12);
  r.arch = ArchitectureKind::PsWorker;
  r.num_cnodes = 64;
  EXPECT_NEAR(data_io_time(r, pai_baseline(), kEff), 804e6 / 7e9, 1e-12);
}

TEST(DataIo, ZeroInput) {
  auto r = make_record("z", ArchitectureKind::PsWorker, 8, 1e9, 1e9, 0, 1e6);
  EXPECT_EQ(data_io_time(r, pai_baseline(), kEff), 0.0);
}

TEST(Compute, ResNet50OnTestbed) {
  const auto r = builtin_corpus().at("resnet50");
  const auto c = compute_time(r, case_study_testbed(), kEff);
  EXPECT_NEAR(c.compute_bound, 0.1486, 1e-4);
  EXPECT_NEAR(c.compute_bound, 1.56e12 / (1.5e13 * 0.7), 1e-15);
  EXPECT_NEAR(c.memory_bound, 0.04557, 1e-5);
}

TEST(Compute, ZeroDemand) {
  auto r = make_record("z", ArchitectureKind::PsWorker, 2, 0, 0, 0, 0);
  const auto c = compute_time(r, pai_baseline(), kEff);
  EXPECT_EQ(c.compute_bound, 0.0);
  EXPECT_EQ(c.memory_bound, 0.0);
}

TEST(Weight, PsWorkerSerialPath) {
  auto r = testutil::weight_only(ArchitectureKind::PsWorker, 8, 1e9);
  const auto w = weight_time(r, pai_baseline(), kEff);
  ASSERT_EQ(w.per_medium.size(), 2u);
  EXPECT_EQ(w.per_medium[0].first, Medium::Ethernet);
  EXPECT_NEAR(w.per_medium[0].second, 0.45714, 1e-5);
  EXPECT_NEAR(w.per_medium[1].second, 0.14286, 1e-5);
  EXPECT_NEAR(w.total, 0.6, 1e-12);
}

TEST(Weight, AllReduceLocalAndRatio) {
  auto r = testutil::weight_only(ArchitectureKind::PsWorker, 8, 1e9);
  const double ps = weight_time(r, pai_baseline(), kEff).total;
  const double ar = weight_time(r, pai_baseline(), kEff, ArchitectureKind::AllReduceLocal).total;
  EXPECT_NEAR(ar, 0.028571, 1e-6);
  EXPECT_NEAR(ps / ar, 21.0, 21.0 * 1e-9);
}

TEST(Weight, SingleGpuHasNoWeightTime) {
  auto r = make_record("s", ArchitectureKind::OneWorkerOneGpu, 1, 1e9, 1e9, 1e6, 0);
  const auto w = weight_time(r, pai_baseline(), kEff);
  EXPECT_TRUE(w.per_medium.empty());
  EXPECT_EQ(w.total, 0.0);
}

TEST(Breakdown, GcnUnderPsWorkerIsWeightDominated) {
  auto gcn = builtin_corpus().at("gcn");
  gcn.arch = ArchitectureKind::PsWorker;
  const auto b = breakdown(gcn, case_study_testbed(), kEff);
  EXPECT_NEAR(b.shares.weight, 0.96, 0.01);
  const auto t = oracle::times(gcn, case_study_testbed(), kEff);
  EXPECT_NEAR(b.shares.weight, t.weight / t.sum(), 1e-12);
}

TEST(Breakdown, OverlapModes) {
  // T_d = 0.1, T_c = 0.3, T_w = 0.6 with unit rates.
  HardwareProfile hw{1.0, 1.0, 1.0, 1.0, 1.0, 1e18};
  auto r = make_record("x", ArchitectureKind::AllReduceCluster, 4, 0.3, 0.0, 0.1, 0.3);
  EfficiencyModel one = EfficiencyModel::uniform(1.0);
  const auto none = breakdown(r, hw, one, OverlapMode::NoOverlap);
  const auto ideal = breakdown(r, hw, one, OverlapMode::IdealOverlap);
  EXPECT_DOUBLE_EQ(none.t_weight, 0.6);
  EXPECT_DOUBLE_EQ(none.t_total, 1.0);
  EXPECT_DOUBLE_EQ(ideal.t_total, 0.6);
  // Shares use the component sum in both modes.
  EXPECT_EQ(none.shares, ideal.shares);
  EXPECT_DOUBLE_EQ(ideal.shares.weight, 0.6);
}

TEST(Breakdown, AllZeroRecordFlagsShares) {
  auto r = make_record("z", ArchitectureKind::PsWorker, 2, 0, 0, 0, 0);
  const auto b = breakdown(r, pai_baseline(), kEff);
  EXPECT_EQ(b.t_total, 0.0);
  EXPECT_FALSE(b.shares_defined);
  EXPECT_EQ(b.shares, Shares{});
}

TEST(Breakdown, PerMediumSumsToWeight) {
  auto r = make_record("c", ArchitectureKind::AllReduceCluster, 16, 1e12, 1e10, 1e7, 2e9);
  const auto b = breakdown(r, pai_baseline(), kEff);
  EXPECT_DOUBLE_EQ(b.weight_on(Medium::Ethernet) + b.weight_on(Medium::NVLink), b.t_weight);
  EXPECT_EQ(b.weight_on(Medium::PCIe), 0.0);
}

TEST(Throughput, Examples) {
  auto a = make_record("a", ArchitectureKind::OneWorkerOneGpu, 1, 1, 1, 1, 0, 1, 0, 64);
  EXPECT_DOUBLE_EQ(throughput(a, 1.0), 64.0);
  auto b = make_record("b", ArchitectureKind::PsWorker, 32, 1, 1, 1, 1, 1, 0, 2048);
  EXPECT_NEAR(throughput(b, 0.264), 248242.4242, 1e-3);
  EXPECT_THROW(throughput(a, 0.0), DomainError);
  EXPECT_THROW(throughput(a, -1.0), DomainError);
}

TEST(ValidationGap, Examples) {
  EXPECT_NEAR(validation_gap(0.149, 0.126), 0.1825, 1e-3);
  EXPECT_EQ(validation_gap(1.0, 1.0), 0.0);
  EXPECT_EQ(validation_gap(0.5, 1.0), -0.5);
  EXPECT_THROW(validation_gap(1.0, 0.0), DomainError);
  EXPECT_THROW(validation_gap(1.0, -2.0), DomainError);
}

TEST(Breakdown, MatchesOracleOnCorpus) {
  for (const auto& hw : {pai_baseline(), case_study_testbed()}) {
    for (const auto& r : builtin_corpus().records) {
      const auto b = breakdown(r, hw, kEff);
      const auto t = oracle::times(r, hw, kEff);
      EXPECT_NEAR(b.t_data, t.data, 1e-15 + 1e-12 * t.data) << r.job_id;
      EXPECT_NEAR(b.t_compute_bound, t.cb, 1e-12 * t.cb) << r.job_id;
      EXPECT_NEAR(b.t_memory_bound, t.mb, 1e-12 * t.mb) << r.job_id;
      EXPECT_NEAR(b.t_weight, t.weight, 1e-12 * t.weight) << r.job_id;
      EXPECT_NEAR(b.t_total, t.sum(), 1e-12 * t.sum()) << r.job_id;
    }
  }
}
