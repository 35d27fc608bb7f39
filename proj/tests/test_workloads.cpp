/*
 * Copyright 2026 The mcast-xbar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "mcast/workloads.hpp"

using namespace mcast;

TEST(Amdahl, KnownValues) {
  EXPECT_NEAR(amdahl_fraction(16.2, 32), 0.9685, 5e-4);
  EXPECT_DOUBLE_EQ(amdahl_fraction(32, 32), 1.0);
  EXPECT_DOUBLE_EQ(amdahl_fraction(1, 32), 0.0);
  EXPECT_THROW(amdahl_fraction(2, 1), DomainError);
  EXPECT_THROW(amdahl_fraction(0.5, 8), DomainError);
  EXPECT_THROW(amdahl_fraction(9, 8), DomainError);
}

TEST(Modes, Names) {
  for (Mode m : {Mode::Unicast, Mode::SwMcast, Mode::HwMcast}) {
    EXPECT_EQ(mode_from_string(to_string(m)), m);
  }
  EXPECT_EQ(mode_from_string("hw"), Mode::HwMcast);
  EXPECT_THROW(mode_from_string("broadcast"), ConfigError);
}

TEST(Microbench, SingleClusterModesAgree) {
  const Topology t;
  const auto u = run_microbenchmark(t, Mode::Unicast, 1, 4096);
  const auto h = run_microbenchmark(t, Mode::HwMcast, 1, 4096);
  EXPECT_EQ(u.cycles, h.cycles);
  EXPECT_EQ(u.delivered, h.delivered);
}

TEST(Microbench, EveryModeDeliversTheSameBytes) {
  const Topology t;
  std::vector<std::uint64_t> want(32, 0);
  for (unsigned c = 0; c < 16; ++c) want[c] = 8192;
  for (Mode m : {Mode::Unicast, Mode::SwMcast, Mode::HwMcast}) {
    const auto rep = run_microbenchmark(t, m, 16, 8192);
    EXPECT_EQ(rep.delivered, want) << to_string(m);
    EXPECT_TRUE(rep.violations.empty()) << to_string(m);
    EXPECT_EQ(rep.error_responses, 0u);
  }
}

TEST(Microbench, RejectsUnsupportedPoints) {
  const Topology t;
  EXPECT_THROW(run_microbenchmark(t, Mode::HwMcast, 12, 4096), ConfigError);
  EXPECT_THROW(run_microbenchmark(t, Mode::SwMcast, 4, 4096), ConfigError);
  EXPECT_THROW(run_microbenchmark(t, Mode::Unicast, 33, 4096), ConfigError);
  EXPECT_THROW(run_microbenchmark(t, Mode::Unicast, 2, 0), ConfigError);
  EXPECT_THROW(run_microbenchmark(t, Mode::Unicast, 2, 1u << 20), ConfigError);
}

TEST(Microbench, HwCyclesGrowSlowlyWithClusters) {
  const Topology t;
  Cycle prev = 0;
  for (unsigned n : {2u, 4u, 8u, 16u, 32u}) {
    const auto hw = run_microbenchmark(t, Mode::HwMcast, n, 8192);
    const auto uni = run_microbenchmark(t, Mode::Unicast, n, 8192);
    EXPECT_GE(hw.cycles, prev);
    EXPECT_LT(hw.cycles, uni.cycles);
    prev = hw.cycles;
  }
}

TEST(Matmul, LlcBytesMatchClosedForm) {
  const Topology t;
  for (Mode m : {Mode::Unicast, Mode::SwMcast, Mode::HwMcast}) {
    MatmulSchedule s;
    s.variant = m;
    const auto rep = run_matmul(t, s);
    EXPECT_EQ(rep.llc_read_bytes, expected_llc_read_bytes(t, s)) << to_string(m);
    EXPECT_EQ(rep.llc_write_bytes, 256u * 256u * 8u);
    EXPECT_EQ(rep.flops, 2ull * 256 * 256 * 256);
    EXPECT_TRUE(rep.violations.empty());
  }
  MatmulSchedule s;
  EXPECT_EQ(expected_llc_read_bytes(t, s), 256u * 256 * 8 * 33);
  s.variant = Mode::HwMcast;
  EXPECT_EQ(expected_llc_read_bytes(t, s), 256u * 256 * 8 * 2);
}

TEST(Matmul, SingleClusterVariantsCoincide) {
  Topology t;
  t.num_groups = 1;
  t.clusters_per_group = 1;
  MatmulSchedule s;
  s.m = 16;
  s.n = 64;
  s.k = 64;
  s.variant = Mode::Unicast;
  const auto base = run_matmul(t, s);
  s.variant = Mode::HwMcast;
  const auto hw = run_matmul(t, s);
  EXPECT_EQ(base.cycles, hw.cycles);
  EXPECT_EQ(base.llc_read_bytes, hw.llc_read_bytes);
}

TEST(Matmul, ComputeBoundWhenFlopsAreScarce) {
  Topology t;
  t.flops_per_cycle = 1;
  MatmulSchedule s;
  s.variant = Mode::Unicast;
  const auto rep = run_matmul(t, s);
  const auto rp = roofline_point(rep, static_cast<double>(t.peak_flops_per_cycle()), t.beat_bytes);
  EXPECT_DOUBLE_EQ(rp.attainable_gflops, 32.0);
  EXPECT_GT(rp.fraction, 0.85);
  EXPECT_LE(rp.fraction, 1.0);
}

TEST(Matmul, RejectsSchedulesThatDoNotFit) {
  const Topology t;
  MatmulSchedule s;
  s.m = 100;
  EXPECT_THROW(run_matmul(t, s), ConfigError);
  s = MatmulSchedule{};
  s.k = 4096;
  EXPECT_THROW(run_matmul(t, s), ConfigError);
}

TEST(Roofline, Point) {
  TrafficReport rep;
  rep.flops = 1000;
  rep.llc_read_bytes = 100;
  rep.cycles = 50;
  const auto p = roofline_point(rep, 512, 64);
  EXPECT_DOUBLE_EQ(p.oi, 10);
  EXPECT_DOUBLE_EQ(p.attainable_gflops, 512);
  EXPECT_DOUBLE_EQ(p.achieved_gflops, 20);
  rep.llc_read_bytes = 0;
  EXPECT_THROW(roofline_point(rep, 512, 64), DomainError);
}

TEST(Results, CsvAndJson) {
  ResultRow r;
  r.kernel = "microbench";
  r.mode = Mode::SwMcast;
  r.clusters = 2;
  r.bytes = 2048;
  std::ostringstream os;
  write_csv(os, {r});
  EXPECT_EQ(os.str(),
            "kernel,mode,clusters,bytes,cycles,oi,gflops,speedup,amdahl,roofline_fraction\n"
            "microbench,sw_mcast,2,2048,NA,NA,NA,NA,NA,NA\n");
  r.cycles = 100;
  r.speedup = 1.5;
  const auto j = to_json(r);
  EXPECT_EQ(j["cycles"], 100);
  EXPECT_TRUE(j["oi"].is_null());
  EXPECT_DOUBLE_EQ(j["speedup"].get<double>(), 1.5);
}

TEST(Sweep, SmallSweepIsDeterministic) {
  const Topology t;
  MicrobenchSweep sw;
  sw.clusters = {4, 8};
  sw.bytes = {2048};
  const auto a = run_microbench_sweep(t, sw);
  const auto b = run_microbench_sweep(t, sw);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].cycles, b[i].cycles);
    EXPECT_EQ(a[i].violations, 0u);
  }
  EXPECT_FALSE(a[2].cycles);  // sw_mcast with a single group
  EXPECT_TRUE(a[3].cycles);
}
