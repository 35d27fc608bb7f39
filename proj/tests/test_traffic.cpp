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

#include "mcast/traffic.hpp"

using namespace mcast;

TEST(Traffic, RandomScenariosAreClean) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto cfg = random_scenario_config(seed);
    const auto r = run_scenario(cfg, seed);
    ASSERT_TRUE(r.quiesced) << "seed " << seed;
    EXPECT_EQ(r.completed, r.issued);
    EXPECT_TRUE(r.violations.empty()) << "seed " << seed << ": " << to_json_line(r.violations.front());
  }
}

TEST(Traffic, HeavyMulticastOnSixteenPorts) {
  ScenarioConfig cfg;
  cfg.masters = 16;
  cfg.slaves = 16;
  cfg.mcast_prob = 0.9;
  cfg.txns_per_master = 32;
  cfg.w_fifo_depth = 1;
  const auto r = run_scenario(cfg, 7);
  EXPECT_TRUE(r.quiesced);
  EXPECT_TRUE(r.violations.empty());
}

TEST(Traffic, ScenarioMap) {
  const auto map = scenario_map(3);
  ASSERT_EQ(map.size(), 3u);
  EXPECT_EQ(map[2].start, kScenarioBase + 2 * kScenarioRegion);
  EXPECT_TRUE(map[2].multicast);
}
