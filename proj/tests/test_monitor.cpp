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

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mcast/monitor.hpp"

using namespace mcast;

namespace {

std::vector<Violation> check_file(const std::string& name) {
  std::ifstream in(std::string(MCAST_TEST_DATA) + "/" + name);
  EXPECT_TRUE(in) << name;
  return check_trace(in);
}

bool has(const std::vector<Violation>& vs, ViolationKind k) {
  for (const auto& v : vs) {
    if (v.kind == k) return true;
  }
  return false;
}

}  // namespace

TEST(Monitor, CleanTracePasses) {
  const auto vs = check_file("clean.trace");
  EXPECT_TRUE(vs.empty()) << (vs.empty() ? "" : to_json_line(vs.front()));
}

TEST(Monitor, InterleavedWIsAnOrderViolation) {
  const auto vs = check_file("interleaved_w.trace");
  ASSERT_FALSE(vs.empty());
  EXPECT_EQ(vs.front().kind, ViolationKind::Order);
  EXPECT_EQ(vs.front().cycle, 3u);
  EXPECT_EQ(vs.front().master, 1u);
}

TEST(Monitor, DoubleForwardIsAConservationViolation) {
  const auto vs = check_file("double_forward.trace");
  ASSERT_FALSE(vs.empty());
  EXPECT_EQ(vs.front().kind, ViolationKind::Conservation);
  EXPECT_EQ(vs.front().id, 3u);
}

TEST(Monitor, SplitAcquisition) {
  const auto vs = check_file("split_acquisition.trace");
  ASSERT_FALSE(vs.empty());
  EXPECT_EQ(vs.front().kind, ViolationKind::Acquisition);
  EXPECT_EQ(vs.front().master, 0u);
  EXPECT_EQ(vs.front().cycle, 2u);
}

TEST(Monitor, StalledRequestStarves) {
  const auto vs = check_file("stalled.trace");
  EXPECT_TRUE(has(vs, ViolationKind::Starvation));
  EXPECT_TRUE(has(vs, ViolationKind::Conservation));
}

TEST(Monitor, MissingBAndWrongLastFlag) {
  Monitor mon;
  for (const char* line : {
           "0 REQ 0 - 1 addr=0x0 mask=0x0 beats=2 mcast=0 dests=0",
           "0 AWS 0 0 1 addr=0x0 mask=0x0 beats=2 mcast=0",
           "0 AW 0 - 1 addr=0x0 mask=0x0 beats=2 mcast=0 dests=0",
           "1 W 0 0 0 bytes=64 last=1",
       }) {
    mon.observe(parse_record(line));
  }
  mon.finish(5);
  ASSERT_EQ(mon.violations().size(), 2u);
  EXPECT_EQ(mon.violations()[0].kind, ViolationKind::Conservation);
  EXPECT_NE(mon.violations()[1].narrative.find("no B response"), std::string::npos);
}

TEST(Monitor, ViolationJsonLine) {
  const Violation v{ViolationKind::Order, 42, 7, 3u, "slave 1 interleaved"};
  const auto j = nlohmann::json::parse(to_json_line(v));
  EXPECT_EQ(j["kind"], "OrderViolation");
  EXPECT_EQ(j["cycle"], 42);
  EXPECT_EQ(j["id"], 7);
  EXPECT_EQ(j["master"], 3);
  EXPECT_EQ(j["narrative"], "slave 1 interleaved");
  const Violation anon{ViolationKind::Starvation, 1, 0, std::nullopt, ""};
  EXPECT_TRUE(nlohmann::json::parse(to_json_line(anon))["master"].is_null());
}

TEST(Monitor, WatchdogBoundScalesWithQueuedWork) {
  Monitor mon;
  mon.observe(parse_record("0 REQ 0 - 1 addr=0x0 mask=0x0 beats=64 mcast=0 dests=0"));
  mon.tick(10 * (256 + 64 + 8));
  EXPECT_TRUE(mon.clean());
  mon.tick(10 * (256 + 64 + 8) + 1);
  EXPECT_FALSE(mon.clean());
  EXPECT_EQ(mon.violations().front().kind, ViolationKind::Starvation);
}
