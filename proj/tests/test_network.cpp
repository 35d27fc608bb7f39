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
#include <string>

#include "mcast/network.hpp"
#include "mcast/workloads.hpp"

using namespace mcast;

namespace {

const LinkCount& link(const std::vector<LinkCount>& links, const std::string& name) {
  for (const auto& l : links) {
    if (l.name == name) return l;
  }
  throw std::out_of_range(name);
}

}  // namespace

TEST(Topology, DefaultConfigFile) {
  const Topology t = load_topology(std::string(MCAST_TEST_DATA) + "/../../configs/occamy.cfg");
  EXPECT_EQ(t.num_clusters(), 32u);
  EXPECT_EQ(t.cluster_addr(31), 0x017C'0000u);
  EXPECT_EQ(t.llc_one_way(), 5u);
  EXPECT_EQ(t.peak_flops_per_cycle(), 512u);
  EXPECT_EQ(t.cluster_at(0x0104'0010), 1u);
  EXPECT_FALSE(t.cluster_at(0x7000'0000));
}

TEST(Topology, WriteParseRoundTrip) {
  Topology t;
  t.num_groups = 2;
  t.sw_overhead = 77;
  t.multicast = false;
  std::stringstream ss;
  t.write(ss);
  const Topology back = parse_topology(ss);
  EXPECT_EQ(back.num_groups, 2u);
  EXPECT_EQ(back.sw_overhead, 77u);
  EXPECT_EQ(back.cluster_stride, t.cluster_stride);
  EXPECT_FALSE(back.multicast);
}

TEST(Topology, RejectsBadConfigs) {
  std::istringstream stride("cluster_stride = 0x30000\n");
  EXPECT_THROW(parse_topology(stride), ConfigError);
  std::istringstream unknown("cluster_count = 4\n");
  EXPECT_THROW(parse_topology(unknown), ConfigError);
  std::istringstream junk("num_groups = four\n");
  EXPECT_THROW(parse_topology(junk), ConfigError);
  std::istringstream odd("clusters_per_group = 3\n");
  EXPECT_THROW(parse_topology(odd), ConfigError);
  std::istringstream odd_unicast("clusters_per_group = 3\nmulticast = false\n");
  EXPECT_NO_THROW(parse_topology(odd_unicast));
  EXPECT_THROW(load_topology("/nonexistent/occamy.cfg"), ConfigError);
  Topology t;
  EXPECT_THROW(t.cluster_set(2, 4), ConfigError);
  EXPECT_THROW(t.cluster_set(0, 3), ConfigError);
}

TEST(Network, CrossbarShapes) {
  const Topology t;
  const XbarConfig g = group_xbar_config(t, 3);
  EXPECT_EQ(g.num_masters, 5u);
  EXPECT_EQ(g.num_slaves, 5u);
  EXPECT_EQ(g.default_port, 4u);
  EXPECT_FALSE(g.connected(4, 4));
  EXPECT_TRUE(g.connected(0, 4));
  const XbarConfig top = top_xbar_config(t);
  EXPECT_EQ(top.num_masters, 8u);
  EXPECT_EQ(top.num_slaves, 9u);
  EXPECT_FALSE(top.connected(2, 2));
  EXPECT_TRUE(top.connected(2, 8));
  EXPECT_NO_THROW(System{t});
}

TEST(Network, RoutePathBroadcast) {
  const Topology t;
  const auto p = route_path(t, 0, t.cluster_set(0, 32));
  EXPECT_EQ(p.clusters, PortSet::first_n(32));
  EXPECT_FALSE(p.llc);
  EXPECT_FALSE(p.error);
  ASSERT_EQ(p.hops.size(), 9u);
  EXPECT_EQ(p.hops[0].xbar, "group0");
  EXPECT_EQ(p.hops[0].dests, (PortSet{0, 1, 2, 3, 4}));
  EXPECT_EQ(p.hops[1].xbar, "top");
  EXPECT_EQ(p.hops[1].dests, (PortSet{1, 2, 3, 4, 5, 6, 7}));
}

TEST(Network, RoutePathExamples) {
  const Topology t;
  auto p = route_path(t, 0, AddrSet::single(t.cluster_addr(5)));
  EXPECT_EQ(p.clusters, PortSet{5});
  EXPECT_EQ(p.hops.size(), 3u);
  p = route_path(t, 5, t.cluster_set(4, 4));
  EXPECT_EQ(p.clusters, (PortSet{4, 5, 6, 7}));
  EXPECT_EQ(p.hops.size(), 1u);
  p = route_path(t, 9, AddrSet::single(t.llc_base + 0x40));
  EXPECT_TRUE(p.llc);
  EXPECT_TRUE(p.clusters.empty());
  p = route_path(t, 9, AddrSet::single(0x4000'0000));
  EXPECT_TRUE(p.error);
  EXPECT_THROW(route_path(t, 32, AddrSet{}), ConfigError);
}

TEST(Network, HierarchicalDecodeMatchesFlatDecode) {
  const Topology t;
  const AddressMap flat = t.flat_map();
  for (unsigned count = 1; count <= 32; count *= 2) {
    for (unsigned first = 0; first < 32; first += count) {
      const AddrSet set = t.cluster_set(first, count, 0x80);
      const auto d = decode(set, flat);
      for (unsigned src = 0; src < 32; ++src) {
        const auto p = route_path(t, src, set);
        EXPECT_EQ(p.clusters, d.select) << "src " << src << " set " << set;
        EXPECT_FALSE(p.error);
      }
    }
  }
}

TEST(Network, MulticastCrossesEveryLinkOnce) {
  Topology t;
  RunOptions o;
  const auto rep = run_microbenchmark(t, Mode::HwMcast, 32, 4096, o);
  EXPECT_TRUE(rep.violations.empty());
  for (unsigned c = 0; c < 32; ++c) {
    const auto& in = link(rep.links, "cluster" + std::to_string(c) + ".in");
    EXPECT_EQ(in.aw, 1u) << c;
    EXPECT_EQ(in.w, 64u) << c;
    EXPECT_EQ(rep.delivered[c], 4096u);
  }
  EXPECT_EQ(link(rep.links, "group0.up").w, 64u);
  EXPECT_EQ(link(rep.links, "group0.down").w, 0u);
  for (unsigned g = 1; g < 8; ++g) {
    EXPECT_EQ(link(rep.links, "group" + std::to_string(g) + ".down").w, 64u);
    EXPECT_EQ(link(rep.links, "group" + std::to_string(g) + ".up").w, 0u);
  }
  EXPECT_EQ(link(rep.links, "cluster0.out").w, 64u);
  EXPECT_EQ(link(rep.links, "llc.in").w, 0u);
}

TEST(Dma, RejectsBadDescriptors) {
  const Topology t;
  System sys(t);
  auto& dma = sys.dma(0);
  EXPECT_THROW(dma.submit(Descriptor{Descriptor::Source::L1, AddrSet::single(t.cluster_addr(1)), 0, {}}, 0),
               DmaError);
  EXPECT_THROW(dma.submit(Descriptor{Descriptor::Source::L1, AddrSet{t.llc_base, 0x1000}, 64, {}}, 0),
               DmaError);
  EXPECT_THROW(
      dma.submit(Descriptor{Descriptor::Source::L1, t.cluster_set(0, 2, 0x3F000), 0x2000, {}}, 0),
      DmaError);
  EXPECT_THROW(dma.submit(Descriptor{Descriptor::Source::L1,
                                     AddrSet::of(t.cluster_addr(0), 0x7C'0000 | 0x8000'0000), 64, {}},
                          0),
               DmaError);
}

TEST(Dma, SplitsIntoFourKibBursts) {
  const Topology t;
  System sys(t);
  Cycle done_at = 0;
  sys.dma(0).submit(Descriptor{Descriptor::Source::Llc, AddrSet::single(t.cluster_addr(5)), 32768,
                               [&](Cycle c) { done_at = c; }},
                    0);
  sys.run([&] { return done_at != 0; }, [](Cycle) {});
  sys.finish();
  EXPECT_TRUE(sys.violations().empty());
  EXPECT_EQ(sys.dma(0).bursts(), 8u);
  EXPECT_EQ(sys.llc_read_bytes(), 32768u);
  const auto links = sys.link_counts();
  EXPECT_EQ(link(links, "cluster5.in").aw, 8u);
  EXPECT_EQ(link(links, "cluster5.in").w, 512u);
  EXPECT_EQ(sys.cluster(5).l1().bytes_written(), 32768u);
  // Software overhead plus at least one beat per cycle.
  EXPECT_GT(done_at, t.sw_overhead + 512u);
}

TEST(Dma, WriteToLlcGoesOverTheNetwork) {
  const Topology t;
  System sys(t);
  bool done = false;
  sys.dma(6).submit(Descriptor{Descriptor::Source::L1, AddrSet::single(t.llc_base), 1024,
                               [&](Cycle) { done = true; }},
                    0);
  sys.run([&] { return done; }, [](Cycle) {});
  sys.finish();
  EXPECT_EQ(sys.llc_write_bytes(), 1024u);
  EXPECT_EQ(link(sys.link_counts(), "llc.in").w, 16u);
  EXPECT_TRUE(sys.violations().empty());
}

TEST(Network, SingleGroupSystem) {
  Topology t;
  t.num_groups = 1;
  for (Mode m : {Mode::Unicast, Mode::HwMcast}) {
    const auto rep = run_microbenchmark(t, m, 4, 8192);
    EXPECT_TRUE(rep.violations.empty());
    for (unsigned c = 0; c < 4; ++c) EXPECT_EQ(rep.delivered[c], 8192u);
  }
  EXPECT_THROW(run_microbenchmark(t, Mode::SwMcast, 4, 8192), ConfigError);
}
