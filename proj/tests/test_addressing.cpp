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

#include "mcast/addressing.hpp"
#include "support/oracle.hpp"

using namespace mcast;

TEST(IfeToMfe, ClusterRegion) {
  const AddrSet m = ife_to_mfe({0x0100'0000, 0x0104'0000, 0, true});
  EXPECT_EQ(m.base, 0x0100'0000u);
  EXPECT_EQ(m.mask, 0x3FFFFu);
  // Same members as the interval.
  const auto list = enumerate(m, 1u << 18);
  ASSERT_EQ(list.size(), 0x40000u);
  EXPECT_EQ(list.front(), 0x0100'0000u);
  EXPECT_EQ(list.back(), 0x0103'FFFFu);
}

TEST(IfeToMfe, SingleAddress) {
  EXPECT_EQ(ife_to_mfe({0, 1, 0, true}), (AddrSet{0, 0}));
}

TEST(IfeToMfe, RejectsBadRegions) {
  EXPECT_THROW(ife_to_mfe({0x1000, 0x2800, 0, true}), EncodingError);
  EXPECT_THROW(ife_to_mfe({0x1000, 0x3000, 0, true}), EncodingError);  // misaligned
  EXPECT_THROW(ife_to_mfe({0x2000, 0x2000, 0, true}), EncodingError);
}

TEST(Matches, Examples) {
  const AddrSet all32{0x0100'0000, 0x7C'0000};
  EXPECT_TRUE(matches(all32, ife_to_mfe({0x0104'0000, 0x0108'0000, 1, true})));
  EXPECT_FALSE(matches(all32, ife_to_mfe({0x0180'0000, 0x0184'0000, 32, true})));
  EXPECT_FALSE(matches(AddrSet{0x10, 0}, AddrSet{0x20, 0}));
  EXPECT_TRUE(matches(AddrSet{0x10, 0}, AddrSet{0x10, 0}));
}

TEST(Intersect, PicksRuleBitsUnderTheRequestMask) {
  // Clusters 0..31, restricted to cluster 5's region.
  const AddrSet req{0x0100'1000, 0x7C'0000};
  const AddrSet rule = ife_to_mfe({0x0114'0000, 0x0118'0000, 5, true});
  EXPECT_EQ(intersect(req, rule), (AddrSet{0x0114'1000, 0}));
  EXPECT_THROW(intersect(AddrSet{1, 0}, AddrSet{2, 0}), std::logic_error);
}

TEST(Cardinality, PowersOfTwo) {
  EXPECT_EQ(cardinality(AddrSet{0, 0}), 1u);
  EXPECT_EQ(cardinality(AddrSet{0, 0x7C'0000}), 32u);
  EXPECT_THROW(cardinality(AddrSet{0, ~std::uint64_t{0}}), CapacityError);
}

TEST(Enumerate, FrozenOracle) {
  // Hand-checked member list.
  const auto got = enumerate(AddrSet{0b1000'0001, 0b0101'0000}, 16);
  const std::vector<Addr> want{0b1000'0001, 0b1001'0001, 0b1100'0001, 0b1101'0001};
  EXPECT_EQ(got, want);
  EXPECT_THROW(enumerate(AddrSet{0, 0xFF}, 16), CapacityError);
}

TEST(AlignedBlocks, CoverIntervalExactly) {
  const auto blocks = aligned_blocks(0x1000, 0x2800);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0], (AddrSet{0x1000, 0xFFF}));
  EXPECT_EQ(blocks[1], (AddrSet{0x2000, 0x7FF}));
}

TEST(Decode, BroadcastOverOccamyMap) {
  AddressMap map;
  for (unsigned c = 0; c < 32; ++c) {
    const Addr a = 0x0100'0000 + c * 0x4'0000;
    map.push_back({a, a + 0x4'0000, c, true});
  }
  const auto d = decode(AddrSet{0x0100'0000, 0x7C'0000}, map);
  EXPECT_EQ(d.select.size(), 32u);
  EXPECT_FALSE(d.residue);
  for (unsigned c = 0; c < 32; ++c) {
    EXPECT_EQ(d.per_slave.at(c), (AddrSet{0x0100'0000 + c * 0x4'0000, 0}));
  }
  const auto one = decode(AddrSet{0x0104'0040, 0}, map);
  EXPECT_EQ(one.select, PortSet{1});
  const auto none = decode(AddrSet{0x4000'0000, 0}, map);
  EXPECT_TRUE(none.decode_error());
  EXPECT_TRUE(none.residue);
}

TEST(Decode, StraddlingSetFlagsResidue) {
  const AddressMap map{{0x0, 0x100, 0, true}};
  const auto d = decode(AddrSet{0x0, 0x100}, map);
  EXPECT_EQ(d.select, PortSet{0});
  EXPECT_TRUE(d.residue);
}

TEST(Decode, MulticastIntoNonMulticastRuleFails) {
  const AddressMap map{{0x0, 0x100, 0, true}, {0x100, 0x180, 1, false}};
  EXPECT_THROW(decode(AddrSet{0x0, 0x100}, map), DecodeError);
  EXPECT_NO_THROW(decode(AddrSet{0x104, 0}, map));
}

TEST(AddressMap, ValidateRejectsOverlap) {
  const AddressMap map{{0x0, 0x100, 0, true}, {0x80, 0x180, 1, false}};
  EXPECT_THROW(validate_address_map(map), ConfigError);
}

TEST(AddressMap, TextRoundTrip) {
  const AddressMap map{{0x0100'0000, 0x0104'0000, 0, true}, {0x7000'0000, 0x7040'0000, 32, false}};
  std::stringstream ss;
  write_address_map(ss, map);
  const auto back = parse_address_map(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].slave, 32u);
  EXPECT_EQ(back[1].end, 0x7040'0000u);
  EXPECT_FALSE(back[1].multicast);
  std::istringstream bad("0x0 0x100 zz 1\n");
  EXPECT_THROW(parse_address_map(bad), ParseError);
}

TEST(Oracle, AllPairsSixBits) {
  oracle::Tally t;
  oracle::check_pairs<6>(t);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
  EXPECT_GE(t.cases, 729u * 729u);
}

TEST(Oracle, RequestsAgainstRegionsEightBits) {
  oracle::Tally t;
  oracle::check_requests_vs_regions<8>(t);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
  EXPECT_EQ(t.cases, 6561u * 511u);
}

TEST(Oracle, DecodeEightBits) {
  for (const auto& map : {oracle::uniform_map(8), oracle::mixed_map(8)}) {
    oracle::Tally t;
    oracle::check_decode<8>(t, map);
    EXPECT_EQ(t.failures, 0u) << t.first_failure;
    EXPECT_EQ(t.cases, 6561u);
  }
}
