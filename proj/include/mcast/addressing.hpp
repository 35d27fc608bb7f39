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

/**
 * @file addressing.hpp
 * @brief Mask-form multi-address encoding and address-map decode.
 *
 * An AddrSet is a base address plus a don't-care mask: every 1 bit in the
 * mask can take either value, so n mask bits name 2^n addresses. Address
 * rules are given in interval form [start, end); multicast-targetable rules
 * must be power-of-two sized and aligned so they convert losslessly to mask
 * form. Decoding a request against a map yields the set of slave ports that
 * hold at least one destination together with the subset falling in each.
 */

#ifndef MCAST_ADDRESSING_HPP
#define MCAST_ADDRESSING_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcast/errors.hpp"
#include "mcast/port_set.hpp"

namespace mcast {

using Addr = std::uint64_t;

/// Set of addresses in mask form. Canonical: masked bits of base are zero.
struct AddrSet {
  Addr base = 0;
  std::uint64_t mask = 0;

  /// Builds a canonical set, clearing the masked bits of `base`.
  static constexpr AddrSet of(Addr base, std::uint64_t mask) {
    return AddrSet{base & ~mask, mask};
  }
  static constexpr AddrSet single(Addr a) { return AddrSet{a, 0}; }

  constexpr bool canonical() const { return (base & mask) == 0; }
  constexpr bool is_multicast() const { return mask != 0; }
  constexpr bool contains(Addr a) const { return ((a ^ base) & ~mask) == 0; }
  constexpr Addr lowest() const { return base; }
  constexpr Addr highest() const { return base | mask; }

  friend constexpr bool operator==(const AddrSet&, const AddrSet&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const AddrSet& s) {
  std::ostringstream tmp;
  tmp << std::hex << "{0x" << s.base << "/0x" << s.mask << "}";
  return os << tmp.str();
}

constexpr bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// Interval-form address rule mapping [start, end) to a slave port.
struct AddressRule {
  Addr start = 0;
  Addr end = 0;
  unsigned slave = 0;
  bool multicast = false;

  constexpr std::uint64_t size() const { return end - start; }
  constexpr bool contains(Addr a) const { return a >= start && a < end; }

  friend constexpr bool operator==(const AddressRule&, const AddressRule&) = default;
};

using AddressMap = std::vector<AddressRule>;

/// Converts a power-of-two sized, size-aligned interval to mask form.
inline AddrSet ife_to_mfe(const AddressRule& rule) {
  if (rule.end <= rule.start) {
    throw EncodingError("empty interval");
  }
  const std::uint64_t size = rule.size();
  if (!is_power_of_two(size)) {
    throw EncodingError("region size is not a power of two");
  }
  if (rule.start % size != 0) {
    throw EncodingError("region start is not aligned to its size");
  }
  return AddrSet{rule.start, rule.end - rule.start - 1};
}

/// True iff the two sets share at least one address.
constexpr bool matches(AddrSet req, AddrSet rule) {
  const std::uint64_t masked_bits = req.mask | rule.mask;
  const std::uint64_t match_bits = ~(req.base ^ rule.base);
  return (masked_bits | match_bits) == ~std::uint64_t{0};
}

/// Exact intersection of two matching sets.
inline AddrSet intersect(AddrSet req, AddrSet rule) {
  if (!matches(req, rule)) {
    throw std::logic_error("intersect called on disjoint address sets");
  }
  const std::uint64_t mask = req.mask & rule.mask;
  const Addr base = (~req.mask & req.base) | (req.mask & rule.base);
  return AddrSet::of(base, mask);
}

/// 2^popcount(mask). Sets with all 64 bits masked are not countable here.
inline std::uint64_t cardinality(AddrSet set) {
  const int n = std::popcount(set.mask);
  if (n >= 64) {
    throw CapacityError("set of 2^64 addresses does not fit a 64-bit count");
  }
  return std::uint64_t{1} << n;
}

namespace detail {

// Scatters the low bits of `value` into the 1-positions of `mask`.
constexpr std::uint64_t deposit_bits(std::uint64_t value, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    if (value & 1) out |= m & (~m + 1);
    value >>= 1;
  }
  return out;
}

}  // namespace detail

/// All members in ascending order.
inline std::vector<Addr> enumerate(AddrSet set, std::uint64_t limit) {
  const int n = std::popcount(set.mask);
  if (n >= 64 || (std::uint64_t{1} << n) > limit) {
    throw CapacityError("set has more than " + std::to_string(limit) + " members");
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<Addr> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    out.push_back(set.base | detail::deposit_bits(k, set.mask));
  }
  return out;
}

/// Splits [start, end) into maximal aligned power-of-two blocks.
inline std::vector<AddrSet> aligned_blocks(Addr start, Addr end) {
  std::vector<AddrSet> out;
  while (start < end) {
    std::uint64_t size = start == 0 ? (std::uint64_t{1} << 63) : (start & (~start + 1));
    while (size > end - start) size >>= 1;
    out.push_back(AddrSet{start, size - 1});
    start += size;
  }
  return out;
}

/// Result of decoding one request against an address map.
struct DecodeResult {
  PortSet select;
  std::map<unsigned, AddrSet> per_slave;
  // Part of the request lies outside every rule.
  bool residue = false;

  bool decode_error() const { return select.empty(); }
};

/// Checks that rules are well formed, multicast rules convertible, and
/// that no two rules overlap.
inline void validate_address_map(std::span<const AddressRule> map) {
  std::vector<AddressRule> sorted(map.begin(), map.end());
  for (const auto& r : sorted) {
    if (r.start >= r.end) throw EncodingError("rule with start >= end");
    if (r.slave >= PortSet::kMaxPorts) throw ConfigError("slave index out of range");
    if (r.multicast) (void)ife_to_mfe(r);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const AddressRule& a, const AddressRule& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].start < sorted[i - 1].end) {
      throw ConfigError("overlapping address rules");
    }
  }
}

/**
 * Decodes a request set against a non-overlapping address map.
 *
 * Multicast rules are matched in mask form. A multicast request touching a
 * rule that is not multicast-targetable is rejected with DecodeError, as is
 * one touching two rules of the same slave (the union would not be
 * representable as a single set). Addresses outside every rule set
 * `residue`; an empty select designates the decode-error route.
 */
inline DecodeResult decode(AddrSet req, std::span<const AddressRule> map) {
  DecodeResult out;
  unsigned __int128 covered = 0;
  for (const AddressRule& rule : map) {
    std::optional<AddrSet> part;
    if (rule.multicast) {
      const AddrSet mfe = ife_to_mfe(rule);
      if (matches(req, mfe)) part = intersect(req, mfe);
    } else if (!req.is_multicast()) {
      if (rule.contains(req.base)) part = req;
    } else {
      for (AddrSet block : aligned_blocks(rule.start, rule.end)) {
        if (matches(req, block)) {
          throw DecodeError("multicast request touches non-multicast region of slave " +
                            std::to_string(rule.slave));
        }
      }
    }
    if (!part) continue;
    if (out.select.contains(rule.slave)) {
      throw DecodeError("multicast request spans several rules of slave " +
                        std::to_string(rule.slave));
    }
    out.select.insert(rule.slave);
    out.per_slave.emplace(rule.slave, *part);
    covered += static_cast<unsigned __int128>(1) << std::popcount(part->mask);
  }
  const unsigned __int128 total = static_cast<unsigned __int128>(1) << std::popcount(req.mask);
  out.residue = covered < total;
  return out;
}

/// Reads the textual address map: one rule per line, "start end slave mcast",
/// hexadecimal fields, '#' starts a comment.
inline AddressMap parse_address_map(std::istream& in) {
  AddressMap map;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string tok[4];
    int n = 0;
    while (n < 4 && fields >> tok[n]) ++n;
    if (n == 0) continue;
    std::string extra;
    if (n != 4 || (fields >> extra)) {
      throw ParseError("address map line " + std::to_string(lineno) +
                       ": expected 4 fields");
    }
    try {
      std::uint64_t v[4];
      for (int i = 0; i < 4; ++i) {
        std::size_t used = 0;
        v[i] = std::stoull(tok[i], &used, 16);
        if (used != tok[i].size()) throw std::invalid_argument(tok[i]);
      }
      if (v[3] > 1) throw std::invalid_argument(tok[3]);
      map.push_back(AddressRule{v[0], v[1], static_cast<unsigned>(v[2]), v[3] == 1});
    } catch (const std::logic_error&) {
      throw ParseError("address map line " + std::to_string(lineno) + ": bad number");
    }
  }
  validate_address_map(map);
  return map;
}

inline void write_address_map(std::ostream& os, std::span<const AddressRule> map) {
  std::ostringstream tmp;
  tmp << "# start end slave multicast\n" << std::hex;
  for (const auto& r : map) {
    tmp << "0x" << r.start << " 0x" << r.end << " 0x" << r.slave << ' '
        << (r.multicast ? 1 : 0) << '\n';
  }
  os << tmp.str();
}

}  // namespace mcast

#endif  // MCAST_ADDRESSING_HPP
