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

// Brute-force reference for the mask encoding: every set is materialized as
// a bitset over a W-bit address space and compared against the fast paths.

#ifndef MCAST_TESTS_ORACLE_HPP
#define MCAST_TESTS_ORACLE_HPP

#include <bit>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcast/addressing.hpp"

namespace mcast::oracle {

template <unsigned W>
struct Space {
  static constexpr std::uint64_t kSize = std::uint64_t{1} << W;
  using Bits = std::bitset<kSize>;

  static Bits members(AddrSet s) {
    Bits b;
    for (std::uint64_t a = 0; a < kSize; ++a) {
      if (s.contains(a)) b.set(a);
    }
    return b;
  }

  static Bits members(const AddressRule& r) {
    Bits b;
    for (std::uint64_t a = r.start; a < r.end && a < kSize; ++a) b.set(a);
    return b;
  }

  /// True iff `s` is exactly the set `b`: same size, and `s` holds every member of `b`.
  static bool same(AddrSet s, const Bits& b) {
    if (std::popcount(s.mask) >= 63 || (std::uint64_t{1} << std::popcount(s.mask)) != b.count()) {
      return false;
    }
    for (std::size_t a = b._Find_first(); a < kSize; a = b._Find_next(a)) {
      if (!s.contains(a)) return false;
    }
    return true;
  }

  /// Every canonical (base, mask) pair; 3^W of them.
  static std::vector<AddrSet> all_sets() {
    std::vector<AddrSet> out;
    for (std::uint64_t mask = 0; mask < kSize; ++mask) {
      for (std::uint64_t base = 0; base < kSize; ++base) {
        if ((base & mask) == 0) out.push_back(AddrSet{base, mask});
      }
    }
    return out;
  }

  /// Every aligned power-of-two region, in mask form.
  static std::vector<AddrSet> aligned_regions() {
    std::vector<AddrSet> out;
    for (std::uint64_t size = 1; size <= kSize; size <<= 1) {
      for (std::uint64_t start = 0; start < kSize; start += size) out.push_back(AddrSet{start, size - 1});
    }
    return out;
  }
};

struct Tally {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

inline std::string show(AddrSet s) {
  return "{" + std::to_string(s.base) + "/" + std::to_string(s.mask) + "}";
}

/// matches, intersect, cardinality and enumerate on every pair of sets.
template <unsigned W>
void check_pairs(Tally& t) {
  using S = Space<W>;
  const auto sets = S::all_sets();
  std::vector<typename S::Bits> bits;
  bits.reserve(sets.size());
  for (auto s : sets) bits.push_back(S::members(s));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto list = enumerate(sets[i], S::kSize);
    bool ok = list.size() == bits[i].count() && cardinality(sets[i]) == bits[i].count();
    for (std::size_t k = 0; ok && k < list.size(); ++k) {
      ok = bits[i].test(list[k]) && (k == 0 || list[k - 1] < list[k]);
    }
    t.check(ok, "enumerate " + show(sets[i]));
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const auto both = bits[i] & bits[j];
      const bool m = matches(sets[i], sets[j]);
      t.check(m == both.any(), "matches " + show(sets[i]) + " " + show(sets[j]));
      if (m) {
        const AddrSet x = intersect(sets[i], sets[j]);
        t.check(x.canonical() && S::same(x, both),
                "intersect " + show(sets[i]) + " " + show(sets[j]));
      }
    }
  }
}

/// matches and intersect of every request against every aligned region.
template <unsigned W>
void check_requests_vs_regions(Tally& t) {
  using S = Space<W>;
  const auto reqs = S::all_sets();
  const auto rules = S::aligned_regions();
  std::vector<typename S::Bits> rule_bits;
  for (auto r : rules) rule_bits.push_back(S::members(r));
  for (auto q : reqs) {
    const auto qb = S::members(q);
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const auto both = qb & rule_bits[j];
      const bool m = matches(q, rules[j]);
      if (m != both.any()) {
        t.check(false, "matches " + show(q) + " " + show(rules[j]));
        continue;
      }
      if (m) {
        t.check(S::same(intersect(q, rules[j]), both),
                "intersect " + show(q) + " " + show(rules[j]));
      } else {
        t.check(true, "");
      }
    }
  }
}

/// decode of every request against `map`, against a set-based model.
template <unsigned W>
void check_decode(Tally& t, const AddressMap& map) {
  using S = Space<W>;
  std::vector<typename S::Bits> rule_bits;
  typename S::Bits mapped;
  for (const auto& r : map) {
    rule_bits.push_back(S::members(r));
    mapped |= rule_bits.back();
  }
  for (auto q : S::all_sets()) {
    const auto qb = S::members(q);
    bool expect_error = false;
    std::vector<unsigned> hits_per_slave(64, 0);
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (!(qb & rule_bits[i]).any()) continue;
      if (q.is_multicast() && !map[i].multicast) expect_error = true;
      if (++hits_per_slave[map[i].slave] > 1) expect_error = true;
    }
    std::optional<DecodeResult> d;
    try {
      d = decode(q, map);
    } catch (const DecodeError&) {
    }
    if (expect_error || !d) {
      t.check(expect_error && !d, "decode error mismatch " + show(q));
      continue;
    }
    bool ok = d->residue == (qb & ~mapped).any();
    for (std::size_t i = 0; i < map.size(); ++i) {
      const auto part = qb & rule_bits[i];
      const unsigned s = map[i].slave;
      if (part.any()) {
        ok = ok && d->select.contains(s) && S::same(d->per_slave.at(s), part);
      }
    }
    std::size_t selected = 0;
    for (unsigned s = 0; s < 64; ++s) selected += hits_per_slave[s] > 0;
    ok = ok && d->select.size() == selected && d->per_slave.size() == selected;
    t.check(ok, "decode " + show(q));
  }
}

/// Eight equal multicast regions.
inline AddressMap uniform_map(unsigned width) {
  AddressMap m;
  const std::uint64_t size = (std::uint64_t{1} << width) / 8;
  for (unsigned s = 0; s < 8; ++s) m.push_back({s * size, (s + 1) * size, s, true});
  return m;
}

/// Mixed map: a slave with two rules, non-multicast rules, holes.
inline AddressMap mixed_map(unsigned width) {
  const std::uint64_t u = (std::uint64_t{1} << width) / 32;
  return {
      {0, 8 * u, 0, true},
      {8 * u, 12 * u, 1, true},
      {12 * u, 16 * u, 1, true},
      {16 * u, 24 * u, 2, false},
      {24 * u, 25 * u, 3, true},
      {26 * u, 31 * u - 3, 4, false},
  };
}

}  // namespace mcast::oracle

#endif  // MCAST_TESTS_ORACLE_HPP
