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

#ifndef MCAST_PORT_SET_HPP
#define MCAST_PORT_SET_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <string>

namespace mcast {

/// Set of crossbar port indices, at most 64 ports.
class PortSet {
 public:
  static constexpr unsigned kMaxPorts = 64;

  class Iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = unsigned;
    using difference_type = std::ptrdiff_t;
    using pointer = const unsigned*;
    using reference = unsigned;

    constexpr Iterator() = default;
    constexpr explicit Iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr unsigned operator*() const {
      return static_cast<unsigned>(std::countr_zero(rest_));
    }
    constexpr Iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr Iterator operator++(int) {
      Iterator old = *this;
      ++*this;
      return old;
    }
    friend constexpr bool operator==(Iterator, Iterator) = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr PortSet() = default;
  constexpr PortSet(std::initializer_list<unsigned> ports) {
    for (unsigned p : ports) insert(p);
  }
  static constexpr PortSet from_bits(std::uint64_t bits) {
    PortSet s;
    s.bits_ = bits;
    return s;
  }
  /// Ports [0, n).
  static constexpr PortSet first_n(unsigned n) {
    return from_bits(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  /// Ports [start, 64).
  static constexpr PortSet at_or_above(unsigned start) {
    return from_bits(start >= 64 ? 0 : ~std::uint64_t{0} << start);
  }

  constexpr void insert(unsigned p) { bits_ |= bit(p); }
  constexpr void erase(unsigned p) { bits_ &= ~bit(p); }
  constexpr bool contains(unsigned p) const {
    return p < kMaxPorts && (bits_ & bit(p)) != 0;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr unsigned size() const {
    return static_cast<unsigned>(std::popcount(bits_));
  }
  /// Index of the lowest member; the set must not be empty.
  constexpr unsigned lowest() const {
    return static_cast<unsigned>(std::countr_zero(bits_));
  }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr bool is_subset_of(PortSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr PortSet operator&(PortSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr PortSet operator|(PortSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr PortSet without(PortSet o) const { return from_bits(bits_ & ~o.bits_); }

  constexpr Iterator begin() const { return Iterator(bits_); }
  constexpr Iterator end() const { return Iterator(0); }

  friend constexpr bool operator==(PortSet, PortSet) = default;

  /// Comma separated port list, e.g. "0,1,3"; empty set is "".
  std::string to_string() const {
    std::string out;
    for (unsigned p : *this) {
      if (!out.empty()) out += ',';
      out += std::to_string(p);
    }
    return out;
  }

 private:
  static constexpr std::uint64_t bit(unsigned p) { return std::uint64_t{1} << p; }
  std::uint64_t bits_ = 0;
};

}  // namespace mcast

#endif  // MCAST_PORT_SET_HPP
