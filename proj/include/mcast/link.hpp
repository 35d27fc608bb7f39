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

#ifndef MCAST_LINK_HPP
#define MCAST_LINK_HPP

#include <cassert>
#include <cstdint>
#include <deque>
#include <utility>

#include "mcast/protocol.hpp"

namespace mcast {

using Cycle = std::uint64_t;

/**
 * Registered valid/ready channel with fixed latency.
 *
 * An item pushed in cycle t becomes visible to the consumer in t + latency.
 * Space is judged from the occupancy sampled at the start of the cycle, so
 * the result of a cycle never depends on the order in which producer and
 * consumer are evaluated. Capacity latency + 1 sustains one item per cycle.
 */
template <typename T>
class Link {
 public:
  explicit Link(unsigned latency = 1)
      : latency_(latency == 0 ? 1 : latency), capacity_(latency_ + 1) {}

  void begin_cycle(Cycle now) {
    now_ = now;
    sampled_ = items_.size();
    pushed_ = 0;
  }

  bool can_push() const { return sampled_ + pushed_ < capacity_; }

  void push(T item) {
    assert(can_push());
    items_.emplace_back(now_ + latency_, std::move(item));
    ++pushed_;
    ++transfers_;
  }

  bool has_front() const { return !items_.empty() && items_.front().first <= now_; }
  const T& front() const { return items_.front().second; }
  T& front() { return items_.front().second; }
  T pop() {
    assert(has_front());
    T item = std::move(items_.front().second);
    items_.pop_front();
    return item;
  }

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  unsigned latency() const { return latency_; }
  // Items ever pushed.
  std::uint64_t transfers() const { return transfers_; }

 private:
  unsigned latency_;
  std::size_t capacity_;
  std::deque<std::pair<Cycle, T>> items_;
  Cycle now_ = 0;
  std::size_t sampled_ = 0;
  std::size_t pushed_ = 0;
  std::uint64_t transfers_ = 0;
};

/// The three write channels between one master-side and one slave-side port.
struct Wire {
  explicit Wire(unsigned latency = 1) : aw(latency), w(latency), b(latency) {}

  void begin_cycle(Cycle now) {
    aw.begin_cycle(now);
    w.begin_cycle(now);
    b.begin_cycle(now);
  }
  bool idle() const { return aw.empty() && w.empty() && b.empty(); }

  Link<AwRequest> aw;
  Link<WBeat> w;
  Link<BResponse> b;
};

}  // namespace mcast

#endif  // MCAST_LINK_HPP
