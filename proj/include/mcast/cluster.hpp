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
 * @file cluster.hpp
 * @brief Compute cluster model: DMA engine, L1 port and the LLC read path.
 */

#ifndef MCAST_CLUSTER_HPP
#define MCAST_CLUSTER_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "mcast/addressing.hpp"
#include "mcast/endpoint.hpp"
#include "mcast/errors.hpp"
#include "mcast/link.hpp"
#include "mcast/protocol.hpp"
#include "mcast/topology.hpp"

namespace mcast {

/**
 * Read side of the LLC. Requests are served in arrival order and at most
 * one beat per cycle leaves the LLC. A request issued at t starts being
 * served at t + one_way + latency, and every beat takes one_way more
 * cycles to reach the requester.
 */
class LlcReadService {
 public:
  LlcReadService(unsigned latency, unsigned one_way, unsigned beat_bytes)
      : latency_(latency), one_way_(one_way), beat_bytes_(beat_bytes) {}

  void request(unsigned who, std::uint32_t beats, Cycle now) {
    if (beats == 0) return;
    queue_.push_back(Req{who, beats, now + one_way_ + latency_});
  }

  template <typename Deliver>
  void step(Cycle now, Deliver&& deliver) {
    while (!in_flight_.empty() && in_flight_.front().first <= now) {
      deliver(in_flight_.front().second);
      in_flight_.pop_front();
    }
    if (!queue_.empty() && queue_.front().ready_at <= now) {
      auto& r = queue_.front();
      in_flight_.emplace_back(now + one_way_, r.who);
      bytes_ += beat_bytes_;
      ++beats_;
      if (--r.beats == 0) queue_.pop_front();
    }
  }

  bool idle() const { return queue_.empty() && in_flight_.empty(); }
  std::uint64_t bytes_read() const { return bytes_; }
  std::uint64_t beats_read() const { return beats_; }

 private:
  struct Req {
    unsigned who;
    std::uint32_t beats;
    Cycle ready_at;
  };
  unsigned latency_;
  unsigned one_way_;
  unsigned beat_bytes_;
  std::deque<Req> queue_;
  std::deque<std::pair<Cycle, unsigned>> in_flight_;
  std::uint64_t bytes_ = 0;
  std::uint64_t beats_ = 0;
};

struct Descriptor {
  enum class Source { L1, Llc };
  Source source = Source::L1;
  AddrSet dst;
  std::uint64_t bytes = 0;
  std::function<void(Cycle)> on_complete;
};

/**
 * Cluster DMA engine.
 *
 * The core programs descriptors one after the other, each costing the
 * software overhead; programming overlaps with transfers already running.
 * The engine splits a descriptor into bursts, gathers each burst (from the
 * LLC or from the local L1), then writes it either over the network or
 * straight into the local L1. All network writes use AXI ID 0.
 */
class DmaEngine {
 public:
  DmaEngine(unsigned cluster, const Topology& topo, Wire* out, LlcReadService* llc,
            const AddressMap* flat_map)
      : cluster_(cluster), topo_(topo), out_(out), llc_(llc), map_(flat_map) {}

  DmaEngine(const DmaEngine&) = delete;
  DmaEngine& operator=(const DmaEngine&) = delete;

  void submit(Descriptor d, Cycle now) {
    if (d.bytes == 0) throw DmaError("zero-byte descriptor");
    if (d.dst.is_multicast()) {
      AwRequest probe;
      probe.target = d.dst;
      if (auto v = validate_multicast(probe, *map_)) {
        throw DmaError("illegal multicast target: " + std::string(to_string(*v)));
      }
      const Addr last = d.dst.base + d.bytes - 1;
      if (((d.dst.base ^ last) & d.dst.mask) != 0 || last < d.dst.base) {
        throw DmaError("transfer overlaps the multicast mask bits");
      }
    }
    auto a = std::make_shared<Active>();
    a->local = !d.dst.is_multicast() && topo_.cluster_at(d.dst.base) == cluster_;
    a->desc = std::move(d);
    a->ready_at = std::max(now, core_free_) + topo_.sw_overhead;
    core_free_ = a->ready_at;
    programmed_.push_back(std::move(a));
    ++submitted_;
  }

  /// Network side and burst creation.
  void step(Cycle now) {
    if (out_->b.has_front()) {
      BResponse b = out_->b.pop();
      if (b_q_.empty()) throw ProtocolError("DMA got a B without an outstanding write");
      if (b.resp != RespCode::Okay) ++error_responses_;
      complete(b_q_.front(), now);
      b_q_.pop_front();
    }
    if (!w_q_.empty() && out_->w.can_push()) {
      auto& b = w_q_.front();
      const bool last = ++b.sent == b.beats;
      out_->w.push(WBeat{cluster_, topo_.beat_bytes, last});
      ++network_beats_;
      if (last) {
        b_q_.push_back(std::move(b));
        w_q_.pop_front();
      }
    }
    if (!aw_q_.empty() && out_->aw.can_push()) {
      auto& b = aw_q_.front();
      AwRequest aw;
      aw.id = 0;
      aw.target = b.target;
      aw.burst_beats = b.beats;
      aw.beat_bytes = topo_.beat_bytes;
      aw.master_index = cluster_;
      out_->aw.push(aw);
      w_q_.push_back(std::move(b));
      aw_q_.pop_front();
    }
    start_burst(now);
  }

  bool wants_l1_read() const { return !l1_reading_.empty(); }
  void l1_read() {
    auto& b = l1_reading_.front();
    if (++b.have == b.beats) {
      writable(std::move(b));
      l1_reading_.pop_front();
    }
  }

  bool wants_l1_write() const { return !local_q_.empty(); }
  void l1_write(Cycle now) {
    auto& b = local_q_.front();
    ++local_beats_;
    if (++b.sent == b.beats) {
      complete(b, now);
      local_q_.pop_front();
    }
  }

  void llc_beat() {
    if (llc_reading_.empty()) throw ProtocolError("LLC data for an idle DMA");
    auto& b = llc_reading_.front();
    if (++b.have == b.beats) {
      writable(std::move(b));
      llc_reading_.pop_front();
    }
  }

  bool idle() const { return programmed_.empty() && inflight_ == 0; }
  std::uint64_t submitted() const { return submitted_; }
  std::uint64_t completed() const { return completed_; }
  std::uint64_t network_beats() const { return network_beats_; }
  std::uint64_t local_beats() const { return local_beats_; }
  std::uint64_t error_responses() const { return error_responses_; }
  std::uint64_t bursts() const { return bursts_; }

 private:
  struct Active {
    Descriptor desc;
    bool local = false;
    Cycle ready_at = 0;
    std::uint64_t split = 0;
    std::uint32_t bursts = 0;
    std::uint32_t done = 0;
  };
  struct Burst {
    std::shared_ptr<Active> owner;
    AddrSet target;
    std::uint32_t beats = 0;
    std::uint32_t have = 0;
    std::uint32_t sent = 0;
  };

  void start_burst(Cycle now) {
    if (programmed_.empty() || inflight_ >= topo_.dma_outstanding) return;
    auto a = programmed_.front();
    if (a->ready_at > now) return;
    const std::uint64_t chunk = std::min<std::uint64_t>(topo_.max_burst, a->desc.bytes - a->split);
    Burst b;
    b.owner = a;
    b.target = AddrSet::of(a->desc.dst.base + a->split, a->desc.dst.mask);
    b.beats = static_cast<std::uint32_t>((chunk + topo_.beat_bytes - 1) / topo_.beat_bytes);
    a->split += chunk;
    ++a->bursts;
    ++inflight_;
    ++bursts_;
    if (a->desc.source == Descriptor::Source::Llc) {
      llc_->request(cluster_, b.beats, now);
      llc_reading_.push_back(std::move(b));
    } else {
      l1_reading_.push_back(std::move(b));
    }
    if (a->split == a->desc.bytes) programmed_.pop_front();
  }

  void writable(Burst b) {
    if (b.owner->local) local_q_.push_back(std::move(b));
    else aw_q_.push_back(std::move(b));
  }

  void complete(Burst& b, Cycle now) {
    --inflight_;
    auto& a = *b.owner;
    if (++a.done == a.bursts && a.split == a.desc.bytes) {
      ++completed_;
      if (a.desc.on_complete) a.desc.on_complete(now);
    }
  }

  unsigned cluster_;
  const Topology& topo_;
  Wire* out_;
  LlcReadService* llc_;
  const AddressMap* map_;
  Cycle core_free_ = 0;
  std::deque<std::shared_ptr<Active>> programmed_;
  std::deque<Burst> llc_reading_, l1_reading_, aw_q_, w_q_, b_q_, local_q_;
  unsigned inflight_ = 0;
  std::uint64_t submitted_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t network_beats_ = 0;
  std::uint64_t local_beats_ = 0;
  std::uint64_t error_responses_ = 0;
  std::uint64_t bursts_ = 0;
};

/**
 * One cluster: DMA engine plus an L1 memory with a single port. The port
 * serves one access per cycle, round-robin among network writes arriving
 * from the crossbar, DMA reads and DMA local writes.
 */
class Cluster {
 public:
  Cluster(unsigned index, const Topology& topo, Wire* out, Wire* in, LlcReadService* llc,
          const AddressMap* flat_map)
      : index_(index),
        dma_(index, topo, out, llc, flat_map),
        l1_(EndpointConfig{EndpointKind::ClusterL1, 4, 1}, in) {}

  unsigned index() const { return index_; }
  DmaEngine& dma() { return dma_; }
  const DmaEngine& dma() const { return dma_; }
  MemoryEndpoint& l1() { return l1_; }
  const MemoryEndpoint& l1() const { return l1_; }

  void step(Cycle now) {
    dma_.step(now);
    l1_.take_aw();
    const std::array<bool, 3> req{l1_.wants_write(), dma_.wants_l1_read(), dma_.wants_l1_write()};
    for (unsigned k = 0; k < req.size(); ++k) {
      const unsigned i = (rr_ + k) % req.size();
      if (!req[i]) continue;
      switch (i) {
        case 0: l1_.write_beat(now); break;
        case 1: dma_.l1_read(); break;
        case 2: dma_.l1_write(now); break;
      }
      rr_ = i + 1;
      ++port_accesses_;
      break;
    }
    l1_.respond(now);
  }

  bool idle() const { return dma_.idle() && l1_.idle(); }
  std::uint64_t port_accesses() const { return port_accesses_; }

 private:
  unsigned index_;
  DmaEngine dma_;
  MemoryEndpoint l1_;
  unsigned rr_ = 0;
  std::uint64_t port_accesses_ = 0;
};

}  // namespace mcast

#endif  // MCAST_CLUSTER_HPP
