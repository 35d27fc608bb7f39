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

// Reference unicast-only crossbar: ID-ordered demuxes, round-robin muxes,
// W routed in AW order. It has no multicast logic at all and serves as the
// regression baseline the multicast crossbar must match on unicast traffic.

#ifndef MCAST_BASELINE_XBAR_HPP
#define MCAST_BASELINE_XBAR_HPP

#include <bit>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "mcast/addressing.hpp"
#include "mcast/errors.hpp"
#include "mcast/link.hpp"
#include "mcast/xbar.hpp"

namespace mcast {

class UnicastCrossbar {
 public:
  UnicastCrossbar(XbarConfig cfg, std::vector<Wire*> masters, std::vector<Wire*> slaves)
      : cfg_(std::move(cfg)),
        masters_(std::move(masters)),
        slaves_(std::move(slaves)),
        err_(1),
        ports_(cfg_.num_masters),
        out_(cfg_.num_slaves + 1),
        bits_(static_cast<unsigned>(std::bit_width(cfg_.num_masters - 1u))) {
    cfg_.validate();
    if (masters_.size() != cfg_.num_masters || slaves_.size() != cfg_.num_slaves) {
      throw ConfigError(cfg_.name + ": wire count does not match port count");
    }
    slaves_.push_back(&err_);
  }

  void begin_cycle(Cycle now) { err_.begin_cycle(now); }

  void step(Cycle) {
    error_slave();
    b_channel();
    w_channel();
    aw_channel();
  }

  bool idle() const {
    for (const auto& p : ports_) {
      if (p.pending || p.outstanding || !p.bursts.empty()) return false;
    }
    return err_.idle() && err_aw_.empty() && err_b_.empty();
  }

 private:
  struct Burst {
    unsigned slave;
    std::uint32_t left;
  };
  struct MasterPort {
    std::optional<unsigned> pending;  // destination of the admitted AW head
    std::map<TxnId, std::pair<unsigned, unsigned>> ids;  // id -> (slave, count)
    unsigned outstanding = 0;
    std::deque<Burst> bursts;
    unsigned b_next = 0;
  };
  struct SlavePort {
    std::deque<unsigned> order;
    unsigned next = 0;
  };

  unsigned destination(unsigned m, Addr a) const {
    for (const auto& r : cfg_.address_map) {
      if (a >= r.start && a < r.end) {
        return cfg_.connected(m, r.slave) ? r.slave : cfg_.num_slaves;
      }
    }
    if (cfg_.default_port && cfg_.connected(m, *cfg_.default_port)) return *cfg_.default_port;
    return cfg_.num_slaves;
  }

  void error_slave() {
    if (err_.aw.has_front()) err_aw_.push_back(err_.aw.pop());
    if (!err_aw_.empty() && err_.w.has_front() && err_.w.pop().last) {
      err_b_.push_back(BResponse{err_aw_.front().id, RespCode::DecErr, cfg_.num_slaves});
      err_aw_.pop_front();
    }
    if (!err_b_.empty() && err_.b.can_push()) {
      err_.b.push(err_b_.front());
      err_b_.pop_front();
    }
  }

  void b_channel() {
    const unsigned mask = (1u << bits_) - 1u;
    std::vector<std::vector<unsigned>> cand(cfg_.num_masters);
    for (unsigned s = 0; s < slaves_.size(); ++s) {
      if (slaves_[s]->b.has_front()) cand[slaves_[s]->b.front().id & mask].push_back(s);
    }
    for (unsigned m = 0; m < cfg_.num_masters; ++m) {
      auto& port = ports_[m];
      if (cand[m].empty() || !masters_[m]->b.can_push()) continue;
      unsigned pick = cand[m].front();
      for (unsigned s : cand[m]) {
        if (s >= port.b_next) {
          pick = s;
          break;
        }
      }
      port.b_next = pick + 1;
      BResponse b = slaves_[pick]->b.pop();
      b.id >>= bits_;
      auto it = port.ids.find(b.id);
      if (it == port.ids.end()) throw ProtocolError(cfg_.name + ": B for unknown transaction");
      if (--it->second.second == 0) port.ids.erase(it);
      --port.outstanding;
      masters_[m]->b.push(b);
    }
  }

  void w_channel() {
    for (unsigned m = 0; m < cfg_.num_masters; ++m) {
      auto& port = ports_[m];
      if (port.bursts.empty() || !masters_[m]->w.has_front()) continue;
      auto& burst = port.bursts.front();
      auto& order = out_[burst.slave].order;
      if (order.empty() || order.front() != m || !slaves_[burst.slave]->w.can_push()) continue;
      slaves_[burst.slave]->w.push(masters_[m]->w.pop());
      if (--burst.left == 0) {
        order.pop_front();
        port.bursts.pop_front();
      }
    }
  }

  void aw_channel() {
    for (unsigned m = 0; m < cfg_.num_masters; ++m) {
      auto& port = ports_[m];
      if (port.pending || !masters_[m]->aw.has_front()) continue;
      const AwRequest& aw = masters_[m]->aw.front();
      const unsigned s = destination(m, aw.target.base);
      auto it = port.ids.find(aw.id);
      if (it != port.ids.end() && it->second.first != s) continue;
      port.pending = s;
    }
    std::vector<std::optional<unsigned>> grant(slaves_.size());
    for (unsigned s = 0; s < slaves_.size(); ++s) {
      auto& sp = out_[s];
      if (!slaves_[s]->aw.can_push() || sp.order.size() >= cfg_.w_fifo_depth) continue;
      std::optional<unsigned> first, after;
      for (unsigned m = 0; m < cfg_.num_masters; ++m) {
        if (ports_[m].pending != s) continue;
        if (!first) first = m;
        if (!after && m >= sp.next) after = m;
      }
      grant[s] = after ? after : first;
    }
    for (unsigned s = 0; s < slaves_.size(); ++s) {
      if (!grant[s]) continue;
      const unsigned m = *grant[s];
      auto& port = ports_[m];
      AwRequest aw = masters_[m]->aw.pop();
      const TxnId id = aw.id;
      aw.id = (id << bits_) | m;
      slaves_[s]->aw.push(aw);
      out_[s].order.push_back(m);
      out_[s].next = m + 1;
      auto& e = port.ids[id];
      e.first = s;
      ++e.second;
      ++port.outstanding;
      port.bursts.push_back(Burst{s, aw.burst_beats});
      port.pending.reset();
    }
  }

  XbarConfig cfg_;
  std::vector<Wire*> masters_;
  std::vector<Wire*> slaves_;
  Wire err_;
  std::deque<AwRequest> err_aw_;
  std::deque<BResponse> err_b_;
  std::vector<MasterPort> ports_;
  std::vector<SlavePort> out_;
  unsigned bits_;
};

}  // namespace mcast

#endif  // MCAST_BASELINE_XBAR_HPP
