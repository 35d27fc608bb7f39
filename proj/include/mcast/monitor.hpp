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
 * @file monitor.hpp
 * @brief Write-channel invariant checker over crossbar traces.
 *
 * The same engine runs online (fed record by record while simulating) and
 * offline (over a parsed trace file). Checked rules:
 *  - W beats reach each slave in the order the slave received AWs, one
 *    burst at a time (OrderViolation);
 *  - every accepted AW is forwarded once to each destination, carries the
 *    right number of beats with a single last flag, and is answered by
 *    exactly one B (ConservationViolation);
 *  - no other master is forwarded to a multicast's destinations between its
 *    first forward and its commit (AcquisitionViolation);
 *  - no transaction stays in flight longer than ten times a service bound
 *    computed from the work queued ahead of it (StarvationViolation).
 */

#ifndef MCAST_MONITOR_HPP
#define MCAST_MONITOR_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcast/link.hpp"
#include "mcast/trace.hpp"

namespace mcast {

enum class ViolationKind { Order, Conservation, Acquisition, Starvation };

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Order: return "OrderViolation";
    case ViolationKind::Conservation: return "ConservationViolation";
    case ViolationKind::Acquisition: return "AcquisitionViolation";
    case ViolationKind::Starvation: return "StarvationViolation";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  Cycle cycle = 0;
  TxnId id = 0;
  std::optional<unsigned> master;
  std::string narrative;
};

inline std::string to_json_line(const Violation& v) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(v.kind);
  j["cycle"] = v.cycle;
  j["id"] = v.id;
  if (v.master) j["master"] = *v.master; else j["master"] = nullptr;
  j["narrative"] = v.narrative;
  return j.dump();
}

struct MonitorConfig {
  // Watchdog: a transaction may stay in flight for at most
  // factor * (slack + sum over in-flight transactions of (beats + per_txn)).
  unsigned watchdog_factor = 10;
  unsigned watchdog_slack = 256;
  unsigned watchdog_per_txn = 8;
};

class Monitor {
 public:
  explicit Monitor(MonitorConfig cfg = {}) : cfg_(cfg) {}

  void observe(const TraceRecord& r) {
    last_cycle_ = std::max(last_cycle_, r.cycle);
    switch (r.channel) {
      case Channel::Req: on_req(r); break;
      case Channel::Aws: on_aws(r); break;
      case Channel::Cmt: on_cmt(r); break;
      case Channel::Aw: on_aw(r); break;
      case Channel::W: on_w(r); break;
      case Channel::Bs: break;
      case Channel::B: on_b(r); break;
      case Channel::End: finish(r.cycle); return;
    }
    tick(r.cycle);
  }

  /// Watchdog check at `now`.
  void tick(Cycle now) {
    const std::uint64_t bound =
        std::uint64_t{cfg_.watchdog_factor} *
        (cfg_.watchdog_slack + inflight_beats_ + std::uint64_t{cfg_.watchdog_per_txn} * inflight_);
    auto check = [&](Txn& t) {
      if (!t.starved && now > t.since && now - t.since > bound) {
        t.starved = true;
        report(ViolationKind::Starvation, now, t.id, t.master,
               "in flight since cycle " + std::to_string(t.since) + ", bound " +
                   std::to_string(bound) + " cycles");
      }
    };
    for (auto& [m, t] : forming_) check(t);
    for (auto& [m, list] : accepted_) {
      for (auto& t : list) check(t);
    }
  }

  /// End of trace: everything must have drained.
  void finish(Cycle now) {
    if (finished_) return;
    tick(now);
    finished_ = true;
    for (auto& [m, t] : forming_) {
      report(ViolationKind::Conservation, now, t.id, m, "AW never accepted");
    }
    for (auto& [m, list] : accepted_) {
      for (auto& t : list) {
        report(ViolationKind::Conservation, now, t.id, m,
               "no B response for AW accepted at cycle " + std::to_string(t.accepted));
      }
    }
    for (auto& [s, q] : slave_queue_) {
      for (auto& e : q) {
        report(ViolationKind::Conservation, now, e.id, e.master,
               "slave " + std::to_string(s) + " received " + std::to_string(e.seen) + " of " +
                   std::to_string(e.beats) + " W beats");
      }
    }
  }

  const std::vector<Violation>& violations() const { return violations_; }
  bool clean() const { return violations_.empty(); }
  Cycle last_cycle() const { return last_cycle_; }

 private:
  struct Txn {
    unsigned master = 0;
    TxnId id = 0;
    PortSet dests;
    PortSet forwarded;
    std::uint32_t beats = 0;
    bool mcast = false;
    Cycle since = 0;
    Cycle accepted = 0;
    std::optional<Cycle> first_forward;
    bool committed = false;
    bool starved = false;
  };
  struct SlaveEntry {
    unsigned master;
    TxnId id;
    std::uint32_t beats;
    std::uint32_t seen = 0;
  };

  void report(ViolationKind k, Cycle c, TxnId id, std::optional<unsigned> m, std::string what) {
    violations_.push_back(Violation{k, c, id, m, std::move(what)});
  }

  Txn& forming(const TraceRecord& r) {
    auto it = forming_.find(*r.master);
    if (it == forming_.end()) {
      Txn t;
      t.master = *r.master;
      t.id = r.id;
      t.beats = r.beats;
      t.mcast = r.mcast;
      t.since = r.cycle;
      it = forming_.emplace(*r.master, t).first;
      inflight_beats_ += r.beats;
      ++inflight_;
    }
    return it->second;
  }

  void on_req(const TraceRecord& r) {
    Txn& t = forming(r);
    t.dests = r.dests;
  }

  void on_aws(const TraceRecord& r) {
    const unsigned m = *r.master;
    const unsigned s = *r.slave;
    // Another master reaching into a multicast's destinations mid-acquisition.
    for (auto& [other, t] : forming_) {
      if (other == m || !t.mcast || t.committed || !t.first_forward) continue;
      if (t.dests.contains(s)) {
        report(ViolationKind::Acquisition, r.cycle, t.id, other,
               "master " + std::to_string(m) + " forwarded to slave " + std::to_string(s) +
                   " while the multicast of master " + std::to_string(other) +
                   " held part of its destinations since cycle " +
                   std::to_string(*t.first_forward));
      }
    }
    Txn& t = forming(r);
    if (t.forwarded.contains(s)) {
      report(ViolationKind::Conservation, r.cycle, r.id, m,
             "AW forwarded twice to slave " + std::to_string(s));
    }
    t.forwarded.insert(s);
    if (!t.first_forward) t.first_forward = r.cycle;
    slave_queue_[s].push_back(SlaveEntry{m, r.id, r.beats});
  }

  void on_cmt(const TraceRecord& r) {
    auto it = forming_.find(*r.master);
    if (it == forming_.end()) {
      report(ViolationKind::Conservation, r.cycle, r.id, r.master, "commit without a request");
      return;
    }
    it->second.committed = true;
  }

  void on_aw(const TraceRecord& r) {
    const unsigned m = *r.master;
    auto it = forming_.find(m);
    if (it == forming_.end()) {
      report(ViolationKind::Conservation, r.cycle, r.id, m, "AW accepted without being forwarded");
      return;
    }
    Txn t = it->second;
    forming_.erase(it);
    if (!r.dests.empty()) t.dests = r.dests;
    if (t.forwarded != t.dests) {
      report(ViolationKind::Conservation, r.cycle, r.id, m,
             "AW accepted after reaching slaves {" + t.forwarded.to_string() + "} of {" +
                 t.dests.to_string() + "}");
    }
    t.accepted = r.cycle;
    accepted_[m].push_back(t);
  }

  void on_w(const TraceRecord& r) {
    const unsigned s = *r.slave;
    auto& q = slave_queue_[s];
    if (q.empty()) {
      report(ViolationKind::Conservation, r.cycle, r.id, r.master,
             "W beat at slave " + std::to_string(s) + " without an AW");
      return;
    }
    auto& head = q.front();
    if (head.master != *r.master) {
      report(ViolationKind::Order, r.cycle, head.id, r.master,
             "slave " + std::to_string(s) + " got a W beat from master " +
                 std::to_string(*r.master) + " while the burst of master " +
                 std::to_string(head.master) + " is incomplete");
      return;
    }
    ++head.seen;
    const bool should_be_last = head.seen == head.beats;
    if (r.last != should_be_last) {
      report(ViolationKind::Conservation, r.cycle, head.id, head.master,
             "last flag on beat " + std::to_string(head.seen) + " of " +
                 std::to_string(head.beats) + " at slave " + std::to_string(s));
    }
    if (r.last || should_be_last) q.pop_front();
  }

  void on_b(const TraceRecord& r) {
    const unsigned m = *r.master;
    auto& list = accepted_[m];
    auto it = std::find_if(list.begin(), list.end(), [&](const Txn& t) { return t.id == r.id; });
    if (it == list.end()) {
      report(ViolationKind::Conservation, r.cycle, r.id, m, "B without an outstanding AW");
      return;
    }
    inflight_beats_ -= it->beats;
    --inflight_;
    list.erase(it);
  }

  MonitorConfig cfg_;
  std::map<unsigned, Txn> forming_;
  std::map<unsigned, std::deque<Txn>> accepted_;
  std::map<unsigned, std::deque<SlaveEntry>> slave_queue_;
  std::uint64_t inflight_beats_ = 0;
  std::uint64_t inflight_ = 0;
  Cycle last_cycle_ = 0;
  bool finished_ = false;
  std::vector<Violation> violations_;
};

/// Offline check of a complete trace.
inline std::vector<Violation> check_trace(std::span<const TraceRecord> trace,
                                          MonitorConfig cfg = {}) {
  Monitor mon(cfg);
  for (const auto& r : trace) mon.observe(r);
  mon.finish(mon.last_cycle());
  return mon.violations();
}

inline std::vector<Violation> check_trace(std::istream& in, MonitorConfig cfg = {}) {
  auto trace = read_trace(in);
  return check_trace(trace, cfg);
}

}  // namespace mcast

#endif  // MCAST_MONITOR_HPP
