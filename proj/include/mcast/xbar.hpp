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
 * @file xbar.hpp
 * @brief Cycle-stepped multicast-capable crossbar.
 *
 * Each master port has a demux: it decodes the AW head, enforces the ID and
 * unicast/multicast ordering rules, forks the AW to the addressed muxes,
 * routes W beats in AW order and joins multicast B responses. Each slave
 * port has a mux: multicast requests win over unicast ones and are picked
 * with a priority encoder (lowest master index) so that every mux a
 * multicast needs agrees on the same master. The demux commits the AW only
 * in a cycle where every addressed mux selects it and is ready, so a master
 * acquires all of its slaves at once.
 *
 * Slave index num_slaves is an internal error slave answering DECERR.
 */

#ifndef MCAST_XBAR_HPP
#define MCAST_XBAR_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcast/addressing.hpp"
#include "mcast/errors.hpp"
#include "mcast/link.hpp"
#include "mcast/port_set.hpp"
#include "mcast/protocol.hpp"
#include "mcast/trace.hpp"

namespace mcast {

struct XbarConfig {
  std::string name = "xbar";
  unsigned num_masters = 1;
  unsigned num_slaves = 1;
  AddressMap address_map;
  // Slave port receiving requests not fully covered by the map.
  std::optional<unsigned> default_port;
  // Reachable slave ports per master; empty means fully connected.
  std::vector<PortSet> connectivity;
  unsigned max_mcast_outstanding = 4;
  // Depth of each mux's W ordering FIFO (AWs forwarded, W not yet done).
  unsigned w_fifo_depth = 8;
  unsigned latency = 1;
  // When false the aw_user mask is ignored and every request is unicast.
  bool multicast_enabled = true;
  // When false muxes forward a multicast AW independently, with plain
  // round-robin arbitration and no commit. Only useful to show why the
  // commit protocol exists: it can deadlock.
  bool atomic_acquisition = true;

  unsigned error_port() const { return num_slaves; }

  bool connected(unsigned master, unsigned slave) const {
    return connectivity.empty() || connectivity.at(master).contains(slave);
  }

  void validate() const {
    if (num_masters == 0 || num_slaves == 0) throw ConfigError(name + ": empty crossbar");
    if (num_slaves + 1 > PortSet::kMaxPorts) throw ConfigError(name + ": too many slaves");
    if (max_mcast_outstanding == 0) throw ConfigError(name + ": multicast window of zero");
    if (w_fifo_depth == 0) throw ConfigError(name + ": zero W FIFO depth");
    validate_address_map(address_map);
    for (const auto& r : address_map) {
      if (r.slave >= num_slaves) {
        throw ConfigError(name + ": rule targets slave " + std::to_string(r.slave) +
                          " but the crossbar has " + std::to_string(num_slaves));
      }
    }
    if (default_port && *default_port >= num_slaves) {
      throw ConfigError(name + ": default port out of range");
    }
    if (!connectivity.empty() && connectivity.size() != num_masters) {
      throw ConfigError(name + ": connectivity must list every master");
    }
  }
};

/// Destinations of one request at one crossbar.
struct Route {
  PortSet dests;
  std::map<unsigned, AddrSet> per_port;
  bool multicast = false;
};

/**
 * Decides where a request from `master` goes. Unmapped parts go to the
 * default port when there is a connected one, otherwise to the error
 * slave. Ports the master is not connected to are dropped.
 */
inline Route route_request(const XbarConfig& cfg, unsigned master, AddrSet target) {
  if (!cfg.multicast_enabled) target = AddrSet::single(target.base);
  Route out;
  out.multicast = target.is_multicast();
  const unsigned err = cfg.error_port();
  DecodeResult d;
  try {
    d = decode(target, cfg.address_map);
  } catch (const DecodeError&) {
    out.dests.insert(err);
    out.per_port[err] = target;
    return out;
  }
  for (unsigned s : d.select) {
    if (!cfg.connected(master, s)) continue;
    out.dests.insert(s);
    out.per_port[s] = d.per_slave.at(s);
  }
  if (d.residue) {
    if (cfg.default_port && cfg.connected(master, *cfg.default_port)) {
      out.dests.insert(*cfg.default_port);
      out.per_port[*cfg.default_port] = target;
    } else {
      out.dests.insert(err);
      out.per_port[err] = target;
    }
  }
  if (out.dests.empty()) {
    out.dests.insert(err);
    out.per_port[err] = target;
  }
  return out;
}

struct IdEntry {
  unsigned slave = 0;
  unsigned count = 0;
};

/// A forked AW waiting for its muxes.
struct PendingAw {
  AwRequest aw;
  Route route;
  PortSet forwarded;
};

struct McastJoin {
  TxnId id = 0;
  PortSet expected;
  PortSet arrived;
  std::map<unsigned, TxnId> ids;
  std::vector<RespCode> resps;
};

struct WBurst {
  PortSet dests;
  std::uint32_t beats_left = 0;
};

struct DemuxState {
  std::map<TxnId, IdEntry> id_table;
  unsigned outstanding_unicast = 0;
  unsigned outstanding_multicast = 0;
  PortSet active_mcast_ports;
  std::optional<PendingAw> pending;
  std::deque<WBurst> w_queue;
  std::deque<McastJoin> joins;
  unsigned b_rr = 0;
  std::optional<Cycle> head_since;
};

struct MuxState {
  std::deque<unsigned> w_order;
  unsigned rr = 0;
  std::optional<unsigned> grant;
};

/// AW admission rule of a demux.
inline bool demux_can_accept(const DemuxState& st, const AwRequest& aw, const Route& route,
                             unsigned max_mcast_outstanding) {
  if (!route.multicast) {
    if (st.outstanding_multicast != 0) return false;
    auto it = st.id_table.find(aw.id);
    if (it != st.id_table.end() && it->second.count > 0) {
      return route.dests.size() == 1 && route.dests.lowest() == it->second.slave;
    }
    return true;
  }
  if (st.outstanding_unicast != 0) return false;
  if (st.outstanding_multicast >= max_mcast_outstanding) return false;
  return st.outstanding_multicast == 0 || route.dests == st.active_mcast_ports;
}

/// Commit fires in the first cycle every addressed mux selects the master and is ready.
inline bool commit_ready(unsigned master, PortSet dests, const std::vector<std::optional<unsigned>>& sel,
                         PortSet ready) {
  for (unsigned s : dests) {
    if (!sel[s] || *sel[s] != master || !ready.contains(s)) return false;
  }
  return true;
}

/// Mux selection: lowest multicast requester first, otherwise round-robin.
inline std::optional<unsigned> mux_arbitrate(const MuxState& st, PortSet unicast_req,
                                             PortSet mcast_req, bool mcast_priority = true) {
  if (mcast_priority && !mcast_req.empty()) return mcast_req.lowest();
  PortSet all = mcast_priority ? unicast_req : (unicast_req | mcast_req);
  if (all.empty()) return std::nullopt;
  PortSet upper = all & PortSet::at_or_above(st.rr);
  return upper.empty() ? all.lowest() : upper.lowest();
}

/// A W beat may move only when every destination serves this master next and can take it.
inline bool route_w_beat(const DemuxState& demux, unsigned master,
                         const std::vector<MuxState>& muxes, PortSet dest_ready) {
  if (demux.w_queue.empty()) throw ProtocolError("W beat without a matching AW");
  for (unsigned s : demux.w_queue.front().dests) {
    const auto& order = muxes.at(s).w_order;
    if (order.empty() || order.front() != master || !dest_ready.contains(s)) return false;
  }
  return true;
}

/**
 * Records one multicast B arrival. Returns the joined response once every
 * addressed slave has answered the oldest outstanding multicast.
 */
inline std::optional<BResponse> join_b(DemuxState& st, unsigned slave, const BResponse& b) {
  McastJoin* target = nullptr;
  for (auto& j : st.joins) {
    if (j.expected.contains(slave) && !j.arrived.contains(slave)) {
      target = &j;
      break;
    }
  }
  if (target == nullptr) throw ProtocolError("B from slave " + std::to_string(slave) +
                                             " matches no outstanding multicast");
  target->arrived.insert(slave);
  target->ids[slave] = b.id;
  target->resps.push_back(b.resp);
  auto& oldest = st.joins.front();
  if (oldest.arrived != oldest.expected) return std::nullopt;
  return BResponse{pick_join_id(oldest.expected, oldest.ids), join_responses(oldest.resps), 0};
}

class Crossbar {
 public:
  Crossbar(XbarConfig cfg, std::vector<Wire*> masters, std::vector<Wire*> slaves)
      : cfg_(std::move(cfg)),
        masters_(std::move(masters)),
        slaves_(std::move(slaves)),
        err_wire_(1),
        demux_(cfg_.num_masters),
        mux_(cfg_.num_slaves + 1),
        id_bits_(static_cast<unsigned>(std::bit_width(cfg_.num_masters - 1u))) {
    cfg_.validate();
    if (masters_.size() != cfg_.num_masters || slaves_.size() != cfg_.num_slaves) {
      throw ConfigError(cfg_.name + ": wire count does not match port count");
    }
    slaves_.push_back(&err_wire_);
  }

  Crossbar(const Crossbar&) = delete;
  Crossbar& operator=(const Crossbar&) = delete;

  const XbarConfig& config() const { return cfg_; }
  const DemuxState& demux(unsigned m) const { return demux_.at(m); }
  const MuxState& mux(unsigned s) const { return mux_.at(s); }
  void set_trace(TraceSink sink) { trace_ = std::move(sink); }
  unsigned id_bits() const { return id_bits_; }

  /// Internal links need the cycle edge too; external wires belong to the caller.
  void begin_cycle(Cycle now) { err_wire_.begin_cycle(now); }

  void step(Cycle now) {
    now_ = now;
    step_error_slave();
    step_b();
    step_w();
    step_aw();
  }

  bool idle() const {
    for (const auto& d : demux_) {
      if (d.pending || d.outstanding_unicast || d.outstanding_multicast || !d.w_queue.empty()) {
        return false;
      }
    }
    return err_wire_.idle() && err_pending_.empty();
  }

  /// Earliest cycle at which a still unserved AW reached a demux.
  std::optional<Cycle> oldest_waiting_since() const {
    std::optional<Cycle> out;
    for (const auto& d : demux_) {
      if (d.head_since && (!out || *d.head_since < *out)) out = d.head_since;
    }
    return out;
  }

 private:
  void emit(TraceRecord r) {
    if (!trace_) return;
    r.cycle = now_;
    trace_(r);
  }

  TxnId extend(TxnId id, unsigned master) const { return (id << id_bits_) | master; }
  unsigned master_of(TxnId id) const { return id & ((1u << id_bits_) - 1u); }
  TxnId strip(TxnId id) const { return id >> id_bits_; }

  // Absorbs AWs and W beats, answers DECERR after the last beat.
  void step_error_slave() {
    if (err_wire_.aw.has_front()) err_pending_.push_back(err_wire_.aw.pop());
    if (!err_pending_.empty() && err_wire_.w.has_front()) {
      WBeat beat = err_wire_.w.pop();
      if (beat.last) {
        err_b_.push_back(BResponse{err_pending_.front().id, RespCode::DecErr, cfg_.error_port()});
        err_pending_.pop_front();
      }
    }
    if (!err_b_.empty() && err_wire_.b.can_push()) {
      err_wire_.b.push(err_b_.front());
      err_b_.pop_front();
    }
  }

  void step_b() {
    const unsigned n_ports = cfg_.num_slaves + 1;
    // Unicast candidates per master, one B per master per cycle.
    std::vector<PortSet> uni(cfg_.num_masters);
    for (unsigned s = 0; s < n_ports; ++s) {
      auto& link = slaves_[s]->b;
      if (!link.has_front()) continue;
      const unsigned m = master_of(link.front().id);
      if (m >= cfg_.num_masters) throw ProtocolError(cfg_.name + ": B for unknown master");
      auto& d = demux_[m];
      if (d.outstanding_multicast > 0) {
        BResponse b = link.pop();
        b.id = strip(b.id);
        emit_b(Channel::Bs, m, s, b);
        (void)join_b(d, s, b);
      } else {
        uni[m].insert(s);
      }
    }
    for (unsigned m = 0; m < cfg_.num_masters; ++m) {
      auto& d = demux_[m];
      auto& out = masters_[m]->b;
      if (!d.joins.empty() && d.joins.front().arrived == d.joins.front().expected) {
        if (!out.can_push()) continue;
        auto& j = d.joins.front();
        BResponse joined{pick_join_id(j.expected, j.ids), join_responses(j.resps), 0};
        out.push(joined);
        emit_b(Channel::B, m, std::nullopt, joined);
        d.joins.pop_front();
        if (--d.outstanding_multicast == 0) d.active_mcast_ports = PortSet{};
        continue;
      }
      if (uni[m].empty() || !out.can_push()) continue;
      PortSet upper = uni[m] & PortSet::at_or_above(d.b_rr);
      const unsigned s = upper.empty() ? uni[m].lowest() : upper.lowest();
      d.b_rr = s + 1;
      BResponse b = slaves_[s]->b.pop();
      b.id = strip(b.id);
      auto it = d.id_table.find(b.id);
      if (it == d.id_table.end() || it->second.count == 0 || d.outstanding_unicast == 0) {
        throw ProtocolError(cfg_.name + ": B for unknown transaction");
      }
      if (--it->second.count == 0) d.id_table.erase(it);
      --d.outstanding_unicast;
      emit_b(Channel::Bs, m, s, b);
      out.push(b);
      emit_b(Channel::B, m, std::nullopt, b);
    }
  }

  void emit_b(Channel ch, unsigned m, std::optional<unsigned> s, const BResponse& b) {
    if (!trace_) return;
    TraceRecord r;
    r.channel = ch;
    r.master = m;
    r.slave = s;
    r.id = b.id;
    r.resp = b.resp;
    emit(r);
  }

  void step_w() {
    for (unsigned m = 0; m < cfg_.num_masters; ++m) {
      auto& d = demux_[m];
      auto& in = masters_[m]->w;
      if (d.w_queue.empty() || !in.has_front()) continue;
      PortSet ready;
      for (unsigned s : d.w_queue.front().dests) {
        if (slaves_[s]->w.can_push()) ready.insert(s);
      }
      if (!route_w_beat(d, m, mux_, ready)) continue;
      WBeat beat = in.pop();
      auto& burst = d.w_queue.front();
      if (beat.last != (burst.beats_left == 1)) {
        throw ProtocolError(cfg_.name + ": W last flag does not match the burst length");
      }
      for (unsigned s : burst.dests) {
        slaves_[s]->w.push(beat);
        if (trace_) {
          TraceRecord r;
          r.channel = Channel::W;
          r.master = m;
          r.slave = s;
          r.bytes = beat.byte_count;
          r.last = beat.last;
          emit(r);
        }
      }
      if (--burst.beats_left == 0) {
        for (unsigned s : burst.dests) mux_[s].w_order.pop_front();
        d.w_queue.pop_front();
      }
    }
  }

  void step_aw() {
    const unsigned n_ports = cfg_.num_slaves + 1;
    // Admission.
    for (unsigned m = 0; m < cfg_.num_masters; ++m) {
      auto& d = demux_[m];
      auto& in = masters_[m]->aw;
      if (d.pending || !in.has_front()) continue;
      const AwRequest& aw = in.front();
      Route route = route_request(cfg_, m, aw.target);
      if (!d.head_since) {
        d.head_since = now_;
        emit_aw(Channel::Req, m, std::nullopt, aw, aw.target, route);
      }
      if (route.multicast && aw.exclusive) {
        throw ProtocolError(cfg_.name + ": exclusive multicast from master " + std::to_string(m));
      }
      if (demux_can_accept(d, aw, route, cfg_.max_mcast_outstanding)) {
        d.pending = PendingAw{aw, std::move(route), PortSet{}};
      }
    }

    // Mux selection and readiness.
    std::vector<std::optional<unsigned>> sel(n_ports);
    PortSet ready;
    for (unsigned s = 0; s < n_ports; ++s) {
      PortSet uni, mc;
      for (unsigned m = 0; m < cfg_.num_masters; ++m) {
        const auto& p = demux_[m].pending;
        if (!p || !p->route.dests.contains(s) || p->forwarded.contains(s)) continue;
        (p->route.multicast ? mc : uni).insert(m);
      }
      sel[s] = mux_arbitrate(mux_[s], uni, mc, cfg_.atomic_acquisition);
      mux_[s].grant = sel[s];
      if (slaves_[s]->aw.can_push() && mux_[s].w_order.size() < cfg_.w_fifo_depth) {
        ready.insert(s);
      }
    }

    // Forwarding.
    for (unsigned m = 0; m < cfg_.num_masters; ++m) {
      auto& d = demux_[m];
      if (!d.pending) continue;
      auto& p = *d.pending;
      if (p.route.multicast && cfg_.atomic_acquisition) {
        if (!commit_ready(m, p.route.dests, sel, ready)) continue;
        if (trace_) {
          TraceRecord r;
          r.channel = Channel::Cmt;
          r.master = m;
          r.id = p.aw.id;
          r.dests = p.route.dests;
          emit(r);
        }
        for (unsigned s : p.route.dests) forward(m, s);
      } else {
        for (unsigned s : p.route.dests.without(p.forwarded)) {
          if (sel[s] && *sel[s] == m && ready.contains(s)) {
            forward(m, s);
            mux_[s].rr = m + 1;
          }
        }
      }
      if (p.forwarded == p.route.dests) accept(m);
    }
  }

  void forward(unsigned m, unsigned s) {
    auto& p = *demux_[m].pending;
    AwRequest out = p.aw;
    out.id = extend(p.aw.id, m);
    out.target = p.route.per_port.at(s);
    slaves_[s]->aw.push(out);
    mux_[s].w_order.push_back(m);
    p.forwarded.insert(s);
    emit_aw(Channel::Aws, m, s, p.aw, out.target, p.route);
  }

  void accept(unsigned m) {
    auto& d = demux_[m];
    auto& p = *d.pending;
    if (p.route.multicast) {
      ++d.outstanding_multicast;
      d.active_mcast_ports = p.route.dests;
      d.joins.push_back(McastJoin{p.aw.id, p.route.dests, {}, {}, {}});
    } else {
      auto& e = d.id_table[p.aw.id];
      e.slave = p.route.dests.lowest();
      ++e.count;
      ++d.outstanding_unicast;
    }
    d.w_queue.push_back(WBurst{p.route.dests, p.aw.burst_beats});
    emit_aw(Channel::Aw, m, std::nullopt, p.aw, p.aw.target, p.route);
    masters_[m]->aw.pop();
    d.pending.reset();
    d.head_since.reset();
  }

  void emit_aw(Channel ch, unsigned m, std::optional<unsigned> s, const AwRequest& aw,
               AddrSet target, const Route& route) {
    if (!trace_) return;
    TraceRecord r;
    r.channel = ch;
    r.master = m;
    r.slave = s;
    r.id = aw.id;
    r.target = target;
    r.beats = aw.burst_beats;
    r.mcast = route.multicast;
    r.dests = route.dests;
    emit(r);
  }

  XbarConfig cfg_;
  std::vector<Wire*> masters_;
  std::vector<Wire*> slaves_;
  Wire err_wire_;
  std::deque<AwRequest> err_pending_;
  std::deque<BResponse> err_b_;
  std::vector<DemuxState> demux_;
  std::vector<MuxState> mux_;
  unsigned id_bits_;
  Cycle now_ = 0;
  TraceSink trace_;
};

}  // namespace mcast

#endif  // MCAST_XBAR_HPP
