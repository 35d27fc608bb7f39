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
 * @file network.hpp
 * @brief Two-level crossbar network of clusters, groups and the LLC.
 *
 * Group crossbar g: masters are its clusters plus the downlink from the top
 * crossbar (last index); slaves are its clusters plus the uplink (last
 * index, also the default port). Top crossbar: masters are the group
 * uplinks; slaves are the group downlinks plus the LLC (last index).
 */

#ifndef MCAST_NETWORK_HPP
#define MCAST_NETWORK_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mcast/cluster.hpp"
#include "mcast/endpoint.hpp"
#include "mcast/errors.hpp"
#include "mcast/link.hpp"
#include "mcast/monitor.hpp"
#include "mcast/topology.hpp"
#include "mcast/trace.hpp"
#include "mcast/xbar.hpp"

namespace mcast {

inline XbarConfig group_xbar_config(const Topology& t, unsigned g) {
  const unsigned n = t.clusters_per_group;
  XbarConfig cfg;
  cfg.name = "group" + std::to_string(g);
  cfg.num_masters = n + 1;
  cfg.num_slaves = n + 1;
  for (unsigned i = 0; i < n; ++i) {
    const Addr a = t.cluster_addr(g * n + i);
    cfg.address_map.push_back({a, a + t.cluster_stride, i, true});
  }
  cfg.default_port = n;
  cfg.connectivity.assign(n + 1, PortSet::first_n(n + 1));
  cfg.connectivity[n] = PortSet::first_n(n);
  cfg.max_mcast_outstanding = t.max_mcast_outstanding;
  cfg.w_fifo_depth = t.w_fifo_depth;
  cfg.latency = t.link_latency;
  cfg.multicast_enabled = t.multicast;
  return cfg;
}

inline XbarConfig top_xbar_config(const Topology& t) {
  const unsigned g = t.num_groups;
  XbarConfig cfg;
  cfg.name = "top";
  cfg.num_masters = g;
  cfg.num_slaves = g + 1;
  const bool group_mcast = is_power_of_two(t.clusters_per_group);
  for (unsigned i = 0; i < g; ++i) {
    const Addr a = t.group_addr(i);
    cfg.address_map.push_back({a, a + t.group_size(), i, group_mcast});
  }
  cfg.address_map.push_back({t.llc_base, t.llc_base + t.llc_size, g, false});
  cfg.connectivity.assign(g, PortSet::first_n(g + 1));
  for (unsigned i = 0; i < g; ++i) cfg.connectivity[i].erase(i);
  cfg.max_mcast_outstanding = t.max_mcast_outstanding;
  cfg.w_fifo_depth = t.w_fifo_depth;
  cfg.latency = t.link_latency;
  cfg.multicast_enabled = t.multicast;
  return cfg;
}

struct Hop {
  std::string xbar;
  unsigned master = 0;
  PortSet dests;
};

struct PathResult {
  std::vector<Hop> hops;
  PortSet clusters;
  bool llc = false;
  bool error = false;
};

/// Crossbars a request visits, breadth first, with the ports it leaves through.
inline PathResult route_path(const Topology& t, unsigned source, AddrSet target) {
  t.validate();
  if (source >= t.num_clusters()) throw ConfigError("source cluster out of range");
  const unsigned n = t.clusters_per_group;
  const XbarConfig top = top_xbar_config(t);
  PathResult out;
  struct Visit {
    bool is_top;
    unsigned group;
    unsigned master;
    AddrSet target;
  };
  std::deque<Visit> todo{{false, t.group_of(source), t.local_index(source), target}};
  while (!todo.empty()) {
    Visit v = todo.front();
    todo.pop_front();
    const XbarConfig cfg = v.is_top ? top : group_xbar_config(t, v.group);
    Route r = route_request(cfg, v.master, v.target);
    out.hops.push_back(Hop{cfg.name, v.master, r.dests});
    for (unsigned s : r.dests) {
      const AddrSet sub = r.per_port.at(s);
      if (s == cfg.error_port()) {
        out.error = true;
      } else if (!v.is_top && s < n) {
        out.clusters.insert(v.group * n + s);
      } else if (!v.is_top) {
        todo.push_back({true, 0, v.group, sub});
      } else if (s < t.num_groups) {
        todo.push_back({false, s, n, sub});
      } else {
        out.llc = true;
      }
    }
  }
  return out;
}

struct LinkCount {
  std::string name;
  std::uint64_t aw = 0;
  std::uint64_t w = 0;
  std::uint64_t b = 0;
};

using NetworkTraceSink = std::function<void(std::string_view xbar, const TraceRecord&)>;

/**
 * A complete simulated system. Single threaded and deterministic; one
 * instance per run.
 */
class System {
 public:
  explicit System(Topology topo, bool monitors = true)
      : topo_((topo.validate(), std::move(topo))),
        flat_map_(topo_.flat_map()),
        llc_reads_(topo_.llc_latency, topo_.llc_one_way(), topo_.beat_bytes),
        monitors_enabled_(monitors) {
    const unsigned G = topo_.num_groups;
    const unsigned N = topo_.clusters_per_group;
    const unsigned L = topo_.link_latency;
    auto wire = [&](std::string name) {
      wires_.push_back(std::make_unique<Wire>(L));
      wire_names_.push_back(std::move(name));
      return wires_.back().get();
    };
    std::vector<Wire*> c_out, c_in, up, down;
    for (unsigned c = 0; c < topo_.num_clusters(); ++c) {
      c_out.push_back(wire("cluster" + std::to_string(c) + ".out"));
      c_in.push_back(wire("cluster" + std::to_string(c) + ".in"));
    }
    for (unsigned g = 0; g < G; ++g) {
      up.push_back(wire("group" + std::to_string(g) + ".up"));
      down.push_back(wire("group" + std::to_string(g) + ".down"));
    }
    Wire* llc_in = wire("llc.in");

    for (unsigned g = 0; g < G; ++g) {
      std::vector<Wire*> m, s;
      for (unsigned i = 0; i < N; ++i) {
        m.push_back(c_out[g * N + i]);
        s.push_back(c_in[g * N + i]);
      }
      m.push_back(down[g]);
      s.push_back(up[g]);
      add_xbar(group_xbar_config(topo_, g), std::move(m), std::move(s));
    }
    std::vector<Wire*> tm = up, ts = down;
    ts.push_back(llc_in);
    add_xbar(top_xbar_config(topo_), std::move(tm), std::move(ts));

    for (unsigned c = 0; c < topo_.num_clusters(); ++c) {
      clusters_.push_back(
          std::make_unique<Cluster>(c, topo_, c_out[c], c_in[c], &llc_reads_, &flat_map_));
    }
    llc_ep_ = std::make_unique<MemoryEndpoint>(EndpointConfig{EndpointKind::Llc, 4, 1}, llc_in);
  }

  System(const System&) = delete;
  System& operator=(const System&) = delete;

  const Topology& topology() const { return topo_; }
  const AddressMap& flat_map() const { return flat_map_; }
  Cluster& cluster(unsigned c) { return *clusters_.at(c); }
  const Cluster& cluster(unsigned c) const { return *clusters_.at(c); }
  DmaEngine& dma(unsigned c) { return clusters_.at(c)->dma(); }
  MemoryEndpoint& llc_endpoint() { return *llc_ep_; }
  const LlcReadService& llc_reads() const { return llc_reads_; }
  Crossbar& group_xbar(unsigned g) { return *xbars_.at(g); }
  Crossbar& top_xbar() { return *xbars_.back(); }
  std::size_t num_xbars() const { return xbars_.size(); }
  Cycle now() const { return now_; }

  void set_trace(NetworkTraceSink sink) { sink_ = std::move(sink); }

  /// Advances the whole system by one cycle.
  void step() {
    const Cycle t = now_;
    for (auto& w : wires_) w->begin_cycle(t);
    for (auto& x : xbars_) x->begin_cycle(t);
    llc_reads_.step(t, [&](unsigned who) { clusters_[who]->dma().llc_beat(); });
    for (auto& c : clusters_) c->step(t);
    llc_ep_->step(t);
    for (auto& x : xbars_) x->step(t);
    if (monitors_enabled_ && t % kTickInterval == 0) {
      for (auto& m : monitors_) m.tick(t);
    }
    ++now_;
  }

  bool idle() const {
    for (const auto& c : clusters_) {
      if (!c->idle()) return false;
    }
    for (const auto& x : xbars_) {
      if (!x->idle()) return false;
    }
    for (const auto& w : wires_) {
      if (!w->idle()) return false;
    }
    return llc_reads_.idle() && llc_ep_->idle();
  }

  /**
   * Steps until `done()` holds and the network has drained. `poll` runs
   * after every cycle. Throws ProtocolError when `limit` cycles pass first.
   * Monitors stay open; call finish() once the run is over.
   */
  template <typename Done, typename Poll>
  Cycle run(Done&& done, Poll&& poll, Cycle limit = 50'000'000) {
    while (!(done() && idle())) {
      if (now_ >= limit) {
        throw ProtocolError("simulation did not quiesce within " + std::to_string(limit) + " cycles");
      }
      step();
      poll(now_);
    }
    return now_;
  }

  /// Closes the monitors. Idempotent.
  void finish() {
    if (finished_) return;
    finished_ = true;
    if (monitors_enabled_) {
      for (auto& m : monitors_) m.finish(now_);
    }
  }

  std::vector<Violation> violations() const {
    std::vector<Violation> out;
    for (const auto& m : monitors_) {
      out.insert(out.end(), m.violations().begin(), m.violations().end());
    }
    return out;
  }

  std::vector<LinkCount> link_counts() const {
    std::vector<LinkCount> out;
    for (std::size_t i = 0; i < wires_.size(); ++i) {
      const auto& w = *wires_[i];
      out.push_back({wire_names_[i], w.aw.transfers(), w.w.transfers(), w.b.transfers()});
    }
    return out;
  }

  std::uint64_t llc_read_bytes() const { return llc_reads_.bytes_read(); }
  std::uint64_t llc_write_bytes() const { return llc_ep_->bytes_written(); }

 private:
  static constexpr Cycle kTickInterval = 256;

  void add_xbar(XbarConfig cfg, std::vector<Wire*> m, std::vector<Wire*> s) {
    const std::string name = cfg.name;
    xbars_.push_back(std::make_unique<Crossbar>(std::move(cfg), std::move(m), std::move(s)));
    monitors_.emplace_back();
    const std::size_t idx = monitors_.size() - 1;
    xbars_.back()->set_trace([this, idx, name](const TraceRecord& r) {
      if (monitors_enabled_) monitors_[idx].observe(r);
      if (sink_) sink_(name, r);
    });
  }

  Topology topo_;
  AddressMap flat_map_;
  LlcReadService llc_reads_;
  bool monitors_enabled_;
  std::vector<std::unique_ptr<Wire>> wires_;
  std::vector<std::string> wire_names_;
  std::vector<std::unique_ptr<Crossbar>> xbars_;
  std::deque<Monitor> monitors_;
  std::vector<std::unique_ptr<Cluster>> clusters_;
  std::unique_ptr<MemoryEndpoint> llc_ep_;
  NetworkTraceSink sink_;
  Cycle now_ = 0;
  bool finished_ = false;
};

}  // namespace mcast

#endif  // MCAST_NETWORK_HPP
