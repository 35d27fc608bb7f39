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
 * @file traffic.hpp
 * @brief Randomized traffic on a single crossbar, checked online by a monitor.
 */

#ifndef MCAST_TRAFFIC_HPP
#define MCAST_TRAFFIC_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <random>
#include <vector>

#include "mcast/endpoint.hpp"
#include "mcast/link.hpp"
#include "mcast/monitor.hpp"
#include "mcast/xbar.hpp"

namespace mcast {

struct ScenarioConfig {
  unsigned masters = 4;
  unsigned slaves = 4;
  unsigned txns_per_master = 16;
  double mcast_prob = 0.4;
  double unmapped_prob = 0.02;
  unsigned max_beats = 8;
  unsigned id_pool = 4;
  // Per-cycle probabilities.
  double issue_prob = 0.5;
  double w_valid_prob = 0.8;
  double slave_ready_prob = 0.7;
  unsigned latency = 1;
  unsigned w_fifo_depth = 4;
  unsigned max_mcast_outstanding = 4;
  bool atomic = true;
  bool multicast = true;
  Cycle limit = 200'000;
};

struct ScenarioResult {
  Cycle cycles = 0;
  bool quiesced = false;
  std::uint64_t issued = 0;
  std::uint64_t completed = 0;
  std::uint64_t error_responses = 0;
  std::vector<Violation> violations;
  // Cycle of every B response, per master.
  std::vector<std::vector<Cycle>> b_cycles;
};

// Each slave owns one 4 KiB region starting here.
inline constexpr Addr kScenarioBase = 0x10'0000;
inline constexpr Addr kScenarioRegion = 0x1000;

inline AddressMap scenario_map(unsigned slaves) {
  AddressMap map;
  for (unsigned s = 0; s < slaves; ++s) {
    const Addr a = kScenarioBase + s * kScenarioRegion;
    map.push_back({a, a + kScenarioRegion, s, true});
  }
  return map;
}

/// A request stream: AWs issued in order, W beats following their AWs.
struct ScriptedMaster {
  std::deque<AwRequest> todo;
  Cycle not_before = 0;
};

namespace detail {

template <typename Xbar>
class ScenarioRunner {
 public:
  ScenarioRunner(const ScenarioConfig& cfg, std::vector<ScriptedMaster> scripts, std::uint64_t seed)
      : cfg_(cfg), rng_(seed), scripts_(std::move(scripts)) {
    for (unsigned i = 0; i < cfg.masters; ++i) mw_.push_back(std::make_unique<Wire>(cfg.latency));
    for (unsigned i = 0; i < cfg.slaves; ++i) sw_.push_back(std::make_unique<Wire>(cfg.latency));
    XbarConfig x;
    x.name = "scenario";
    x.num_masters = cfg.masters;
    x.num_slaves = cfg.slaves;
    x.address_map = scenario_map(cfg.slaves);
    x.latency = cfg.latency;
    x.w_fifo_depth = cfg.w_fifo_depth;
    x.max_mcast_outstanding = cfg.max_mcast_outstanding;
    x.atomic_acquisition = cfg.atomic;
    x.multicast_enabled = cfg.multicast;
    std::vector<Wire*> m, s;
    for (auto& w : mw_) m.push_back(w.get());
    for (auto& w : sw_) s.push_back(w.get());
    xbar_ = std::make_unique<Xbar>(std::move(x), std::move(m), std::move(s));
    if constexpr (requires { xbar_->set_trace(TraceSink{}); }) {
      xbar_->set_trace([this](const TraceRecord& r) { monitor_.observe(r); });
    }
    for (auto& w : sw_) slaves_.emplace_back(EndpointConfig{EndpointKind::ClusterL1, 4, 1}, w.get());
    w_left_.resize(cfg.masters);
    result_.b_cycles.resize(cfg.masters);
    for (const auto& sc : scripts_) result_.issued += sc.todo.size();
  }

  ScenarioResult run() {
    std::bernoulli_distribution issue(cfg_.issue_prob), wv(cfg_.w_valid_prob),
        ready(cfg_.slave_ready_prob);
    Cycle now = 0;
    for (; now < cfg_.limit; ++now) {
      if (done()) break;
      for (auto& w : mw_) w->begin_cycle(now);
      for (auto& w : sw_) w->begin_cycle(now);
      xbar_->begin_cycle(now);
      for (unsigned m = 0; m < cfg_.masters; ++m) {
        auto& wire = *mw_[m];
        auto& sc = scripts_[m];
        if (wire.b.has_front()) {
          if (wire.b.pop().resp != RespCode::Okay) ++result_.error_responses;
          ++result_.completed;
          result_.b_cycles[m].push_back(now);
        }
        if (!w_left_[m].empty() && wire.w.can_push() && wv(rng_)) {
          auto& left = w_left_[m].front();
          wire.w.push(WBeat{m, 64, left == 1});
          if (--left == 0) w_left_[m].pop_front();
        }
        if (!sc.todo.empty() && now >= sc.not_before && wire.aw.can_push() && issue(rng_)) {
          w_left_[m].push_back(sc.todo.front().burst_beats);
          wire.aw.push(sc.todo.front());
          sc.todo.pop_front();
        }
      }
      for (auto& s : slaves_) s.step(now, ready(rng_));
      xbar_->step(now);
      monitor_.tick(now);
    }
    result_.cycles = now;
    result_.quiesced = done();
    monitor_.finish(now);
    result_.violations = monitor_.violations();
    return result_;
  }

 private:
  bool done() const {
    if (result_.completed != result_.issued) return false;
    for (const auto& sc : scripts_) {
      if (!sc.todo.empty()) return false;
    }
    for (const auto& s : slaves_) {
      if (!s.idle()) return false;
    }
    return xbar_->idle();
  }

  ScenarioConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<ScriptedMaster> scripts_;
  std::vector<std::unique_ptr<Wire>> mw_, sw_;
  std::unique_ptr<Xbar> xbar_;
  std::vector<MemoryEndpoint> slaves_;
  std::vector<std::deque<std::uint32_t>> w_left_;
  Monitor monitor_;
  ScenarioResult result_;
};

}  // namespace detail

/// Random request stream for each master of `cfg`.
inline std::vector<ScriptedMaster> random_scripts(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  std::vector<ScriptedMaster> out(cfg.masters);
  std::uniform_int_distribution<unsigned> beats(1, cfg.max_beats), id(0, cfg.id_pool - 1),
      slave(0, cfg.slaves - 1);
  std::bernoulli_distribution mc(cfg.mcast_prob), unmapped(cfg.unmapped_prob), intra(0.1);
  for (auto& sc : out) {
    for (unsigned i = 0; i < cfg.txns_per_master; ++i) {
      AwRequest aw;
      aw.id = id(rng);
      aw.burst_beats = beats(rng);
      const Addr off = 64 * std::uniform_int_distribution<Addr>(0, 15)(rng);
      if (unmapped(rng)) {
        aw.target = AddrSet::single(0xF000'0000 + off);
      } else if (mc(rng) && cfg.slaves > 1) {
        // Aligned power-of-two block of slaves.
        unsigned k = 2;
        const unsigned max_k = std::bit_floor(cfg.slaves);
        while (k < max_k && std::bernoulli_distribution(0.5)(rng)) k *= 2;
        const unsigned first = k * std::uniform_int_distribution<unsigned>(0, cfg.slaves / k - 1)(rng);
        aw.target = AddrSet::of(kScenarioBase + first * kScenarioRegion + off,
                                (Addr{k} - 1) * kScenarioRegion);
      } else if (intra(rng)) {
        // Two addresses inside one slave.
        aw.target = AddrSet::of(kScenarioBase + slave(rng) * kScenarioRegion + off, 0x400);
      } else {
        aw.target = AddrSet::single(kScenarioBase + slave(rng) * kScenarioRegion + off);
      }
      sc.todo.push_back(aw);
    }
  }
  return out;
}

/// Random crossbar size (1..16 x 1..16) and traffic mix from `seed`.
inline ScenarioConfig random_scenario_config(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9E37'79B9'7F4A'7C15ull);
  ScenarioConfig c;
  c.masters = std::uniform_int_distribution<unsigned>(1, 16)(rng);
  c.slaves = std::uniform_int_distribution<unsigned>(1, 16)(rng);
  c.txns_per_master = std::uniform_int_distribution<unsigned>(4, 24)(rng);
  c.mcast_prob = std::uniform_real_distribution<double>(0.0, 0.8)(rng);
  c.issue_prob = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
  c.w_valid_prob = std::uniform_real_distribution<double>(0.3, 1.0)(rng);
  c.slave_ready_prob = std::uniform_real_distribution<double>(0.3, 1.0)(rng);
  c.latency = std::uniform_int_distribution<unsigned>(1, 3)(rng);
  c.w_fifo_depth = std::uniform_int_distribution<unsigned>(1, 8)(rng);
  c.max_mcast_outstanding = std::uniform_int_distribution<unsigned>(1, 4)(rng);
  return c;
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto scripts = random_scripts(cfg, rng);
  return detail::ScenarioRunner<Crossbar>(cfg, std::move(scripts), seed).run();
}

/// Runs given request streams; `Xbar` is Crossbar or a drop-in such as UnicastCrossbar.
template <typename Xbar = Crossbar>
ScenarioResult run_scenario(const ScenarioConfig& cfg, std::vector<ScriptedMaster> scripts,
                            std::uint64_t seed) {
  return detail::ScenarioRunner<Xbar>(cfg, std::move(scripts), seed).run();
}

/**
 * Two masters multicasting to the same two slaves at about the same time,
 * after a short warm-up that leaves the slave arbiters in different
 * states. Without atomic acquisition each mux may pick a different master
 * and the W streams block each other.
 */
inline ScenarioResult run_crossing_scenario(std::uint64_t seed, bool atomic = true) {
  std::mt19937_64 rng(seed);
  ScenarioConfig cfg;
  cfg.masters = 2;
  cfg.slaves = 2;
  cfg.atomic = atomic;
  cfg.issue_prob = 1.0;
  cfg.w_valid_prob = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
  cfg.slave_ready_prob = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
  cfg.limit = 20'000;
  std::uniform_int_distribution<unsigned> beats(1, 8);
  const AddrSet both = AddrSet::of(kScenarioBase, kScenarioRegion);
  std::vector<ScriptedMaster> scripts(2);
  // Warm-up: master 0 writes slave 1 so that slave 1 now favours master 1.
  AwRequest warm;
  warm.id = 1;
  warm.burst_beats = beats(rng);
  warm.target = AddrSet::single(kScenarioBase + kScenarioRegion);
  scripts[0].todo.push_back(warm);
  for (unsigned m = 0; m < 2; ++m) {
    const unsigned rounds = std::uniform_int_distribution<unsigned>(1, 3)(rng);
    for (unsigned r = 0; r < rounds; ++r) {
      AwRequest aw;
      aw.id = m;
      aw.burst_beats = beats(rng);
      aw.target = both;
      scripts[m].todo.push_back(aw);
    }
    scripts[m].not_before = std::uniform_int_distribution<Cycle>(0, 3)(rng);
  }
  scripts[1].not_before += warm.burst_beats + 2;
  return run_scenario(cfg, std::move(scripts), seed);
}

}  // namespace mcast

#endif  // MCAST_TRAFFIC_HPP
