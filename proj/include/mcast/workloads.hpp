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
 * @file workloads.hpp
 * @brief One-to-many microbenchmark, double-buffered matmul and their analytics.
 */

#ifndef MCAST_WORKLOADS_HPP
#define MCAST_WORKLOADS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcast/errors.hpp"
#include "mcast/network.hpp"
#include "mcast/topology.hpp"

namespace mcast {

enum class Mode { Unicast, SwMcast, HwMcast };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Unicast: return "unicast";
    case Mode::SwMcast: return "sw_mcast";
    case Mode::HwMcast: return "hw_mcast";
  }
  return "?";
}

inline Mode mode_from_string(std::string_view s) {
  if (s == "unicast" || s == "baseline") return Mode::Unicast;
  if (s == "sw_mcast" || s == "sw") return Mode::SwMcast;
  if (s == "hw_mcast" || s == "hw") return Mode::HwMcast;
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

struct TrafficReport {
  std::string kernel;
  Mode mode = Mode::Unicast;
  unsigned clusters = 0;
  std::uint64_t bytes = 0;
  Cycle cycles = 0;
  std::uint64_t llc_read_bytes = 0;
  std::uint64_t llc_write_bytes = 0;
  std::uint64_t flops = 0;
  // Bytes written into each cluster's L1, over the network or locally.
  std::vector<std::uint64_t> delivered;
  std::vector<LinkCount> links;
  std::vector<Violation> violations;
  std::uint64_t error_responses = 0;
};

struct RunOptions {
  // When set, one trace file per crossbar is written here.
  std::string trace_dir;
  std::string label;
  bool monitors = true;
  Cycle cycle_limit = 50'000'000;
};

namespace detail {

class TraceFiles {
 public:
  TraceFiles(System& sys, const RunOptions& opt) {
    if (opt.trace_dir.empty()) return;
    std::filesystem::create_directories(opt.trace_dir);
    prefix_ = (std::filesystem::path(opt.trace_dir) / opt.label).string();
    sys.set_trace([this](std::string_view xbar, const TraceRecord& r) {
      auto& f = files_[std::string(xbar)];
      if (!f) f = std::make_unique<std::ofstream>(prefix_ + "." + std::string(xbar) + ".trace");
      *f << format_record(r) << '\n';
    });
  }

  void close(Cycle end) {
    for (auto& [name, f] : files_) {
      TraceRecord r;
      r.cycle = end;
      r.channel = Channel::End;
      *f << format_record(r) << '\n';
    }
  }

 private:
  std::string prefix_;
  std::map<std::string, std::unique_ptr<std::ofstream>> files_;
};

inline void collect(System& sys, TrafficReport& rep) {
  const Topology& t = sys.topology();
  rep.llc_read_bytes = sys.llc_read_bytes();
  rep.llc_write_bytes = sys.llc_write_bytes();
  rep.links = sys.link_counts();
  rep.violations = sys.violations();
  rep.delivered.assign(t.num_clusters(), 0);
  for (unsigned c = 0; c < t.num_clusters(); ++c) {
    rep.delivered[c] = sys.cluster(c).l1().bytes_written() +
                       sys.cluster(c).dma().local_beats() * t.beat_bytes;
    rep.error_responses += sys.cluster(c).dma().error_responses();
  }
}

}  // namespace detail

// Offset of the destination buffer inside each cluster's region.
inline constexpr Addr kMicrobenchDstOffset = 0x1'0000;

/**
 * Cluster 0 sends `bytes` to clusters 0..n-1 (itself included).
 * unicast: one DMA per destination, in order. hw_mcast: a single multicast
 * DMA. sw_mcast: cluster 0 sends to the leader of every other group, then
 * to the rest of its own group; each leader forwards within its group once
 * its copy has landed.
 */
inline TrafficReport run_microbenchmark(const Topology& topo, Mode mode, unsigned n,
                                        std::uint64_t bytes, const RunOptions& opt = {}) {
  topo.validate();
  if (n == 0 || n > topo.num_clusters()) throw ConfigError("cluster count out of range");
  if (bytes == 0 || kMicrobenchDstOffset + bytes > topo.cluster_stride) {
    throw ConfigError("transfer size does not fit a cluster region");
  }
  const unsigned per_group = topo.clusters_per_group;
  if (mode == Mode::HwMcast) {
    if (!is_power_of_two(n)) throw ConfigError("hw_mcast needs a power-of-two cluster count");
    if (!topo.multicast && n > 1) throw ConfigError("hw_mcast needs multicast enabled");
  }
  if (mode == Mode::SwMcast && (n <= per_group || n % per_group != 0)) {
    throw ConfigError("sw_mcast needs a whole number of groups, more than one");
  }

  System sys(topo, opt.monitors);
  detail::TraceFiles traces(sys, opt);
  std::uint64_t done = 0;
  Cycle last = 0;
  auto finished = [&](Cycle t) {
    ++done;
    last = std::max(last, t);
  };
  auto dst = [&](unsigned c) { return AddrSet::single(topo.cluster_addr(c) + kMicrobenchDstOffset); };
  auto send = [&](unsigned from, AddrSet to, Cycle at, std::function<void(Cycle)> then = {}) {
    sys.dma(from).submit(Descriptor{Descriptor::Source::L1, to, bytes,
                                    [&, then](Cycle t) {
                                      finished(t);
                                      if (then) then(t);
                                    }},
                         at);
  };

  switch (mode) {
    case Mode::Unicast:
      for (unsigned c = 0; c < n; ++c) send(0, dst(c), 0);
      break;
    case Mode::HwMcast:
      send(0, topo.cluster_set(0, n, kMicrobenchDstOffset), 0);
      break;
    case Mode::SwMcast: {
      const unsigned groups = n / per_group;
      for (unsigned g = 1; g < groups; ++g) {
        const unsigned leader = topo.leader_of(g);
        send(0, dst(leader), 0, [&, leader, per_group](Cycle t) {
          for (unsigned i = 1; i < per_group; ++i) send(leader, dst(leader + i), t);
        });
      }
      for (unsigned i = 1; i < per_group; ++i) send(0, dst(i), 0);
      send(0, dst(0), 0);
      break;
    }
  }
  std::uint64_t total = mode == Mode::Unicast ? n : 1;
  if (mode == Mode::SwMcast) {
    const std::uint64_t groups = n / per_group;
    total = (groups - 1) * per_group + per_group;
  }

  sys.run([&] { return done == total; }, [](Cycle) {}, opt.cycle_limit);
  sys.finish();
  traces.close(sys.now());

  TrafficReport rep;
  rep.kernel = "microbench";
  rep.mode = mode;
  rep.clusters = n;
  rep.bytes = bytes;
  rep.cycles = last + 1;
  detail::collect(sys, rep);
  return rep;
}

/// Equivalent parallel fraction f solving speedup = 1 / ((1 - f) + f / n).
inline double amdahl_fraction(double speedup, double n) {
  if (!(n > 1)) throw DomainError("amdahl_fraction needs more than one unit");
  if (!(speedup >= 1) || speedup > n) {
    throw DomainError("speedup must lie in [1, n]");
  }
  return (1.0 - 1.0 / speedup) / (1.0 - 1.0 / n);
}

struct MatmulSchedule {
  unsigned m = 256;
  unsigned n = 256;
  unsigned k = 256;
  unsigned elem_bytes = 8;
  unsigned tile_cols = 16;
  Mode variant = Mode::Unicast;
};

/// Closed-form LLC read bytes of a matmul variant.
inline std::uint64_t expected_llc_read_bytes(const Topology& topo, const MatmulSchedule& s) {
  const std::uint64_t a = std::uint64_t{s.m} * s.k * s.elem_bytes;
  const std::uint64_t b = std::uint64_t{s.k} * s.n * s.elem_bytes;
  switch (s.variant) {
    case Mode::Unicast: return a + b * topo.num_clusters();
    case Mode::SwMcast: return a + b * topo.num_groups;
    case Mode::HwMcast: return a + b;
  }
  return 0;
}

/**
 * Double-buffered C = A * B. Cluster c owns a block of m / clusters rows of
 * C and computes it one tile of tile_cols columns at a time, needing the
 * k x tile_cols slice B_t of B for tile t. Its A rows are loaded once.
 *
 * The kernel runs in iterations separated by a global barrier. In
 * iteration i every cluster computes tile i - 1 while the DMAs fetch B_i
 * into the other buffer and write C_{i-2} back to the LLC. Iteration 0
 * fetches B_0 and A; the last one only drains C.
 *
 * baseline: every cluster loads B_i itself.
 * sw_mcast: each group leader loads B_i, then copies it to its group.
 * hw_mcast: cluster 0 multicasts B_i from the LLC to every cluster.
 */
inline TrafficReport run_matmul(const Topology& topo, const MatmulSchedule& s,
                                const RunOptions& opt = {}) {
  topo.validate();
  const unsigned C = topo.num_clusters();
  const unsigned P = topo.clusters_per_group;
  if (s.m == 0 || s.k == 0 || s.tile_cols == 0 || s.m % C != 0 || s.n % s.tile_cols != 0) {
    throw ConfigError("matmul schedule does not divide over the clusters");
  }
  const unsigned rows = s.m / C;
  const unsigned T = s.n / s.tile_cols;
  const std::uint64_t a_bytes = std::uint64_t{rows} * s.k * s.elem_bytes;
  const std::uint64_t b_bytes = std::uint64_t{s.k} * s.tile_cols * s.elem_bytes;
  const std::uint64_t c_bytes = std::uint64_t{rows} * s.tile_cols * s.elem_bytes;
  const std::uint64_t tile_flops = 2ull * rows * s.tile_cols * s.k;
  const Cycle compute = (tile_flops + topo.flops_per_cycle - 1) / topo.flops_per_cycle;

  // L1 layout, identical in every cluster.
  const Addr off_a = 0;
  const Addr off_b[2] = {a_bytes, a_bytes + b_bytes};
  // Two C tile buffers follow the B buffers.
  if (a_bytes + 2 * b_bytes + 2 * c_bytes > topo.cluster_stride) throw ConfigError("matmul buffers exceed the L1 region");
  // LLC layout: A, B pre-tiled (one contiguous slice per tile), C.
  const Addr llc_c = topo.llc_base + std::uint64_t{s.m} * s.k * s.elem_bytes +
                     std::uint64_t{s.k} * s.n * s.elem_bytes;
  if (llc_c + std::uint64_t{s.m} * s.n * s.elem_bytes > topo.llc_base + topo.llc_size) {
    throw ConfigError("matrices do not fit in the LLC");
  }
  if (s.variant == Mode::HwMcast && C > 1 && (!topo.multicast || !is_power_of_two(C))) {
    throw ConfigError("hw_mcast needs multicast and a power-of-two cluster count");
  }

  System sys(topo, opt.monitors);
  detail::TraceFiles traces(sys, opt);

  std::uint64_t outstanding = 0;
  Cycle last_done = 0;
  auto local = [&](unsigned c, Addr off) { return AddrSet::single(topo.cluster_addr(c) + off); };
  auto submit = [&](unsigned c, Descriptor::Source src, AddrSet to, std::uint64_t bytes, Cycle at,
                    std::function<void(Cycle)> then = {}) {
    ++outstanding;
    sys.dma(c).submit(Descriptor{src, to, bytes,
                                 [&, then](Cycle t) {
                                   if (then) then(t);
                                   --outstanding;
                                   last_done = std::max(last_done, t);
                                 }},
                      at);
  };
  auto fetch_b = [&](unsigned t, Cycle at) {
    const Addr buf = off_b[t % 2];
    switch (s.variant) {
      case Mode::Unicast:
        for (unsigned c = 0; c < C; ++c) submit(c, Descriptor::Source::Llc, local(c, buf), b_bytes, at);
        break;
      case Mode::SwMcast:
        for (unsigned g = 0; g < topo.num_groups; ++g) {
          const unsigned leader = topo.leader_of(g);
          submit(leader, Descriptor::Source::Llc, local(leader, buf), b_bytes, at,
                 [&, leader, buf](Cycle done) {
                   for (unsigned i = 1; i < P; ++i) {
                     submit(leader, Descriptor::Source::L1, local(leader + i, buf), b_bytes, done);
                   }
                 });
        }
        break;
      case Mode::HwMcast:
        submit(0, Descriptor::Source::Llc, topo.cluster_set(0, C, buf), b_bytes, at);
        break;
    }
  };

  Cycle start = 0;
  for (unsigned i = 0; i <= T + 1; ++i) {
    if (i < T) fetch_b(i, start);
    if (i == 0) {
      for (unsigned c = 0; c < C; ++c) {
        submit(c, Descriptor::Source::Llc, local(c, off_a), a_bytes, start);
      }
    }
    if (i >= 2) {
      const unsigned t = i - 2;
      for (unsigned c = 0; c < C; ++c) {
        const Addr to = llc_c + (std::uint64_t{c} * T + t) * c_bytes;
        submit(c, Descriptor::Source::L1, AddrSet::single(to), c_bytes, start);
      }
    }
    const Cycle compute_end = (i >= 1 && i <= T) ? start + compute : start;
    sys.run([&] { return outstanding == 0 && sys.now() >= compute_end; }, [](Cycle) {},
            opt.cycle_limit);
    last_done = std::max(last_done, compute_end);
    // Global barrier before the next iteration.
    start = std::max(sys.now(), last_done + topo.sw_overhead);
  }
  sys.finish();
  traces.close(sys.now());

  TrafficReport rep;
  rep.kernel = "matmul";
  rep.mode = s.variant;
  rep.clusters = C;
  rep.bytes = b_bytes;
  rep.cycles = last_done + 1;
  rep.flops = 2ull * s.m * s.n * s.k;
  detail::collect(sys, rep);
  return rep;
}

struct RooflinePoint {
  double oi = 0;                 // FLOP per LLC byte read
  double attainable_gflops = 0;  // min(peak, oi * bandwidth)
  double achieved_gflops = 0;
  double fraction = 0;
};

inline RooflinePoint roofline_point(const TrafficReport& rep, double peak_flops_per_cycle,
                                    double llc_bytes_per_cycle, double clock_ghz = 1.0) {
  if (rep.llc_read_bytes == 0) throw DomainError("no LLC bytes read");
  if (rep.cycles == 0) throw DomainError("zero-cycle report");
  RooflinePoint p;
  p.oi = static_cast<double>(rep.flops) / static_cast<double>(rep.llc_read_bytes);
  const double attainable = std::min(peak_flops_per_cycle, p.oi * llc_bytes_per_cycle);
  const double achieved = static_cast<double>(rep.flops) / static_cast<double>(rep.cycles);
  p.attainable_gflops = attainable * clock_ghz;
  p.achieved_gflops = achieved * clock_ghz;
  p.fraction = achieved / attainable;
  return p;
}

/// Worker count: hardware threads, capped by MCAST_WORKERS when set.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MCAST_WORKERS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Runs fn(0..count-1) on a worker pool; results keep their index order.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t count, Fn fn, unsigned workers = worker_count()) {
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<std::size_t>(std::max(1u, workers), count);
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct ResultRow {
  std::string kernel;
  Mode mode = Mode::Unicast;
  unsigned clusters = 0;
  std::uint64_t bytes = 0;
  std::optional<Cycle> cycles;
  std::optional<double> oi;
  std::optional<double> gflops;
  std::optional<double> speedup;
  std::optional<double> amdahl;
  std::optional<double> roofline_fraction;
  std::size_t violations = 0;
};

struct MicrobenchSweep {
  std::vector<Mode> modes{Mode::Unicast, Mode::SwMcast, Mode::HwMcast};
  std::vector<unsigned> clusters{2, 4, 8, 16, 32};
  std::vector<std::uint64_t> bytes{2048, 4096, 8192, 16384, 32768};
};

/**
 * Full sweep. Combinations sw_mcast cannot run (a single group) come back
 * with empty cycles. Speedups are against unicast at the same point.
 */
inline std::vector<ResultRow> run_microbench_sweep(const Topology& topo, const MicrobenchSweep& sw,
                                                   const RunOptions& opt = {},
                                                   std::vector<TrafficReport>* reports = nullptr) {
  struct Point {
    Mode mode;
    unsigned n;
    std::uint64_t bytes;
  };
  std::vector<Point> pts;
  for (Mode m : sw.modes) {
    for (unsigned n : sw.clusters) {
      for (auto b : sw.bytes) pts.push_back({m, n, b});
    }
  }
  // Unicast references for speedups, computed even if not requested.
  std::vector<Point> all = pts;
  for (unsigned n : sw.clusters) {
    for (auto b : sw.bytes) {
      if (std::find(sw.modes.begin(), sw.modes.end(), Mode::Unicast) == sw.modes.end()) {
        all.push_back({Mode::Unicast, n, b});
      }
    }
  }
  auto runnable = [&](const Point& p) {
    return !(p.mode == Mode::SwMcast &&
             (p.n <= topo.clusters_per_group || p.n % topo.clusters_per_group != 0));
  };
  auto reps = parallel_map<std::optional<TrafficReport>>(all.size(), [&](std::size_t i) {
    const Point& p = all[i];
    if (!runnable(p)) return std::optional<TrafficReport>{};
    RunOptions o = opt;
    o.label = std::string(to_string(p.mode)) + "_n" + std::to_string(p.n) + "_b" + std::to_string(p.bytes);
    return std::optional<TrafficReport>(run_microbenchmark(topo, p.mode, p.n, p.bytes, o));
  });
  std::map<std::pair<unsigned, std::uint64_t>, Cycle> uni;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].mode == Mode::Unicast && reps[i]) uni[{all[i].n, all[i].bytes}] = reps[i]->cycles;
  }
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& p = pts[i];
    ResultRow r;
    r.kernel = "microbench";
    r.mode = p.mode;
    r.clusters = p.n;
    r.bytes = p.bytes;
    if (reps[i]) {
      r.cycles = reps[i]->cycles;
      r.violations = reps[i]->violations.size();
      const double sp = static_cast<double>(uni.at({p.n, p.bytes})) / static_cast<double>(*r.cycles);
      r.speedup = sp;
      if (p.n > 1 && sp >= 1 && sp <= p.n) r.amdahl = amdahl_fraction(sp, p.n);
      if (reports) reports->push_back(*reps[i]);
    }
    rows.push_back(r);
  }
  return rows;
}

/// The three matmul variants; speedups against the baseline.
inline std::vector<ResultRow> run_matmul_variants(const Topology& topo, const RunOptions& opt = {},
                                                  std::vector<TrafficReport>* reports = nullptr) {
  const std::vector<Mode> modes{Mode::Unicast, Mode::SwMcast, Mode::HwMcast};
  auto reps = parallel_map<TrafficReport>(modes.size(), [&](std::size_t i) {
    MatmulSchedule s;
    s.variant = modes[i];
    RunOptions o = opt;
    o.label = "matmul_" + std::string(to_string(modes[i]));
    return run_matmul(topo, s, o);
  });
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& rep = reps[i];
    const auto rp = roofline_point(rep, static_cast<double>(topo.peak_flops_per_cycle()),
                                   topo.beat_bytes, topo.clock_ghz);
    ResultRow r;
    r.kernel = "matmul";
    r.mode = rep.mode;
    r.clusters = rep.clusters;
    r.bytes = rep.llc_read_bytes;
    r.cycles = rep.cycles;
    r.oi = rp.oi;
    r.gflops = rp.achieved_gflops;
    r.speedup = static_cast<double>(reps[0].cycles) / static_cast<double>(rep.cycles);
    r.roofline_fraction = rp.fraction;
    r.violations = rep.violations.size();
    rows.push_back(r);
    if (reports) reports->push_back(rep);
  }
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  auto opt = [&](const std::optional<double>& v) {
    if (!v) return std::string("NA");
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(4);
    s << *v;
    return s.str();
  };
  os << "kernel,mode,clusters,bytes,cycles,oi,gflops,speedup,amdahl,roofline_fraction\n";
  for (const auto& r : rows) {
    os << r.kernel << ',' << to_string(r.mode) << ',' << r.clusters << ',' << r.bytes << ','
       << (r.cycles ? std::to_string(*r.cycles) : std::string("NA")) << ',' << opt(r.oi) << ','
       << opt(r.gflops) << ',' << opt(r.speedup) << ',' << opt(r.amdahl) << ','
       << opt(r.roofline_fraction) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const ResultRow& r) {
  nlohmann::ordered_json j;
  auto put = [&](const char* k, const std::optional<double>& v) {
    if (v) j[k] = *v; else j[k] = nullptr;
  };
  j["kernel"] = r.kernel;
  j["mode"] = to_string(r.mode);
  j["clusters"] = r.clusters;
  j["bytes"] = r.bytes;
  if (r.cycles) j["cycles"] = *r.cycles; else j["cycles"] = nullptr;
  put("oi", r.oi);
  put("gflops", r.gflops);
  put("speedup", r.speedup);
  put("amdahl", r.amdahl);
  put("roofline_fraction", r.roofline_fraction);
  j["violations"] = r.violations;
  return j;
}

/// Summary figures of a microbenchmark sweep.
struct MicrobenchSummary {
  std::optional<double> hw_speedup_max_point;  // at the largest size and cluster count
  std::optional<double> amdahl_max_point;
  std::optional<double> hw_vs_sw_geomean;      // over sizes, at the largest cluster count
  bool monotonic = true;
};

inline MicrobenchSummary summarize_microbench(const std::vector<ResultRow>& rows) {
  MicrobenchSummary s;
  unsigned nmax = 0;
  std::uint64_t bmax = 0;
  std::map<std::tuple<Mode, unsigned, std::uint64_t>, Cycle> cyc;
  for (const auto& r : rows) {
    nmax = std::max(nmax, r.clusters);
    bmax = std::max(bmax, r.bytes);
    if (r.cycles) cyc[{r.mode, r.clusters, r.bytes}] = *r.cycles;
  }
  for (const auto& r : rows) {
    if (r.mode == Mode::HwMcast && r.clusters == nmax && r.bytes == bmax) {
      s.hw_speedup_max_point = r.speedup;
      s.amdahl_max_point = r.amdahl;
    }
  }
  double log_sum = 0;
  unsigned count = 0;
  for (const auto& [key, hw] : cyc) {
    auto [m, n, b] = key;
    if (m != Mode::HwMcast) continue;
    auto sw = cyc.find({Mode::SwMcast, n, b});
    auto uni = cyc.find({Mode::Unicast, n, b});
    if (sw != cyc.end() && n == nmax) {
      log_sum += std::log(static_cast<double>(sw->second) / static_cast<double>(hw));
      ++count;
    }
    if (sw != cyc.end() && hw > sw->second) s.monotonic = false;
    if (uni != cyc.end() && hw > uni->second) s.monotonic = false;
    if (sw != cyc.end() && uni != cyc.end() && sw->second > uni->second) s.monotonic = false;
  }
  if (count > 0) s.hw_vs_sw_geomean = std::exp(log_sum / count);
  return s;
}

}  // namespace mcast

#endif  // MCAST_WORKLOADS_HPP
