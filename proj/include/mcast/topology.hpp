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
 * @file topology.hpp
 * @brief Hierarchical system description and its address maps.
 */

#ifndef MCAST_TOPOLOGY_HPP
#define MCAST_TOPOLOGY_HPP

#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mcast/addressing.hpp"
#include "mcast/errors.hpp"

namespace mcast {

struct Topology {
  unsigned num_groups = 8;
  unsigned clusters_per_group = 4;
  Addr cluster_base = 0x0100'0000;
  Addr cluster_stride = 0x4'0000;
  Addr llc_base = 0x7000'0000;
  Addr llc_size = 4ull << 20;
  unsigned beat_bytes = 64;
  double clock_ghz = 1.0;

  unsigned link_latency = 1;
  unsigned llc_latency = 20;
  // Source to LLC and back, LLC access included.
  unsigned round_trip = 30;
  unsigned sw_overhead = 50;
  unsigned max_burst = 4096;
  unsigned dma_outstanding = 8;
  unsigned max_mcast_outstanding = 4;
  unsigned w_fifo_depth = 8;
  unsigned flops_per_cycle = 16;
  bool multicast = true;

  unsigned num_clusters() const { return num_groups * clusters_per_group; }
  unsigned group_of(unsigned cluster) const { return cluster / clusters_per_group; }
  unsigned local_index(unsigned cluster) const { return cluster % clusters_per_group; }
  unsigned leader_of(unsigned group) const { return group * clusters_per_group; }
  Addr cluster_addr(unsigned cluster) const { return cluster_base + Addr{cluster} * cluster_stride; }
  Addr group_addr(unsigned group) const { return cluster_addr(leader_of(group)); }
  Addr group_size() const { return Addr{clusters_per_group} * cluster_stride; }
  unsigned stride_bits() const { return static_cast<unsigned>(std::countr_zero(cluster_stride)); }
  // One-way hop delay of the LLC read path.
  unsigned llc_one_way() const { return (round_trip - llc_latency) / 2; }
  std::uint64_t peak_flops_per_cycle() const { return std::uint64_t{flops_per_cycle} * num_clusters(); }

  /// Cluster whose region holds `a`, if any.
  std::optional<unsigned> cluster_at(Addr a) const {
    if (a < cluster_base) return std::nullopt;
    const Addr idx = (a - cluster_base) / cluster_stride;
    if (idx >= num_clusters()) return std::nullopt;
    return static_cast<unsigned>(idx);
  }

  /// Multicast set covering clusters [first, first + count), count a power of two.
  AddrSet cluster_set(unsigned first, unsigned count, Addr offset = 0) const {
    if (!is_power_of_two(count) || first % count != 0) {
      throw ConfigError("cluster set must be an aligned power-of-two block");
    }
    return AddrSet::of(cluster_addr(first) + offset, (Addr{count} - 1) * cluster_stride);
  }

  void validate() const {
    if (num_groups == 0 || clusters_per_group == 0) throw ConfigError("empty topology");
    if (clusters_per_group + 1 > 63 || num_groups + 1 > 63) {
      throw ConfigError("too many ports on one crossbar");
    }
    if (!is_power_of_two(cluster_stride)) {
      throw ConfigError("cluster_stride must be a power of two");
    }
    if (cluster_base % cluster_stride != 0) {
      throw ConfigError("cluster_base must be aligned to cluster_stride");
    }
    if (multicast && num_groups > 1) {
      if (!is_power_of_two(clusters_per_group)) {
        throw ConfigError("multicast group rules need a power-of-two group size");
      }
      if (cluster_base % group_size() != 0) {
        throw ConfigError("cluster_base must be aligned to the group size");
      }
    }
    if (llc_size == 0) throw ConfigError("llc_size must be positive");
    const Addr cl_end = cluster_base + Addr{num_clusters()} * cluster_stride;
    if (llc_base < cl_end && cluster_base < llc_base + llc_size) {
      throw ConfigError("LLC region overlaps the cluster regions");
    }
    if (beat_bytes == 0 || max_burst < beat_bytes || max_burst % beat_bytes != 0) {
      throw ConfigError("max_burst must be a positive multiple of beat_bytes");
    }
    if (round_trip < llc_latency) throw ConfigError("round_trip shorter than llc_latency");
    if (dma_outstanding == 0) throw ConfigError("dma_outstanding must be positive");
    if (max_mcast_outstanding == 0) throw ConfigError("max_mcast_outstanding must be positive");
    if (flops_per_cycle == 0) throw ConfigError("flops_per_cycle must be positive");
    if (clock_ghz <= 0) throw ConfigError("clock_ghz must be positive");
  }

  /// Cluster regions plus the LLC as seen by a flat decoder (slave = cluster, LLC = num_clusters).
  AddressMap flat_map() const {
    AddressMap map;
    for (unsigned c = 0; c < num_clusters(); ++c) {
      map.push_back({cluster_addr(c), cluster_addr(c) + cluster_stride, c, true});
    }
    map.push_back({llc_base, llc_base + llc_size, num_clusters(), false});
    return map;
  }

  /// Applies one `key = value` setting.
  void set(std::string_view key, std::string_view value) {
    auto it = setters().find(std::string(key));
    if (it == setters().end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    try {
      it->second(*this, std::string(value));
    } catch (const std::logic_error&) {
      throw ConfigError("bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
    }
  }

  void write(std::ostream& os) const {
    os << std::showbase;
    os << "num_groups = " << num_groups << "\n"
       << "clusters_per_group = " << clusters_per_group << "\n"
       << std::hex << "cluster_base = " << cluster_base << "\n"
       << "cluster_stride = " << cluster_stride << "\n"
       << "llc_base = " << llc_base << "\n"
       << "llc_size = " << llc_size << "\n"
       << std::dec << "beat_bytes = " << beat_bytes << "\n"
       << "clock_ghz = " << clock_ghz << "\n"
       << "link_latency = " << link_latency << "\n"
       << "llc_latency = " << llc_latency << "\n"
       << "round_trip = " << round_trip << "\n"
       << "sw_overhead = " << sw_overhead << "\n"
       << "max_burst = " << max_burst << "\n"
       << "dma_outstanding = " << dma_outstanding << "\n"
       << "max_mcast_outstanding = " << max_mcast_outstanding << "\n"
       << "w_fifo_depth = " << w_fifo_depth << "\n"
       << "flops_per_cycle = " << flops_per_cycle << "\n"
       << "multicast = " << (multicast ? "true" : "false") << "\n";
    os << std::noshowbase;
  }

 private:
  using Setter = std::function<void(Topology&, const std::string&)>;

  static std::uint64_t num(const std::string& v) {
    std::size_t pos = 0;
    const auto x = std::stoull(v, &pos, 0);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  }

  static const std::map<std::string, Setter>& setters() {
    auto u = [](unsigned Topology::*f) {
      return Setter([f](Topology& t, const std::string& v) { t.*f = static_cast<unsigned>(num(v)); });
    };
    auto a = [](Addr Topology::*f) {
      return Setter([f](Topology& t, const std::string& v) { t.*f = num(v); });
    };
    static const std::map<std::string, Setter> table = {
        {"num_groups", u(&Topology::num_groups)},
        {"clusters_per_group", u(&Topology::clusters_per_group)},
        {"cluster_base", a(&Topology::cluster_base)},
        {"cluster_stride", a(&Topology::cluster_stride)},
        {"llc_base", a(&Topology::llc_base)},
        {"llc_size", a(&Topology::llc_size)},
        {"beat_bytes", u(&Topology::beat_bytes)},
        {"clock_ghz", [](Topology& t, const std::string& v) {
           std::size_t pos = 0;
           t.clock_ghz = std::stod(v, &pos);
           if (pos != v.size()) throw std::invalid_argument(v);
         }},
        {"link_latency", u(&Topology::link_latency)},
        {"llc_latency", u(&Topology::llc_latency)},
        {"round_trip", u(&Topology::round_trip)},
        {"sw_overhead", u(&Topology::sw_overhead)},
        {"max_burst", u(&Topology::max_burst)},
        {"dma_outstanding", u(&Topology::dma_outstanding)},
        {"max_mcast_outstanding", u(&Topology::max_mcast_outstanding)},
        {"w_fifo_depth", u(&Topology::w_fifo_depth)},
        {"flops_per_cycle", u(&Topology::flops_per_cycle)},
        {"multicast", [](Topology& t, const std::string& v) {
           if (v == "true" || v == "1") t.multicast = true;
           else if (v == "false" || v == "0") t.multicast = false;
           else throw std::invalid_argument(v);
         }},
    };
    return table;
  }
};

namespace detail {
inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}
}  // namespace detail

/// Reads `key = value` lines on top of `base`. Blank lines and '#' comments are skipped.
inline Topology parse_topology(std::istream& in, Topology base = {}) {
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    base.set(detail::trim(std::string_view(t).substr(0, eq)),
             detail::trim(std::string_view(t).substr(eq + 1)));
  }
  base.validate();
  return base;
}

inline Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file '" + path + "'");
  return parse_topology(in);
}

}  // namespace mcast

#endif  // MCAST_TOPOLOGY_HPP
