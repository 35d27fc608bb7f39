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

// mcast_sim: command-line driver.
//
//   mcast_sim --experiment microbench [--mode hw_mcast,unicast] [--clusters 8,32] [--bytes 32K]
//   mcast_sim --experiment matmul [--config configs/occamy.cfg] [--out results/matmul]
//   mcast_sim --experiment decode --addr 0x01000000 --mask 0x7C0000 [--map configs/occamy.map]
//   mcast_sim --experiment check --trace run.group0.trace
//   mcast_sim --experiment stress --seed 7
//
// Exit status: 0 success, 1 monitor violations or failed checks, 2 bad input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mcast/mcast.hpp"

using namespace mcast;

namespace {

struct Options {
  std::string config;
  std::string experiment = "microbench";
  std::vector<std::string> modes;
  std::vector<unsigned> clusters;
  std::vector<std::string> bytes;
  std::uint64_t seed = 1;
  unsigned scenarios = 1000;
  std::string out;
  std::string trace;
  std::string addr;
  std::string mask = "0";
  std::string map;
  std::vector<std::string> sets;
};

std::uint64_t parse_size(const std::string& s) {
  std::size_t pos = 0;
  std::uint64_t v = std::stoull(s, &pos, 0);
  std::string suffix = s.substr(pos);
  if (suffix == "K" || suffix == "KiB" || suffix == "k") v <<= 10;
  else if (suffix == "M" || suffix == "MiB") v <<= 20;
  else if (!suffix.empty()) throw ConfigError("bad size '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t pos = 0;
  const std::uint64_t v = std::stoull(s, &pos, 0);
  if (pos != s.size()) throw ConfigError("bad number '" + s + "'");
  return v;
}

Topology load(const Options& o) {
  Topology t = o.config.empty() ? Topology{} : load_topology(o.config);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value");
    t.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  t.validate();
  return t;
}

void emit(const Options& o, const std::vector<ResultRow>& rows, const nlohmann::ordered_json& summary) {
  nlohmann::ordered_json j;
  j["experiment"] = o.experiment;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) j["rows"].push_back(to_json(r));
  j["summary"] = summary;
  if (o.out.empty()) {
    write_csv(std::cout, rows);
    return;
  }
  std::ofstream csv(o.out + ".csv");
  std::ofstream js(o.out + ".json");
  if (!csv || !js) throw ConfigError("cannot write output '" + o.out + "'");
  write_csv(csv, rows);
  js << j.dump(2) << '\n';
}

std::size_t count_violations(const std::vector<TrafficReport>& reps) {
  std::size_t n = 0;
  for (const auto& r : reps) {
    for (const auto& v : r.violations) {
      std::cerr << to_json_line(v) << '\n';
      ++n;
    }
  }
  return n;
}

int microbench(const Options& o) {
  const Topology t = load(o);
  MicrobenchSweep sw;
  if (!o.modes.empty()) {
    sw.modes.clear();
    for (const auto& m : o.modes) sw.modes.push_back(mode_from_string(m));
  }
  if (!o.clusters.empty()) sw.clusters = o.clusters;
  if (!o.bytes.empty()) {
    sw.bytes.clear();
    for (const auto& b : o.bytes) sw.bytes.push_back(parse_size(b));
  }
  RunOptions ro;
  ro.trace_dir = o.trace;
  std::vector<TrafficReport> reps;
  const auto rows = run_microbench_sweep(t, sw, ro, &reps);
  const auto s = summarize_microbench(rows);
  nlohmann::ordered_json js;
  auto put = [&](const char* k, const std::optional<double>& v) {
    if (v) js[k] = *v; else js[k] = nullptr;
  };
  put("hw_vs_unicast_at_largest_point", s.hw_speedup_max_point);
  put("amdahl_at_largest_point", s.amdahl_max_point);
  put("hw_vs_sw_geomean_at_most_clusters", s.hw_vs_sw_geomean);
  js["monotonic"] = s.monotonic;
  const std::size_t bad = count_violations(reps);
  js["violations"] = bad;
  emit(o, rows, js);
  return bad == 0 ? 0 : 1;
}

int matmul(const Options& o) {
  const Topology t = load(o);
  RunOptions ro;
  ro.trace_dir = o.trace;
  std::vector<TrafficReport> reps;
  auto rows = run_matmul_variants(t, ro, &reps);
  if (!o.modes.empty()) {
    std::vector<ResultRow> keep;
    for (const auto& r : rows) {
      for (const auto& m : o.modes) {
        if (mode_from_string(m) == r.mode) keep.push_back(r);
      }
    }
    rows = keep;
  }
  nlohmann::ordered_json js;
  for (const auto& r : reps) {
    MatmulSchedule s;
    s.variant = r.mode;
    js[std::string(to_string(r.mode))] = {{"llc_read_bytes", r.llc_read_bytes},
                                          {"expected_llc_read_bytes", expected_llc_read_bytes(t, s)},
                                          {"llc_write_bytes", r.llc_write_bytes},
                                          {"cycles", r.cycles}};
  }
  const std::size_t bad = count_violations(reps);
  js["violations"] = bad;
  emit(o, rows, js);
  return bad == 0 ? 0 : 1;
}

int decode_cmd(const Options& o) {
  if (o.addr.empty()) throw ConfigError("decode needs --addr");
  AddressMap map;
  if (!o.map.empty()) {
    std::ifstream in(o.map);
    if (!in) throw ConfigError("cannot open address map '" + o.map + "'");
    map = parse_address_map(in);
  } else {
    map = load(o).flat_map();
  }
  validate_address_map(map);
  const AddrSet req = AddrSet::of(parse_u64(o.addr), parse_u64(o.mask));
  std::cout << "request " << req << " (" << cardinality(req) << " addresses)\n";
  DecodeResult d;
  try {
    d = decode(req, map);
  } catch (const DecodeError& e) {
    std::cout << "decode error: " << e.what() << '\n';
    return 0;
  }
  if (d.decode_error()) {
    std::cout << "decode error: no slave matches\n";
    return 0;
  }
  std::cout << "slaves " << d.select.size() << ": " << d.select.to_string() << '\n';
  for (const auto& [s, set] : d.per_slave) std::cout << "  slave " << s << " " << set << '\n';
  if (d.residue) std::cout << "residue: part of the request is unmapped\n";
  return 0;
}

int check_cmd(const Options& o) {
  if (o.trace.empty()) throw ConfigError("check needs --trace FILE");
  std::ifstream in(o.trace);
  if (!in) throw ConfigError("cannot open trace '" + o.trace + "'");
  const auto vs = check_trace(in);
  for (const auto& v : vs) std::cout << to_json_line(v) << '\n';
  std::cerr << vs.size() << " violation(s)\n";
  return vs.empty() ? 0 : 1;
}

int stress_cmd(const Options& o) {
  struct Outcome {
    bool ok;
    std::string detail;
  };
  auto judge = [](const ScenarioResult& r, const std::string& what) {
    if (r.quiesced && r.violations.empty() && r.completed == r.issued) return Outcome{true, {}};
    std::string d = what + (r.quiesced ? "" : " did not quiesce");
    if (!r.violations.empty()) d += " " + to_json_line(r.violations.front());
    return Outcome{false, d};
  };
  const auto rnd = parallel_map<Outcome>(o.scenarios, [&](std::size_t i) {
    const std::uint64_t seed = o.seed + i;
    return judge(run_scenario(random_scenario_config(seed), seed), "scenario " + std::to_string(seed));
  });
  const auto cross = parallel_map<Outcome>(100, [&](std::size_t i) {
    const std::uint64_t seed = o.seed + i;
    return judge(run_crossing_scenario(seed), "crossing " + std::to_string(seed));
  });
  std::size_t bad = 0;
  for (const auto* set : {&rnd, &cross}) {
    for (const auto& r : *set) {
      if (!r.ok) {
        ++bad;
        std::cout << r.detail << '\n';
      }
    }
  }
  std::cout << "scenarios " << rnd.size() << " crossing " << cross.size() << " failures " << bad << '\n';
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multicast crossbar simulator"};
  Options o;
  app.add_option("--config", o.config, "Topology file (key = value)");
  app.add_option("--experiment", o.experiment, "Experiment to run")
      ->check(CLI::IsMember({"microbench", "matmul", "decode", "check", "stress"}));
  app.add_option("--mode", o.modes, "Modes: unicast, sw_mcast, hw_mcast")->delimiter(',');
  app.add_option("--clusters", o.clusters, "Cluster counts")->delimiter(',');
  app.add_option("--bytes", o.bytes, "Transfer sizes per destination (e.g. 2K,32K)")->delimiter(',');
  app.add_option("--seed", o.seed, "Seed of the randomized traffic");
  app.add_option("--scenarios", o.scenarios, "Randomized scenarios for stress");
  app.add_option("--out", o.out, "Output prefix; writes PREFIX.csv and PREFIX.json");
  app.add_option("--trace", o.trace, "check: trace file; microbench/matmul: trace directory");
  app.add_option("--addr", o.addr, "decode: base address");
  app.add_option("--mask", o.mask, "decode: don't-care mask");
  app.add_option("--map", o.map, "decode: address map file");
  app.add_option("--set", o.sets, "Override a topology key (key=value)");
  CLI11_PARSE(app, argc, argv);

  try {
    if (o.experiment == "microbench") return microbench(o);
    if (o.experiment == "matmul") return matmul(o);
    if (o.experiment == "decode") return decode_cmd(o);
    if (o.experiment == "check") return check_cmd(o);
    return stress_cmd(o);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
