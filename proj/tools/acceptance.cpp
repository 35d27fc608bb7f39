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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcast/baseline_xbar.hpp"
#include "mcast/mcast.hpp"
#include "support/oracle.hpp"

using namespace mcast;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool within(double v, double target, double rel) { return std::abs(v - target) <= rel * target; }

Outcome encoding_oracle() {
  const auto t0 = Clock::now();
  oracle::Tally t;
  oracle::check_pairs<7>(t);
  oracle::check_requests_vs_regions<10>(t);
  oracle::check_decode<10>(t, oracle::uniform_map(10));
  oracle::check_decode<10>(t, oracle::mixed_map(10));
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << t.cases << " cases, " << t.failures << " mismatches, " << fmt("%.1f s", secs);
  if (t.failures) os << ", first: " << t.first_failure;
  return {t.failures == 0 && secs < 60.0, os.str()};
}

struct MatmulResults {
  std::vector<TrafficReport> reps;
  std::vector<ResultRow> rows;
  double secs = 0;
};

const MatmulResults& matmul_results() {
  static const MatmulResults r = [] {
    MatmulResults out;
    const auto t0 = Clock::now();
    out.rows = run_matmul_variants(Topology{}, {}, &out.reps);
    out.secs = seconds_since(t0);
    return out;
  }();
  return r;
}

Outcome byte_accounting() {
  const Topology topo;
  const auto& m = matmul_results();
  const std::uint64_t kib = 1024;
  const std::uint64_t want[3] = {32 * 16 * kib + 32 * 512 * kib, 32 * 16 * kib + 8 * 512 * kib,
                                 32 * 16 * kib + 512 * kib};
  bool ok = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < 3; ++i) {
    MatmulSchedule s;
    s.variant = m.reps[i].mode;
    ok = ok && m.reps[i].llc_read_bytes == want[i] && expected_llc_read_bytes(topo, s) == want[i];
    os << to_string(m.reps[i].mode) << " " << m.reps[i].llc_read_bytes << " B; ";
  }
  const double oi_hw = *m.rows[2].oi / *m.rows[0].oi;
  const double oi_sw = *m.rows[1].oi / *m.rows[0].oi;
  ok = ok && oi_hw == 16.5 && within(oi_sw, 3.7, 0.03);
  os << "OI ratio hw " << fmt("%.4f", oi_hw) << ", sw " << fmt("%.4f", oi_sw);
  return {ok, os.str()};
}

Outcome roofline_baseline() {
  const auto& row = matmul_results().rows[0];
  const bool ok = within(*row.gflops, 114.4, 0.10) && *row.roofline_fraction >= 0.85;
  return {ok, fmt("baseline %.1f GFLOPS", *row.gflops) +
                  fmt(", %.1f%% of roofline", 100 * *row.roofline_fraction)};
}

Outcome matmul_gains() {
  const auto& m = matmul_results();
  const double hw_base = *m.rows[2].speedup;
  const double hw_sw = static_cast<double>(*m.rows[1].cycles) / static_cast<double>(*m.rows[2].cycles);
  const double per_variant = m.secs / 3.0;
  bool ok = within(hw_base, 3.4, 0.15) && hw_sw >= 1.25 && per_variant < 300.0;
  for (const auto& r : m.rows) ok = ok && r.violations == 0;
  return {ok, fmt("hw/baseline %.2fx", hw_base) + fmt(", hw/sw %.2fx", hw_sw) +
                  fmt(", sw/baseline %.2fx", *m.rows[1].speedup) +
                  fmt(", %.1f s per variant", per_variant)};
}

Outcome microbench_band() {
  const auto rows = run_microbench_sweep(Topology{}, MicrobenchSweep{});
  const auto s = summarize_microbench(rows);
  std::size_t violations = 0;
  for (const auto& r : rows) violations += r.violations;
  const bool ok = s.hw_speedup_max_point && *s.hw_speedup_max_point >= 13.5 * 0.85 &&
                  *s.hw_speedup_max_point <= 16.2 * 1.15 && s.amdahl_max_point &&
                  *s.amdahl_max_point >= 0.93 && s.hw_vs_sw_geomean &&
                  within(*s.hw_vs_sw_geomean, 5.6, 0.25) && s.monotonic && violations == 0;
  std::ostringstream os;
  os << fmt("hw/unicast %.2fx", s.hw_speedup_max_point.value_or(NAN))
     << fmt(", amdahl %.4f", s.amdahl_max_point.value_or(NAN))
     << fmt(", hw/sw geomean %.2fx", s.hw_vs_sw_geomean.value_or(NAN))
     << ", monotonic " << (s.monotonic ? "yes" : "no") << ", " << violations << " violations";
  return {ok, os.str()};
}

Outcome deadlock_freedom() {
  const auto t0 = Clock::now();
  const unsigned random_n = 1000;
  const unsigned crossing_n = 100;
  auto random = parallel_map<ScenarioResult>(random_n, [](std::size_t i) {
    return run_scenario(random_scenario_config(i), i);
  });
  auto crossing = parallel_map<ScenarioResult>(crossing_n, [](std::size_t i) {
    return run_crossing_scenario(i, true);
  });
  unsigned stuck = 0, dirty = 0, max_ports = 0;
  for (std::size_t i = 0; i < random.size(); ++i) {
    const auto cfg = random_scenario_config(i);
    max_ports = std::max({max_ports, cfg.masters, cfg.slaves});
  }
  for (const auto* set : {&random, &crossing}) {
    for (const auto& r : *set) {
      stuck += !r.quiesced || r.completed != r.issued;
      dirty += !r.violations.empty();
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << random_n << " random (up to " << max_ports << " ports) + " << crossing_n
     << " crossing scenarios, " << stuck << " stuck, " << dirty << " with violations, "
     << fmt("%.1f s", secs);
  return {stuck == 0 && dirty == 0 && secs < 600.0, os.str()};
}

Outcome amdahl_point() {
  const double f = amdahl_fraction(16.2, 32);
  return {std::abs(f - 0.9685) <= 0.0005, fmt("amdahl_fraction(16.2, 32) = %.5f", f)};
}

Outcome backward_compat() {
  const unsigned n = 200;
  auto diffs = parallel_map<int>(n, [](std::size_t seed) {
    ScenarioConfig cfg = random_scenario_config(seed);
    cfg.multicast = false;
    cfg.mcast_prob = 0.0;
    std::mt19937_64 rng(seed);
    const auto scripts = random_scripts(cfg, rng);
    const auto a = run_scenario<Crossbar>(cfg, scripts, seed);
    const auto b = run_scenario<UnicastCrossbar>(cfg, scripts, seed);
    return (a.quiesced && b.quiesced && a.b_cycles == b.b_cycles) ? 0 : 1;
  });
  int mismatches = 0;
  for (int d : diffs) mismatches += d;
  return {mismatches == 0, std::to_string(n) + " unicast scenarios, " + std::to_string(mismatches) +
                               " with differing B cycles"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"encoding oracle equivalence", encoding_oracle},
      {"byte accounting exactness", byte_accounting},
      {"roofline baseline", roofline_baseline},
      {"multicast matmul gains", matmul_gains},
      {"microbenchmark band", microbench_band},
      {"deadlock freedom", deadlock_freedom},
      {"amdahl fraction", amdahl_point},
      {"backward compatibility", backward_compat},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
