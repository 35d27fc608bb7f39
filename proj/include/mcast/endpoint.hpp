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

#ifndef MCAST_ENDPOINT_HPP
#define MCAST_ENDPOINT_HPP

#include <cstdint>
#include <deque>
#include <string_view>
#include <utility>
#include <vector>

#include "mcast/link.hpp"
#include "mcast/protocol.hpp"

namespace mcast {

enum class EndpointKind { ClusterL1, Llc, ErrorSlave };

inline std::string_view to_string(EndpointKind k) {
  switch (k) {
    case EndpointKind::ClusterL1: return "ClusterL1";
    case EndpointKind::Llc: return "LLC";
    case EndpointKind::ErrorSlave: return "ErrorSlave";
  }
  return "?";
}

struct EndpointConfig {
  EndpointKind kind = EndpointKind::ClusterL1;
  // AWs buffered ahead of their data.
  unsigned aw_depth = 4;
  // Cycles from the last W beat to the B response.
  unsigned b_latency = 1;
};

/**
 * Slave-side memory model. Takes at most one AW and one W beat per cycle
 * and answers every burst with exactly one B once its last beat landed.
 * Whether a W beat may be written in a given cycle is decided by the
 * caller (the owning cluster arbitrates its L1 port).
 */
class MemoryEndpoint {
 public:
  MemoryEndpoint(EndpointConfig cfg, Wire* wire) : cfg_(cfg), wire_(wire) {}

  const EndpointConfig& config() const { return cfg_; }

  void take_aw() {
    if (wire_->aw.has_front() && queue_.size() < cfg_.aw_depth) {
      queue_.push_back(wire_->aw.pop());
      ++aws_;
      if (record_) log_.push_back(queue_.back());
    }
  }

  bool wants_write() const { return !queue_.empty() && wire_->w.has_front(); }

  void write_beat(Cycle now) {
    WBeat beat = wire_->w.pop();
    bytes_ += beat.byte_count;
    ++beats_;
    auto& head = queue_.front();
    if (++beats_in_burst_ == head.burst_beats || beat.last) {
      resp_.emplace_back(now + cfg_.b_latency, BResponse{head.id, response(), 0});
      if (beat.last != (beats_in_burst_ == head.burst_beats)) ++framing_errors_;
      beats_in_burst_ = 0;
      queue_.pop_front();
    }
  }

  void respond(Cycle now) {
    if (!resp_.empty() && resp_.front().first <= now && wire_->b.can_push()) {
      wire_->b.push(resp_.front().second);
      resp_.pop_front();
    }
  }

  /// One cycle with the write port granted whenever data is waiting.
  void step(Cycle now, bool port_granted = true) {
    take_aw();
    if (port_granted && wants_write()) write_beat(now);
    respond(now);
  }

  bool idle() const { return queue_.empty() && resp_.empty(); }
  std::uint64_t bytes_written() const { return bytes_; }
  std::uint64_t beats_written() const { return beats_; }
  std::uint64_t aws_received() const { return aws_; }
  std::uint64_t framing_errors() const { return framing_errors_; }

  void record(bool on) { record_ = on; }
  const std::vector<AwRequest>& log() const { return log_; }

 private:
  RespCode response() const {
    return cfg_.kind == EndpointKind::ErrorSlave ? RespCode::DecErr : RespCode::Okay;
  }

  EndpointConfig cfg_;
  Wire* wire_;
  std::deque<AwRequest> queue_;
  std::deque<std::pair<Cycle, BResponse>> resp_;
  std::uint32_t beats_in_burst_ = 0;
  std::uint64_t bytes_ = 0;
  std::uint64_t beats_ = 0;
  std::uint64_t aws_ = 0;
  std::uint64_t framing_errors_ = 0;
  bool record_ = false;
  std::vector<AwRequest> log_;
};

}  // namespace mcast

#endif  // MCAST_ENDPOINT_HPP
