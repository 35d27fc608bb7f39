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

#ifndef MCAST_PROTOCOL_HPP
#define MCAST_PROTOCOL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcast/addressing.hpp"
#include "mcast/errors.hpp"
#include "mcast/port_set.hpp"

namespace mcast {

enum class RespCode : std::uint8_t { Okay = 0, ExOkay = 1, SlvErr = 2, DecErr = 3 };

inline std::string_view to_string(RespCode r) {
  switch (r) {
    case RespCode::Okay: return "OKAY";
    case RespCode::ExOkay: return "EXOKAY";
    case RespCode::SlvErr: return "SLVERR";
    case RespCode::DecErr: return "DECERR";
  }
  return "?";
}

inline std::optional<RespCode> resp_from_string(std::string_view s) {
  if (s == "OKAY") return RespCode::Okay;
  if (s == "EXOKAY") return RespCode::ExOkay;
  if (s == "SLVERR") return RespCode::SlvErr;
  if (s == "DECERR") return RespCode::DecErr;
  return std::nullopt;
}

using TxnId = std::uint32_t;

/// Write-address beat. The target mask travels in the user sideband.
struct AwRequest {
  TxnId id = 0;
  AddrSet target;
  std::uint32_t burst_beats = 1;
  std::uint32_t beat_bytes = 64;
  bool exclusive = false;
  unsigned master_index = 0;
  // Opaque tag for the issuer; not interpreted by the interconnect.
  std::uint64_t tag = 0;

  bool is_multicast() const { return target.mask != 0; }
  std::uint64_t bytes() const { return std::uint64_t{burst_beats} * beat_bytes; }
};

struct WBeat {
  unsigned master_index = 0;
  std::uint32_t byte_count = 64;
  bool last = false;
};

struct BResponse {
  TxnId id = 0;
  RespCode resp = RespCode::Okay;
  unsigned source_slave = 0;
};

/// OR-reduction of the error bit: any SLVERR or DECERR joins to SLVERR.
inline RespCode join_responses(std::span<const RespCode> resps) {
  if (resps.empty()) throw ProtocolError("join over an empty response list");
  bool error = false;
  for (RespCode r : resps) {
    if (r == RespCode::ExOkay) {
      throw ProtocolError("EXOKAY cannot appear in a multicast response");
    }
    error |= (r == RespCode::SlvErr || r == RespCode::DecErr);
  }
  return error ? RespCode::SlvErr : RespCode::Okay;
}

/// ID of the lowest-indexed addressed slave (priority encoder).
inline TxnId pick_join_id(PortSet addressed, const std::map<unsigned, TxnId>& per_slave_ids) {
  if (addressed.empty()) throw ProtocolError("join over an empty slave set");
  auto it = per_slave_ids.find(addressed.lowest());
  if (it == per_slave_ids.end()) throw ProtocolError("missing ID for addressed slave");
  return it->second;
}

enum class MulticastViolation { ExclusiveMulticast, UnmappedTarget, NonMulticastRegion };

inline std::string_view to_string(MulticastViolation v) {
  switch (v) {
    case MulticastViolation::ExclusiveMulticast: return "ExclusiveMulticast";
    case MulticastViolation::UnmappedTarget: return "UnmappedTarget";
    case MulticastViolation::NonMulticastRegion: return "NonMulticastRegion";
  }
  return "?";
}

/// nullopt when the request is legal against the map.
inline std::optional<MulticastViolation> validate_multicast(const AwRequest& aw,
                                                            std::span<const AddressRule> map) {
  if (aw.exclusive && aw.is_multicast()) return MulticastViolation::ExclusiveMulticast;
  DecodeResult d;
  try {
    d = decode(aw.target, map);
  } catch (const DecodeError&) {
    return MulticastViolation::NonMulticastRegion;
  }
  if (d.decode_error() || d.residue) return MulticastViolation::UnmappedTarget;
  return std::nullopt;
}

}  // namespace mcast

#endif  // MCAST_PROTOCOL_HPP
