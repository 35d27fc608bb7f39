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

// Trace records: one event per line,
//
//   <cycle> <channel> <master> <slave> <id> [key=value ...]
//
// with '-' for a master/slave that does not apply. Channels:
//   REQ  AW head seen by a demux      addr mask beats mcast dests
//   AW   AW accepted from a master    addr mask beats mcast dests
//   AWS  AW forwarded to one slave    addr mask beats mcast
//   CMT  multicast commit             dests
//   W    W beat delivered to a slave  bytes last
//   BS   B received from a slave      resp
//   B    B delivered to a master      resp
//   END  end of simulation

#ifndef MCAST_TRACE_HPP
#define MCAST_TRACE_HPP

#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcast/addressing.hpp"
#include "mcast/errors.hpp"
#include "mcast/port_set.hpp"
#include "mcast/protocol.hpp"

namespace mcast {

enum class Channel { Req, Aw, Aws, Cmt, W, Bs, B, End };

inline std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::Req: return "REQ";
    case Channel::Aw: return "AW";
    case Channel::Aws: return "AWS";
    case Channel::Cmt: return "CMT";
    case Channel::W: return "W";
    case Channel::Bs: return "BS";
    case Channel::B: return "B";
    case Channel::End: return "END";
  }
  return "?";
}

struct TraceRecord {
  std::uint64_t cycle = 0;
  Channel channel = Channel::End;
  std::optional<unsigned> master;
  std::optional<unsigned> slave;
  TxnId id = 0;

  AddrSet target;
  std::uint32_t beats = 0;
  bool mcast = false;
  PortSet dests;
  std::uint32_t bytes = 0;
  bool last = false;
  RespCode resp = RespCode::Okay;
};

using TraceSink = std::function<void(const TraceRecord&)>;

inline std::string format_record(const TraceRecord& r) {
  std::ostringstream os;
  os << r.cycle << ' ' << to_string(r.channel) << ' ';
  if (r.master) os << *r.master; else os << '-';
  os << ' ';
  if (r.slave) os << *r.slave; else os << '-';
  os << ' ' << r.id;
  auto dests = [&] { return r.dests.empty() ? std::string("-") : r.dests.to_string(); };
  switch (r.channel) {
    case Channel::Req:
    case Channel::Aw:
      os << std::hex << " addr=0x" << r.target.base << " mask=0x" << r.target.mask << std::dec
         << " beats=" << r.beats << " mcast=" << int(r.mcast) << " dests=" << dests();
      break;
    case Channel::Aws:
      os << std::hex << " addr=0x" << r.target.base << " mask=0x" << r.target.mask << std::dec
         << " beats=" << r.beats << " mcast=" << int(r.mcast);
      break;
    case Channel::Cmt:
      os << " dests=" << dests();
      break;
    case Channel::W:
      os << " bytes=" << r.bytes << " last=" << int(r.last);
      break;
    case Channel::Bs:
    case Channel::B:
      os << " resp=" << to_string(r.resp);
      break;
    case Channel::End:
      break;
  }
  return os.str();
}

namespace detail {

template <typename T>
T parse_uint(std::string_view s, int base, int lineno) {
  if (base == 16 && (s.starts_with("0x") || s.starts_with("0X"))) s.remove_prefix(2);
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw ParseError("trace line " + std::to_string(lineno) + ": bad number '" +
                     std::string(s) + "'");
  }
  return v;
}

inline std::optional<unsigned> parse_port(std::string_view s, int lineno) {
  if (s == "-") return std::nullopt;
  return parse_uint<unsigned>(s, 10, lineno);
}

inline PortSet parse_ports(std::string_view s, int lineno) {
  PortSet out;
  if (s == "-") return out;
  while (!s.empty()) {
    auto comma = s.find(',');
    auto port = parse_uint<unsigned>(s.substr(0, comma), 10, lineno);
    if (port >= PortSet::kMaxPorts) throw ParseError("port index out of range");
    out.insert(port);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace detail

/// Parses one record. Throws ParseError on malformed input.
inline TraceRecord parse_record(std::string_view line, int lineno = 0) {
  std::vector<std::string_view> tok;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > start) tok.push_back(line.substr(start, pos - start));
  }
  if (tok.size() < 5) {
    throw ParseError("trace line " + std::to_string(lineno) + ": expected at least 5 fields");
  }
  TraceRecord r;
  r.cycle = detail::parse_uint<std::uint64_t>(tok[0], 10, lineno);
  static constexpr Channel kAll[] = {Channel::Req, Channel::Aw, Channel::Aws, Channel::Cmt,
                                     Channel::W,   Channel::Bs, Channel::B,   Channel::End};
  bool known = false;
  for (Channel c : kAll) {
    if (tok[1] == to_string(c)) {
      r.channel = c;
      known = true;
    }
  }
  if (!known) {
    throw ParseError("trace line " + std::to_string(lineno) + ": unknown channel '" +
                     std::string(tok[1]) + "'");
  }
  r.master = detail::parse_port(tok[2], lineno);
  r.slave = detail::parse_port(tok[3], lineno);
  r.id = detail::parse_uint<TxnId>(tok[4], 10, lineno);

  unsigned seen = 0;
  enum : unsigned { kAddr = 1, kMask = 2, kBeats = 4, kMcast = 8, kDests = 16, kBytes = 32,
                    kLast = 64, kResp = 128 };
  for (std::size_t i = 5; i < tok.size(); ++i) {
    auto eq = tok[i].find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("trace line " + std::to_string(lineno) + ": expected key=value");
    }
    auto key = tok[i].substr(0, eq);
    auto val = tok[i].substr(eq + 1);
    if (key == "addr") {
      r.target.base = detail::parse_uint<Addr>(val, 16, lineno);
      seen |= kAddr;
    } else if (key == "mask") {
      r.target.mask = detail::parse_uint<std::uint64_t>(val, 16, lineno);
      seen |= kMask;
    } else if (key == "beats") {
      r.beats = detail::parse_uint<std::uint32_t>(val, 10, lineno);
      seen |= kBeats;
    } else if (key == "mcast") {
      r.mcast = detail::parse_uint<unsigned>(val, 10, lineno) != 0;
      seen |= kMcast;
    } else if (key == "dests") {
      r.dests = detail::parse_ports(val, lineno);
      seen |= kDests;
    } else if (key == "bytes") {
      r.bytes = detail::parse_uint<std::uint32_t>(val, 10, lineno);
      seen |= kBytes;
    } else if (key == "last") {
      r.last = detail::parse_uint<unsigned>(val, 10, lineno) != 0;
      seen |= kLast;
    } else if (key == "resp") {
      auto resp = resp_from_string(val);
      if (!resp) throw ParseError("trace line " + std::to_string(lineno) + ": bad resp");
      r.resp = *resp;
      seen |= kResp;
    } else {
      throw ParseError("trace line " + std::to_string(lineno) + ": unknown key '" +
                       std::string(key) + "'");
    }
  }
  unsigned need = 0;
  switch (r.channel) {
    case Channel::Req:
    case Channel::Aw: need = kAddr | kMask | kBeats | kMcast | kDests; break;
    case Channel::Aws: need = kAddr | kMask | kBeats | kMcast; break;
    case Channel::Cmt: need = kDests; break;
    case Channel::W: need = kBytes | kLast; break;
    case Channel::Bs:
    case Channel::B: need = kResp; break;
    case Channel::End: need = 0; break;
  }
  if ((seen & need) != need) {
    throw ParseError("trace line " + std::to_string(lineno) + ": missing fields for " +
                     std::string(to_string(r.channel)));
  }
  bool needs_master = r.channel != Channel::End;
  bool needs_slave = r.channel == Channel::Aws || r.channel == Channel::W ||
                     r.channel == Channel::Bs;
  if ((needs_master && !r.master) || (needs_slave && !r.slave)) {
    throw ParseError("trace line " + std::to_string(lineno) + ": missing port");
  }
  return r;
}

/// Reads a whole trace; blank lines and '#' comments are skipped.
inline std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.back() == '\r') line.pop_back();
    out.push_back(parse_record(line, lineno));
  }
  return out;
}

}  // namespace mcast

#endif  // MCAST_TRACE_HPP
