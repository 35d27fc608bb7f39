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

#ifndef MCAST_ERRORS_HPP
#define MCAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcast {

/// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MCAST_DEFINE_ERROR(Name)              \
  class Name : public Error {                 \
   public:                                    \
    explicit Name(const std::string& what)    \
        : Error(#Name ": " + what) {}         \
  }

MCAST_DEFINE_ERROR(EncodingError);
MCAST_DEFINE_ERROR(DecodeError);
MCAST_DEFINE_ERROR(CapacityError);
MCAST_DEFINE_ERROR(ProtocolError);
MCAST_DEFINE_ERROR(ConfigError);
MCAST_DEFINE_ERROR(DmaError);
MCAST_DEFINE_ERROR(DomainError);
MCAST_DEFINE_ERROR(ParseError);

#undef MCAST_DEFINE_ERROR

}  // namespace mcast

#endif  // MCAST_ERRORS_HPP
