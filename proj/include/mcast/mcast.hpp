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
 * @file mcast.hpp
 * @brief Umbrella header.
 */

#ifndef MCAST_MCAST_HPP
#define MCAST_MCAST_HPP

#include "mcast/errors.hpp"
#include "mcast/port_set.hpp"
#include "mcast/addressing.hpp"
#include "mcast/protocol.hpp"
#include "mcast/trace.hpp"
#include "mcast/link.hpp"
#include "mcast/xbar.hpp"
#include "mcast/baseline_xbar.hpp"
#include "mcast/endpoint.hpp"
#include "mcast/monitor.hpp"
#include "mcast/topology.hpp"
#include "mcast/cluster.hpp"
#include "mcast/network.hpp"
#include "mcast/workloads.hpp"
#include "mcast/traffic.hpp"

#endif  // MCAST_MCAST_HPP
