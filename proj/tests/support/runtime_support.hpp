// Copyright 2026 The streamdds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef STREAMDDS_TEST__RUNTIME_SUPPORT_HPP_
#define STREAMDDS_TEST__RUNTIME_SUPPORT_HPP_

#include <chrono>
#include <functional>
#include <string>
#include <thread>

#include "streamdds/msgdef.hpp"
#include "streamdds/runtime.hpp"
#include "streamdds/topology.hpp"

namespace streamdds::testing
{

inline TypeRegistry fixture_registry()
{
  return resolve(load_msg_dir(std::string(STREAMDDS_FIXTURES_DIR) + "/msgs"));
}

inline TopologyGraph compile_text(const std::string & cfg)
{
  return build_topology(parse_config(cfg), fixture_registry());
}

/// Kernel map with every node of `graph` external.
inline KernelMap all_external(const TopologyGraph & graph)
{
  KernelMap kernels;
  for (const auto & n : graph.nodes) {
    kernels.insert_or_assign(n.kernel_id, NodeKernel::external());
  }
  return kernels;
}

/// Polls `pred` until true or `timeout` elapses.
inline bool eventually(
  const std::function<bool()> & pred,
  std::chrono::milliseconds timeout = std::chrono::milliseconds(5000))
{
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < deadline) {
    if (pred()) {
      return true;
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
  }
  return pred();
}

inline MessageValue int32_msg(std::int32_t v) {return MessageValue{{"data", v}};}

}  // namespace streamdds::testing

#endif  // STREAMDDS_TEST__RUNTIME_SUPPORT_HPP_
