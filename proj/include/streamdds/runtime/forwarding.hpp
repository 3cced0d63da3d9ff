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


#ifndef STREAMDDS__RUNTIME__FORWARDING_HPP_
#define STREAMDDS__RUNTIME__FORWARDING_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "streamdds/errors.hpp"
#include "streamdds/runtime/channel.hpp"
#include "streamdds/runtime/signal.hpp"

namespace streamdds
{

struct ArbiterStats
{
  /// Frames forwarded per input.
  std::vector<std::atomic<std::uint64_t>> served;

  explicit ArbiterStats(std::size_t inputs)
  : served(inputs) {}
};

/// N-to-1 merge at frame granularity. Ready inputs (a frame has begun) are
/// served round-robin starting after the last served input; once a frame is
/// selected, all of its words go out before any other input is considered.
/// All inputs must share one data signal. Returns on shutdown.
inline void run_arbiter(
  const std::vector<StreamChannel *> & inputs, StreamChannel & output,
  ArbiterStats * stats = nullptr)
{
  if (inputs.size() < 2) {
    throw std::invalid_argument("arbiter needs at least two inputs");
  }
  Signal & ready_signal = inputs.front()->data_signal();
  const std::size_t n = inputs.size();
  std::size_t last = n - 1;
  try {
    for (;;) {
      std::size_t pick = n;
      auto select = [&] {
          for (std::size_t k = 1; k <= n; ++k) {
            std::size_t i = (last + k) % n;
            if (inputs[i]->has_frame()) {
              pick = i;
              return true;
            }
          }
          return false;
        };
      if (!select()) {
        ready_signal.wait([&] {return output.closed() || inputs.front()->closed() || select();});
        if (pick == n) {
          return;
        }
      }
      StreamChannel & in = *inputs[pick];
      last = pick;
      output.begin_frame(in.front_meta());
      for (;;) {
        auto words = in.peek();
        if (!words.empty()) {
          output.write(words);
          in.consume(words.size());
        } else if (in.at_frame_end()) {
          break;
        } else {
          in.wait_readable();
        }
      }
      output.end_frame();
      in.finish_frame();
      if (stats != nullptr) {
        stats->served[pick].fetch_add(1, std::memory_order_relaxed);
      }
    }
  } catch (const ShutdownError &) {
  }
}

/// 1-to-M replication. Words advance in lockstep: a chunk is forwarded only
/// when every output can take it, so the slowest consumer paces all of them.
/// All outputs must share one space signal. Returns on shutdown.
inline void run_broadcaster(StreamChannel & input, const std::vector<StreamChannel *> & outputs)
{
  if (outputs.size() < 2) {
    throw std::invalid_argument("broadcaster needs at least two outputs");
  }
  Signal & space = outputs.front()->space_signal();
  auto any_closed = [&] {return input.closed() || outputs.front()->closed();};
  auto min_acceptance = [&] {
      std::size_t m = StreamChannel::kUnlimited;
      for (auto * o : outputs) {
        m = std::min(m, o->acceptance());
      }
      return m;
    };
  try {
    for (;;) {
      input.wait_frame();
      auto all_can_begin = [&] {
          return std::all_of(
            outputs.begin(), outputs.end(), [](auto * o) {return o->can_begin_frame();});
        };
      if (!all_can_begin()) {
        space.wait([&] {return any_closed() || all_can_begin();});
      }
      for (auto * o : outputs) {
        o->begin_frame(input.front_meta());
      }
      for (;;) {
        auto words = input.peek();
        if (!words.empty()) {
          std::size_t take = min_acceptance();
          if (take == 0) {
            space.wait([&] {return any_closed() || (take = min_acceptance()) > 0;});
            if (any_closed()) {
              throw ShutdownError();
            }
          }
          words = words.first(std::min(words.size(), take));
          for (auto * o : outputs) {
            o->post(words);
          }
          for (auto * o : outputs) {
            o->wait_accepted();
          }
          input.consume(words.size());
        } else if (input.at_frame_end()) {
          break;
        } else {
          input.wait_readable();
        }
      }
      for (auto * o : outputs) {
        o->end_frame();
      }
      input.finish_frame();
    }
  } catch (const ShutdownError &) {
  }
}

}  // namespace streamdds

#endif  // STREAMDDS__RUNTIME__FORWARDING_HPP_
