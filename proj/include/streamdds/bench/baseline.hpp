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


#ifndef STREAMDDS__BENCH__BASELINE_HPP_
#define STREAMDDS__BENCH__BASELINE_HPP_

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <deque>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "streamdds/errors.hpp"
#include "streamdds/runtime/clock.hpp"
#include "streamdds/serde.hpp"

namespace streamdds::bench
{

struct TransferTimes
{
  std::int64_t start_ns = 0;
  std::int64_t end_ns = 0;
};

/// Shared-memory pub/sub in the style of a conventional DDS: the publisher
/// copies each sample into a pooled buffer, subscribers copy it back out.
/// Subscribers wait on a condition variable. With one subscriber every payload
/// is moved twice; with k subscribers, 1 + k times.
class BaselineDDS
{
public:
  explicit BaselineDDS(std::size_t subscribers = 1, std::size_t history = 1)
  : queues_(subscribers), pool_(history)
  {
    if (subscribers == 0 || history == 0) {
      throw std::invalid_argument("baseline needs at least one subscriber and one buffer");
    }
    for (std::size_t i = 0; i < history; ++i) {
      free_.push_back(i);
    }
  }

  std::size_t subscriber_count() const {return queues_.size();}

  /// Blocks while every pool buffer is in use (keep-all, reliable).
  TransferTimes publish(std::span<const std::uint32_t> words)
  {
    TransferTimes t;
    t.start_ns = now_ns();
    std::size_t slot;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      space_cv_.wait(lock, [&] {return closed_ || !free_.empty();});
      if (closed_) {
        throw ShutdownError();
      }
      slot = free_.front();
      free_.pop_front();
    }
    auto & buf = pool_[slot].words;
    buf.resize(words.size());
    if (!words.empty()) {
      std::memcpy(buf.data(), words.data(), words.size() * 4);
    }
    bytes_copied_.fetch_add(words.size() * 4, std::memory_order_relaxed);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      pool_[slot].readers = queues_.size();
      for (auto & q : queues_) {
        q.push_back(slot);
      }
    }
    data_cv_.notify_all();
    t.end_ns = now_ns();
    return t;
  }

  /// Blocks until a sample is queued for `subscriber`, then copies it out.
  TransferTimes take(std::size_t subscriber, Frame & out)
  {
    TransferTimes t;
    std::size_t slot;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      auto & q = queues_.at(subscriber);
      data_cv_.wait(lock, [&] {return closed_ || !q.empty();});
      if (closed_) {
        throw ShutdownError();
      }
      slot = q.front();
      q.pop_front();
    }
    t.start_ns = now_ns();
    const auto & buf = pool_[slot].words;
    out.words.resize(buf.size());
    if (!buf.empty()) {
      std::memcpy(out.words.data(), buf.data(), buf.size() * 4);
    }
    bytes_copied_.fetch_add(buf.size() * 4, std::memory_order_relaxed);
    bool released = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (--pool_[slot].readers == 0) {
        free_.push_back(slot);
        released = true;
      }
    }
    if (released) {
      space_cv_.notify_one();
    }
    t.end_ns = now_ns();
    return t;
  }

  void close()
  {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      closed_ = true;
    }
    data_cv_.notify_all();
    space_cv_.notify_all();
  }

  /// Payload bytes moved by publish() and take() so far.
  std::uint64_t bytes_copied() const {return bytes_copied_.load(std::memory_order_relaxed);}

private:
  struct Sample
  {
    std::vector<std::uint32_t> words;
    std::size_t readers = 0;
  };

  std::mutex mutex_;
  std::condition_variable data_cv_;
  std::condition_variable space_cv_;
  std::vector<std::deque<std::size_t>> queues_;
  std::vector<Sample> pool_;
  std::deque<std::size_t> free_;
  bool closed_ = false;
  std::atomic<std::uint64_t> bytes_copied_{0};
};

}  // namespace streamdds::bench

#endif  // STREAMDDS__BENCH__BASELINE_HPP_
