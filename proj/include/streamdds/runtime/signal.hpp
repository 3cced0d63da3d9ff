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


#ifndef STREAMDDS__RUNTIME__SIGNAL_HPP_
#define STREAMDDS__RUNTIME__SIGNAL_HPP_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <thread>

namespace streamdds
{

/// Edge-free wakeup primitive: waiters re-check a caller predicate after every
/// notify(). A waiter yields a bounded number of times before parking on a
/// condition variable, so blocking operations never spin indefinitely.
class Signal
{
public:
  static constexpr int kDefaultSpins = 64;

  explicit Signal(int spins = kDefaultSpins)
  : spins_(spins) {}

  Signal(const Signal &) = delete;
  Signal & operator=(const Signal &) = delete;

  void notify()
  {
    epoch_.fetch_add(1, std::memory_order_seq_cst);
    if (sleepers_.load(std::memory_order_seq_cst) > 0) {
      std::lock_guard<std::mutex> lock(mutex_);
      cv_.notify_all();
    }
  }

  /// Returns once `ready()` is true. `ready` must become true on shutdown too.
  template<class Ready>
  void wait(Ready && ready)
  {
    for (int i = 0; i < spins_; ++i) {
      if (ready()) {
        return;
      }
      std::this_thread::yield();
    }
    sleepers_.fetch_add(1, std::memory_order_seq_cst);
    struct Leave
    {
      std::atomic<int> & n;
      ~Leave() {n.fetch_sub(1, std::memory_order_seq_cst);}
    } leave{sleepers_};
    std::unique_lock<std::mutex> lock(mutex_);
    for (;;) {
      const std::uint64_t seen = epoch_.load(std::memory_order_seq_cst);
      if (ready()) {
        return;
      }
      cv_.wait(lock, [&] {return epoch_.load(std::memory_order_seq_cst) != seen;});
    }
  }

  int spins() const {return spins_;}

private:
  int spins_;
  std::atomic<std::uint64_t> epoch_{0};
  std::atomic<int> sleepers_{0};
  std::mutex mutex_;
  std::condition_variable cv_;
};

}  // namespace streamdds

#endif  // STREAMDDS__RUNTIME__SIGNAL_HPP_
