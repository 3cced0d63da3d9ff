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


#ifndef STREAMDDS__RUNTIME__CHANNEL_HPP_
#define STREAMDDS__RUNTIME__CHANNEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>

#include "streamdds/errors.hpp"
#include "streamdds/runtime/clock.hpp"
#include "streamdds/runtime/signal.hpp"

namespace streamdds
{

/// Sideband travelling with every frame, unchanged through arbiters and broadcasters.
struct FrameMeta
{
  std::uint32_t source = 0;
  std::uint64_t seq = 0;
  std::int64_t first_sent_ns = 0;
};

/// Single-producer single-consumer stream of 32-bit words grouped into frames.
///
/// Words live in a ring of `capacity_words`; at most `max_frames` frames are
/// in flight (begun by the writer, not yet finished by the reader). A write
/// that does not fit in the ring is offered instead: the reader copies those
/// words straight out of the writer's memory and the writer blocks until it
/// has done so. Buffered words therefore never exceed the capacity.
class StreamChannel
{
public:
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  StreamChannel(
    std::size_t capacity_words, std::size_t max_frames,
    std::shared_ptr<Signal> data = nullptr, std::shared_ptr<Signal> space = nullptr)
  : capacity_(capacity_words),
    max_frames_(max_frames),
    ring_(new std::uint32_t[capacity_words]),
    frames_(new Entry[max_frames]),
    data_(data ? std::move(data) : std::make_shared<Signal>()),
    space_(space ? std::move(space) : std::make_shared<Signal>())
  {
    if (capacity_words == 0 || max_frames == 0) {
      throw std::invalid_argument("channel capacity and frame limit must be positive");
    }
  }

  StreamChannel(const StreamChannel &) = delete;
  StreamChannel & operator=(const StreamChannel &) = delete;

  std::size_t capacity_words() const {return capacity_;}
  std::size_t max_frames() const {return max_frames_;}
  Signal & data_signal() const {return *data_;}
  Signal & space_signal() const {return *space_;}

  // ---- shutdown -----------------------------------------------------------

  void close()
  {
    closed_.store(true, std::memory_order_seq_cst);
    data_->notify();
    space_->notify();
  }

  bool closed() const {return closed_.load(std::memory_order_acquire);}

  // ---- writer -------------------------------------------------------------

  bool can_begin_frame() const
  {
    return begun_.load(std::memory_order_relaxed) - finished_.load(std::memory_order_acquire) <
           max_frames_;
  }

  void begin_frame(const FrameMeta & meta)
  {
    wait_space([&] {return can_begin_frame();});
    start_frame(meta);
  }

  /// Copies into the ring when the span fits, otherwise offers it. Returns the
  /// number of offered words; the span must stay valid until wait_accepted().
  /// With `last`, the words also end the frame, like an end-of-packet flag on
  /// the final word: the reader can complete the frame without the writer.
  std::size_t post(std::span<const std::uint32_t> words, bool last = false)
  {
    const std::size_t n = words.size();
    if (n == 0) {
      if (last) {
        end_frame();
      }
      return 0;
    }
    check_open();
    if (n <= ring_free()) {
      copy_to_ring(words);
      if (last) {
        end_frame();
      } else {
        data_->notify();
      }
      return 0;
    }
    const std::uint64_t head = head_.load(std::memory_order_relaxed);
    offer_base_.store(head, std::memory_order_relaxed);
    offer_end_.store(head + n, std::memory_order_relaxed);
    if (last) {
      current_entry().end.store(head + n, std::memory_order_relaxed);
    }
    offer_ptr_.store(words.data(), std::memory_order_release);
    data_->notify();
    return n;
  }

  bool offer_pending() const {return offer_ptr_.load(std::memory_order_acquire) != nullptr;}

  /// Blocks until every offered word has been consumed by the reader.
  void wait_accepted()
  {
    if (!offer_pending_local_()) {
      return;
    }
    // A fully consumed offer completes even if the channel closed meanwhile.
    space_->wait([&] {return closed() || !offer_pending();});
    if (offer_pending()) {
      check_open();
    }
    head_.store(offer_end_.load(std::memory_order_relaxed), std::memory_order_release);
  }

  /// Blocking write of part of the current frame.
  /// Returns when the last of `words` was handed over: the reader's
  /// acceptance time for an offer, otherwise the time of the ring copy.
  std::int64_t write(std::span<const std::uint32_t> words, bool last = false)
  {
    if (post(words, last) > 0) {
      wait_accepted();
      return accepted_ns_.load(std::memory_order_relaxed);
    }
    return now_ns();
  }

  /// Words the channel takes right now without waiting; unlimited while the
  /// reader is blocked waiting for data, since it copies offers directly.
  std::size_t acceptance() const
  {
    if (offer_pending()) {
      return 0;
    }
    if (reader_waiting_.load(std::memory_order_seq_cst)) {
      return kUnlimited;
    }
    return ring_free();
  }

  void end_frame()
  {
    check_open();
    current_entry().end.store(head_.load(std::memory_order_relaxed), std::memory_order_release);
    data_->notify();
  }

  /// All-or-nothing: enqueues the whole frame if a frame slot and enough ring
  /// space are free, otherwise returns false and leaves the channel untouched.
  bool try_write_frame(std::span<const std::uint32_t> words, const FrameMeta & meta)
  {
    check_open();
    if (!can_begin_frame() || words.size() > ring_free()) {
      return false;
    }
    start_frame(meta);
    if (!words.empty()) {
      copy_to_ring(words);
    }
    end_frame();
    return true;
  }

  template<class Pred>
  void wait_space(Pred && pred)
  {
    if (!pred()) {
      space_->wait([&] {return closed() || pred();});
    }
    check_open();
  }

  // ---- reader -------------------------------------------------------------

  bool has_frame() const
  {
    return finished_.load(std::memory_order_relaxed) < begun_.load(std::memory_order_acquire);
  }

  /// Precondition: has_frame().
  const FrameMeta & front_meta() const {return front().meta;}

  /// True once the writer has ended the front frame; its words are then all in the ring.
  bool front_complete() const
  {
    return has_frame() && front().end.load(std::memory_order_acquire) != kOpen;
  }

  /// Words of the front frame available now, as one contiguous span.
  std::span<const std::uint32_t> peek() const
  {
    if (!has_frame()) {
      return {};
    }
    const std::uint64_t limit = front().end.load(std::memory_order_acquire);
    const std::uint64_t t = tail_.load(std::memory_order_relaxed);
    const std::uint64_t h = head_.load(std::memory_order_acquire);
    if (t < h) {
      const std::size_t idx = static_cast<std::size_t>(t % capacity_);
      std::uint64_t stop = std::min(h, limit);
      std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(stop - t, capacity_ - idx));
      return {ring_.get() + idx, n};
    }
    const std::uint32_t * p = offer_ptr_.load(std::memory_order_acquire);
    if (p != nullptr) {
      const std::uint64_t base = offer_base_.load(std::memory_order_relaxed);
      const std::uint64_t end = std::min(offer_end_.load(std::memory_order_relaxed), limit);
      if (t >= base && t < end) {
        return {p + (t - base), static_cast<std::size_t>(end - t)};
      }
    }
    return {};
  }

  /// Releases the first `n` words returned by peek().
  void consume(std::size_t n)
  {
    if (n == 0) {
      return;
    }
    const std::uint64_t t = tail_.load(std::memory_order_relaxed) + n;
    tail_.store(t, std::memory_order_release);
    if (offer_ptr_.load(std::memory_order_acquire) != nullptr &&
      t == offer_end_.load(std::memory_order_relaxed))
    {
      accepted_ns_.store(now_ns(), std::memory_order_relaxed);
      offer_ptr_.store(nullptr, std::memory_order_release);
    }
    space_->notify();
  }

  /// True when every word of the front frame has been consumed and the frame has ended.
  bool at_frame_end() const
  {
    return has_frame() &&
           front().end.load(std::memory_order_acquire) == tail_.load(std::memory_order_relaxed);
  }

  /// Precondition: at_frame_end().
  void finish_frame()
  {
    finished_.store(finished_.load(std::memory_order_relaxed) + 1, std::memory_order_release);
    space_->notify();
  }

  /// Blocks until a frame has begun.
  void wait_frame()
  {
    wait_data([&] {return has_frame();});
  }

  /// Blocks until the front frame has words to peek or has ended.
  void wait_readable()
  {
    wait_data([&] {return !peek().empty() || at_frame_end();});
  }

  template<class Pred>
  void wait_data(Pred && pred)
  {
    if (pred()) {
      check_open();
      return;
    }
    reader_waiting_.store(true, std::memory_order_seq_cst);
    space_->notify();
    data_->wait([&] {return closed() || pred();});
    reader_waiting_.store(false, std::memory_order_seq_cst);
    check_open();
  }

  // ---- introspection ------------------------------------------------------

  /// Words held in the ring (excludes offered words, which the writer still owns).
  std::size_t buffered_words() const
  {
    const std::uint64_t h = head_.load(std::memory_order_acquire);
    const std::uint64_t t = tail_.load(std::memory_order_acquire);
    return h > t ? static_cast<std::size_t>(h - t) : 0;
  }

  std::size_t frames_in_flight() const
  {
    return static_cast<std::size_t>(
      begun_.load(std::memory_order_acquire) - finished_.load(std::memory_order_acquire));
  }

  bool reader_waiting() const {return reader_waiting_.load(std::memory_order_acquire);}

private:
  static constexpr std::uint64_t kOpen = std::numeric_limits<std::uint64_t>::max();

  struct Entry
  {
    FrameMeta meta;
    std::atomic<std::uint64_t> end{kOpen};
  };

  const Entry & front() const
  {
    return frames_[finished_.load(std::memory_order_relaxed) % max_frames_];
  }

  /// Writer side: the most recently begun frame.
  Entry & current_entry()
  {
    return frames_[(begun_.load(std::memory_order_relaxed) - 1) % max_frames_];
  }

  void check_open() const
  {
    if (closed()) {
      throw ShutdownError();
    }
  }

  bool offer_pending_local_() const
  {
    // Writer side: an offer is outstanding until head has been advanced past it.
    return head_.load(std::memory_order_relaxed) < offer_end_.load(std::memory_order_relaxed);
  }

  std::size_t ring_free() const
  {
    const std::uint64_t h = head_.load(std::memory_order_relaxed);
    const std::uint64_t t = tail_.load(std::memory_order_acquire);
    return h > t ? capacity_ - static_cast<std::size_t>(h - t) : capacity_;
  }

  void start_frame(const FrameMeta & meta)
  {
    const std::uint64_t b = begun_.load(std::memory_order_relaxed);
    Entry & e = frames_[b % max_frames_];
    e.meta = meta;
    e.end.store(kOpen, std::memory_order_relaxed);
    begun_.store(b + 1, std::memory_order_release);
    data_->notify();
  }

  void copy_to_ring(std::span<const std::uint32_t> words)
  {
    const std::uint64_t h = head_.load(std::memory_order_relaxed);
    const std::size_t idx = static_cast<std::size_t>(h % capacity_);
    const std::size_t first = std::min(words.size(), capacity_ - idx);
    std::memcpy(ring_.get() + idx, words.data(), first * 4);
    if (first < words.size()) {
      std::memcpy(ring_.get(), words.data() + first, (words.size() - first) * 4);
    }
    head_.store(h + words.size(), std::memory_order_release);
  }

  const std::size_t capacity_;
  const std::size_t max_frames_;
  std::unique_ptr<std::uint32_t[]> ring_;
  std::unique_ptr<Entry[]> frames_;
  std::shared_ptr<Signal> data_;
  std::shared_ptr<Signal> space_;

  alignas(64) std::atomic<std::uint64_t> head_{0};
  std::atomic<std::uint64_t> begun_{0};
  std::atomic<const std::uint32_t *> offer_ptr_{nullptr};
  std::atomic<std::uint64_t> offer_base_{0};
  std::atomic<std::uint64_t> offer_end_{0};
  std::atomic<std::int64_t> accepted_ns_{0};

  alignas(64) std::atomic<std::uint64_t> tail_{0};
  std::atomic<std::uint64_t> finished_{0};
  std::atomic<bool> reader_waiting_{false};

  std::atomic<bool> closed_{false};
};

}  // namespace streamdds

#endif  // STREAMDDS__RUNTIME__CHANNEL_HPP_
