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


#ifndef STREAMDDS__RUNTIME__PORTS_HPP_
#define STREAMDDS__RUNTIME__PORTS_HPP_

#include <cstddef>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "streamdds/errors.hpp"
#include "streamdds/plan.hpp"
#include "streamdds/runtime/channel.hpp"
#include "streamdds/runtime/clock.hpp"
#include "streamdds/serde.hpp"
#include "streamdds/value.hpp"

namespace streamdds
{

struct PublishRecord
{
  std::uint64_t seq = 0;
  std::int64_t first_sent_ns = 0;
  std::int64_t last_sent_ns = 0;
};

struct ReceiveRecord
{
  std::uint32_t source = 0;
  std::uint64_t seq = 0;
  std::int64_t first_sent_ns = 0;
  std::int64_t first_recv_ns = 0;
  std::int64_t last_recv_ns = 0;
};

namespace detail
{

template<class Record>
class RecordLog
{
public:
  void enable(bool on) {enabled_ = on;}

  void push(const Record & r)
  {
    std::lock_guard<std::mutex> lock(mutex_);
    last_ = r;
    if (enabled_) {
      records_.push_back(r);
    }
    count_.fetch_add(1, std::memory_order_release);
  }

  /// Frames completed since construction or clear(); safe from any thread.
  std::uint64_t count() const {return count_.load(std::memory_order_acquire);}

  std::vector<Record> snapshot() const
  {
    std::lock_guard<std::mutex> lock(mutex_);
    return records_;
  }

  std::optional<Record> last() const
  {
    std::lock_guard<std::mutex> lock(mutex_);
    return last_;
  }

  void clear()
  {
    std::lock_guard<std::mutex> lock(mutex_);
    records_.clear();
    last_.reset();
    count_.store(0, std::memory_order_release);
  }

private:
  mutable std::mutex mutex_;
  bool enabled_ = true;
  std::vector<Record> records_;
  std::optional<Record> last_;
  std::atomic<std::uint64_t> count_{0};
};

}  // namespace detail

/// Writing end of a topic for one node. Not safe for concurrent use.
class Publisher
{
public:
  Publisher(
    std::string topic, std::string label, std::uint32_t source_id,
    const SerializationPlan * plan, StreamChannel * channel)
  : topic_(std::move(topic)), label_(std::move(label)), source_id_(source_id),
    plan_(plan), channel_(channel) {}

  const std::string & topic() const {return topic_;}
  /// `node.port`.
  const std::string & label() const {return label_;}
  std::uint32_t source_id() const {return source_id_;}
  const SerializationPlan & plan() const {return *plan_;}

  /// Returns once every word of the message has been accepted downstream.
  void publish_blocking(const MessageValue & value)
  {
    check_idle();
    serialize_into(value, *plan_, scratch_);
    publish_frame(scratch_);
  }

  /// Enqueues the whole message or nothing; never blocks.
  bool publish_try(const MessageValue & value)
  {
    check_idle();
    serialize_into(value, *plan_, scratch_);
    return publish_frame_try(scratch_);
  }

  void publish_frame(const Frame & frame)
  {
    check_idle();
    const std::int64_t t0 = now_ns();
    channel_->begin_frame({source_id_, seq_, t0});
    finish(t0, channel_->write(frame.words, true));
  }

  bool publish_frame_try(const Frame & frame)
  {
    check_idle();
    const std::int64_t t0 = now_ns();
    if (!channel_->try_write_frame(frame.words, {source_id_, seq_, t0})) {
      return false;
    }
    finish(t0, now_ns());
    return true;
  }

  /// Streams part of a message; the first call opens a frame, and
  /// `end_of_message` closes it. Blocks until the words are accepted.
  void write_words(std::span<const std::uint32_t> words, bool end_of_message = false)
  {
    if (!open_) {
      first_sent_ = now_ns();
      channel_->begin_frame({source_id_, seq_, first_sent_});
      open_ = true;
    }
    const std::int64_t handed_over = channel_->write(words, end_of_message);
    if (end_of_message) {
      open_ = false;
      finish(first_sent_, handed_over);
    }
  }

  void end_message() {write_words({}, true);}

  bool message_open() const {return open_;}
  std::uint64_t published() const {return seq_;}

  std::vector<PublishRecord> records() const {return log_.snapshot();}
  std::optional<PublishRecord> last_record() const {return log_.last();}
  std::uint64_t record_count() const {return log_.count();}
  void clear_records() {log_.clear();}
  void enable_records(bool on) {log_.enable(on);}

private:
  void check_idle() const
  {
    if (open_) {
      throw std::logic_error("publisher " + label_ + " has a partially written message");
    }
  }

  void finish(std::int64_t first_sent, std::int64_t last_sent)
  {
    log_.push({seq_, first_sent, last_sent});
    ++seq_;
  }

  std::string topic_;
  std::string label_;
  std::uint32_t source_id_;
  const SerializationPlan * plan_;
  StreamChannel * channel_;
  Frame scratch_;
  std::uint64_t seq_ = 0;
  bool open_ = false;
  std::int64_t first_sent_ = 0;
  detail::RecordLog<PublishRecord> log_;
};

struct ReadResult
{
  std::size_t count = 0;
  /// The message ended with these words; the next read starts a new one.
  bool end_of_message = false;
};

/// Reading end of a topic for one node. Not safe for concurrent use.
class Subscriber
{
public:
  Subscriber(
    std::string topic, std::string label, const SerializationPlan * plan,
    StreamChannel * channel)
  : topic_(std::move(topic)), label_(std::move(label)), plan_(plan), channel_(channel)
  {
    if (plan_->fixed_size_bytes) {
      scratch_.words.reserve(*plan_->fixed_frame_words());
    }
  }

  const std::string & topic() const {return topic_;}
  const std::string & label() const {return label_;}
  const SerializationPlan & plan() const {return *plan_;}

  /// Blocks until a complete message has arrived and returns the oldest one.
  MessageValue take_blocking()
  {
    take_frame(scratch_);
    return deserialize(scratch_, *plan_);
  }

  /// Returns a message only if one is completely buffered.
  std::optional<MessageValue> take_try()
  {
    if (!take_frame_try(scratch_)) {
      return std::nullopt;
    }
    return deserialize(scratch_, *plan_);
  }

  /// Blocking; reuses `frame`'s storage.
  void take_frame(Frame & frame)
  {
    check_idle();
    channel_->wait_frame();
    const FrameMeta meta = channel_->front_meta();
    frame.words.clear();
    std::int64_t first = 0;
    for (;;) {
      auto words = channel_->peek();
      if (!words.empty()) {
        if (first == 0) {
          first = now_ns();
        }
        frame.words.insert(frame.words.end(), words.begin(), words.end());
        channel_->consume(words.size());
      } else if (channel_->at_frame_end()) {
        break;
      } else {
        channel_->wait_readable();
      }
    }
    finish(meta, first);
  }

  bool take_frame_try(Frame & frame)
  {
    check_idle();
    if (channel_->closed()) {
      throw ShutdownError();
    }
    if (!channel_->front_complete()) {
      return false;
    }
    const FrameMeta meta = channel_->front_meta();
    frame.words.clear();
    const std::int64_t first = now_ns();
    for (auto words = channel_->peek(); !words.empty(); words = channel_->peek()) {
      frame.words.insert(frame.words.end(), words.begin(), words.end());
      channel_->consume(words.size());
    }
    finish(meta, first);
    return true;
  }

  /// Streams the current message into `out`. Blocks until `out` is full or
  /// the message ends; a message with no words yields {0, true}.
  ReadResult read_words(std::span<std::uint32_t> out)
  {
    if (!open_) {
      channel_->wait_frame();
      meta_ = channel_->front_meta();
      first_recv_ = 0;
      open_ = true;
    }
    std::size_t got = 0;
    while (got < out.size()) {
      auto words = channel_->peek();
      if (!words.empty()) {
        if (first_recv_ == 0) {
          first_recv_ = now_ns();
        }
        std::size_t n = std::min(words.size(), out.size() - got);
        std::copy_n(words.begin(), n, out.begin() + static_cast<std::ptrdiff_t>(got));
        channel_->consume(n);
        got += n;
      } else if (channel_->at_frame_end()) {
        break;
      } else {
        channel_->wait_readable();
      }
    }
    if (channel_->at_frame_end()) {
      open_ = false;
      finish(meta_, first_recv_);
      return {got, true};
    }
    return {got, false};
  }

  bool message_open() const {return open_;}
  std::uint64_t taken() const {return taken_;}

  std::vector<ReceiveRecord> records() const {return log_.snapshot();}
  std::optional<ReceiveRecord> last_record() const {return log_.last();}
  std::uint64_t record_count() const {return log_.count();}
  void clear_records() {log_.clear();}
  void enable_records(bool on) {log_.enable(on);}

private:
  void check_idle() const
  {
    if (open_) {
      throw std::logic_error("subscriber " + label_ + " is in the middle of a message");
    }
  }

  void finish(const FrameMeta & meta, std::int64_t first)
  {
    const std::int64_t last = now_ns();
    channel_->finish_frame();
    log_.push({meta.source, meta.seq, meta.first_sent_ns, first == 0 ? last : first, last});
    ++taken_;
  }

  std::string topic_;
  std::string label_;
  const SerializationPlan * plan_;
  StreamChannel * channel_;
  Frame scratch_;
  std::uint64_t taken_ = 0;
  bool open_ = false;
  FrameMeta meta_;
  std::int64_t first_recv_ = 0;
  detail::RecordLog<ReceiveRecord> log_;
};

}  // namespace streamdds

#endif  // STREAMDDS__RUNTIME__PORTS_HPP_
