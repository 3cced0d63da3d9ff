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


#ifndef STREAMDDS__BENCH__KERNELS_HPP_
#define STREAMDDS__BENCH__KERNELS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

#include "streamdds/runtime/instance.hpp"
#include "streamdds/value.hpp"

namespace streamdds::bench
{

/// Image analog dimensions and per-pixel work of the five-node chain.
struct ChainParams
{
  std::size_t width = 1000;
  std::size_t height = 600;
  /// Fraction of the 1000x600 image actually processed.
  double scale = 1.0;
  /// Arithmetic rounds per pixel in each image stage.
  int rounds = 1;

  std::size_t scaled_width() const
  {
    auto w = static_cast<std::size_t>(static_cast<double>(width) * scale);
    return w == 0 ? 1 : w;
  }
  std::size_t pixels() const {return scaled_width() * height;}
};

/// Pure function of (value, index, salt): chunked and whole-image
/// application give identical results.
inline std::uint8_t transform_pixel(std::uint8_t v, std::size_t index, std::uint32_t salt, int rounds)
{
  std::uint32_t x = v ^ salt ^ (static_cast<std::uint32_t>(index) * 2654435761u);
  for (int r = 0; r < rounds; ++r) {
    x = x * 1664525u + 1013904223u;
    x ^= x >> 13;
  }
  return static_cast<std::uint8_t>((x >> 24) ^ v);
}

/// Applies transform_pixel to `n` bytes whose first byte has image index `first`.
inline void transform_bytes(
  std::uint8_t * data, std::size_t n, std::size_t first, std::uint32_t salt, int rounds)
{
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = transform_pixel(data[i], first + i, salt, rounds);
  }
}

/// Running lane estimate: intensity-weighted centroid and mean intensity.
class LaneAccumulator
{
public:
  explicit LaneAccumulator(std::size_t width = 1)
  : width_(width == 0 ? 1 : width) {}

  void reset(std::size_t width)
  {
    *this = LaneAccumulator(width);
  }

  void add(const std::uint8_t * data, std::size_t n, std::size_t first)
  {
    std::size_t col = first % width_;
    std::size_t row = first / width_;
    std::uint64_t row_sum = 0;
    std::uint64_t row_sum_x = 0;
    for (std::size_t i = 0; i < n; ++i) {
      row_sum += data[i];
      row_sum_x += static_cast<std::uint64_t>(data[i]) * col;
      if (++col == width_) {
        flush_row(row_sum, row_sum_x, row);
        col = 0;
        ++row;
      }
    }
    flush_row(row_sum, row_sum_x, row);
    count_ += n;
  }

  MessageValue point() const
  {
    const double w = sum_ > 0.0 ? sum_ : 1.0;
    const double mean = count_ ? sum_ / static_cast<double>(count_) : 0.0;
    return MessageValue{{"x", sum_x_ / w}, {"y", sum_y_ / w}, {"z", mean}};
  }

private:
  void flush_row(std::uint64_t & sum, std::uint64_t & sum_x, std::size_t row)
  {
    sum_ += static_cast<double>(sum);
    sum_x_ += static_cast<double>(sum_x);
    sum_y_ += static_cast<double>(sum) * static_cast<double>(row);
    sum = 0;
    sum_x = 0;
  }

  std::size_t width_;
  std::size_t count_ = 0;
  double sum_ = 0.0;
  double sum_x_ = 0.0;
  double sum_y_ = 0.0;
};

/// Steering command from a lane estimate of an image `width` pixels wide.
inline MessageValue control_command(const MessageValue & lane, std::size_t width)
{
  const double x = lane.at("x").as<double>();
  const double z = lane.at("z").as<double>();
  const double half = static_cast<double>(width) / 2.0;
  MessageValue linear{{"x", 1.0 - z / 255.0}, {"y", 0.0}, {"z", 0.0}};
  MessageValue angular{{"x", 0.0}, {"y", 0.0}, {"z", (half - x) / (half > 0.0 ? half : 1.0)}};
  return MessageValue{{"linear", std::move(linear)}, {"angular", std::move(angular)}};
}

inline MessageValue make_image(std::size_t width, std::size_t height, std::uint32_t seed)
{
  std::vector<std::uint8_t> data(width * height);
  std::uint32_t x = seed * 747796405u + 2891336453u;
  for (auto & b : data) {
    x ^= x << 13;
    x ^= x >> 17;
    x ^= x << 5;
    b = static_cast<std::uint8_t>(x);
  }
  return MessageValue{
    {"height", static_cast<std::uint32_t>(height)},
    {"width", static_cast<std::uint32_t>(width)},
    {"data", std::move(data)}};
}

/// Image stage over a whole message: deserialized in, transformed copy out.
inline MessageValue transform_image(const MessageValue & in, std::uint32_t salt, int rounds)
{
  MessageValue out = in;
  auto & data = out.find("data")->as<std::vector<std::uint8_t>>();
  transform_bytes(data.data(), data.size(), 0, salt, rounds);
  return out;
}

namespace detail
{

/// Word-level walker over an Image frame {height, width, count, bytes...}.
class ImageStream
{
public:
  static constexpr std::size_t kHeaderWords = 3;

  /// Feeds the next chunk of frame words; `on_bytes(ptr, n, first_index)`
  /// is called on the pixel bytes it contains, with header and padding
  /// excluded.
  template<typename F>
  void feed(std::span<std::uint32_t> words, F && on_bytes)
  {
    std::size_t i = 0;
    for (; i < words.size() && pos_ < kHeaderWords; ++i, ++pos_) {
      header_[pos_] = words[i];
    }
    if (i == words.size()) {
      return;
    }
    const std::size_t byte0 = (pos_ - kHeaderWords) * 4;
    const std::size_t chunk_words = words.size() - i;
    pos_ += chunk_words;
    if (byte0 >= count()) {
      return;
    }
    std::size_t n = std::min(chunk_words * 4, count() - byte0);
    on_bytes(reinterpret_cast<std::uint8_t *>(words.data() + i), n, byte0);
  }

  void reset() {pos_ = 0;}
  std::size_t width() const {return header_[1];}
  std::size_t count() const {return header_[2];}

private:
  std::size_t pos_ = 0;
  std::uint32_t header_[kHeaderWords] = {0, 0, 0};
};

}  // namespace detail

/// Dataflow image stage: transforms each chunk as it arrives and forwards it
/// before the rest of the message has been received.
inline NodeKernel::DataflowFn streaming_image_stage(
  std::uint32_t salt, int rounds, std::size_t chunk_words = 4096)
{
  return [salt, rounds, chunk_words](NodeContext & ctx) {
           thread_local std::vector<std::uint32_t> buf;
           buf.resize(chunk_words);
           auto & in = *ctx.subscribers().at(0);
           auto & out = *ctx.publishers().at(0);
           detail::ImageStream walker;
           for (;;) {
             auto r = in.read_words(buf);
             std::span<std::uint32_t> got(buf.data(), r.count);
             walker.feed(
               got, [&](std::uint8_t * p, std::size_t n, std::size_t first) {
                 transform_bytes(p, n, first, salt, rounds);
               });
             out.write_words(got, r.end_of_message);
             if (r.end_of_message) {
               return;
             }
           }
         };
}

/// Dataflow lane stage: accumulates while streaming and publishes the
/// estimate once the image has ended.
inline NodeKernel::DataflowFn streaming_lane_stage(std::size_t chunk_words = 4096)
{
  return [chunk_words](NodeContext & ctx) {
           thread_local std::vector<std::uint32_t> buf;
           buf.resize(chunk_words);
           auto & in = *ctx.subscribers().at(0);
           detail::ImageStream walker;
           std::optional<LaneAccumulator> acc;
           for (;;) {
             auto r = in.read_words(buf);
             walker.feed(
               std::span<std::uint32_t>(buf.data(), r.count),
               [&](std::uint8_t * p, std::size_t n, std::size_t first) {
                 if (!acc) {
                   acc.emplace(walker.width());
                 }
                 acc->add(p, n, first);
               });
             if (r.end_of_message) {
               break;
             }
           }
           if (!acc) {
             acc.emplace(walker.width());
           }
           ctx.publishers().at(0)->publish_blocking(acc->point());
         };
}

/// Pass-through node that forwards `chunk_words` at a time.
inline NodeKernel::DataflowFn streaming_identity(std::size_t chunk_words = 4096)
{
  return [chunk_words](NodeContext & ctx) {
           thread_local std::vector<std::uint32_t> buf;
           buf.resize(chunk_words);
           auto & in = *ctx.subscribers().at(0);
           auto & out = *ctx.publishers().at(0);
           for (;;) {
             auto r = in.read_words(buf);
             out.write_words(std::span<const std::uint32_t>(buf.data(), r.count), r.end_of_message);
             if (r.end_of_message) {
               return;
             }
           }
         };
}

/// Sequential pass-through: full receive, copy, full send.
inline NodeKernel::SequentialFn sequential_identity(std::string in_port, std::string out_port)
{
  return [in_port, out_port](const PortValues & inputs, PortValues & outputs) {
           outputs.insert_or_assign(out_port, inputs.at(in_port));
         };
}

}  // namespace streamdds::bench

#endif  // STREAMDDS__BENCH__KERNELS_HPP_
