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


#ifndef STREAMDDS__BENCH__HARNESS_HPP_
#define STREAMDDS__BENCH__HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "streamdds/bench/baseline.hpp"
#include "streamdds/bench/kernels.hpp"
#include "streamdds/bench/report.hpp"
#include "streamdds/bench/stats.hpp"
#include "streamdds/msgdef.hpp"
#include "streamdds/plan.hpp"
#include "streamdds/runtime.hpp"
#include "streamdds/serde.hpp"
#include "streamdds/topology.hpp"

namespace streamdds::bench
{

enum class Subject { Baseline, Streaming };
enum class ChainMode { Sequential, Dataflow };

inline std::string_view subject_name(Subject s)
{
  return s == Subject::Baseline ? "baseline" : "streaming";
}

inline std::string_view mode_name(ChainMode m)
{
  return m == ChainMode::Sequential ? "sequential" : "dataflow";
}

inline Subject parse_subject(std::string_view s)
{
  if (s == "baseline") {
    return Subject::Baseline;
  }
  if (s == "streaming") {
    return Subject::Streaming;
  }
  throw std::invalid_argument("unknown subject '" + std::string(s) + "'");
}

inline ChainMode parse_mode(std::string_view s)
{
  if (s == "sequential") {
    return ChainMode::Sequential;
  }
  if (s == "dataflow") {
    return ChainMode::Dataflow;
  }
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

/// Message types used by the benchmarks, package `bench`.
inline const TypeRegistry & bench_registry()
{
  static const TypeRegistry registry = [] {
      TypeRegistry r;
      r.add(parse_msg_file("uint8[] data\n", "bench/Blob"));
      r.add(parse_msg_file("uint32 height\nuint32 width\nuint8[] data\n", "bench/Image"));
      r.add(parse_msg_file("float64 x\nfloat64 y\nfloat64 z\n", "bench/Point"));
      r.add(parse_msg_file("float64 x\nfloat64 y\nfloat64 z\n", "bench/Vector3"));
      r.add(parse_msg_file("Vector3 linear\nVector3 angular\n", "bench/Twist"));
      return resolve(std::move(r));
    }();
  return registry;
}

inline const SerializationPlan & bench_plan(std::string_view type_name)
{
  static const std::map<std::string, SerializationPlan, std::less<>> plans = [] {
      std::map<std::string, SerializationPlan, std::less<>> m;
      for (const auto & [name, def] : bench_registry()) {
        m.emplace(name, flatten(bench_registry(), name));
      }
      return m;
    }();
  auto it = plans.find(type_name);
  if (it == plans.end()) {
    throw std::out_of_range("unknown bench type '" + std::string(type_name) + "'");
  }
  return it->second;
}

/// Blob whose frame is `size_bytes` long (rounded up to a whole word).
inline MessageValue make_blob(std::size_t size_bytes, std::uint32_t seed)
{
  if (size_bytes < 4) {
    throw std::invalid_argument("message size must be at least 4 bytes");
  }
  std::vector<std::uint8_t> data(size_bytes - 4);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto & b : data) {
    b = static_cast<std::uint8_t>(byte(rng));
  }
  return MessageValue{{"data", std::move(data)}};
}

struct BenchOptions
{
  double warmup_fraction = 0.05;
  std::uint32_t seed = 1;
  /// Passed to the streaming runtime; see RuntimeOptions::spin_yields.
  int spin_yields = Signal::kDefaultSpins;

  RuntimeOptions runtime() const
  {
    RuntimeOptions r;
    r.spin_yields = spin_yields;
    return r;
  }
};

/// One measured configuration.
struct RunResult
{
  /// Transport only: first word sent to last word received.
  Measurement transport;
  /// From before serialization to after deserialization.
  Measurement with_codec;
  std::uint64_t published = 0;
  std::uint64_t received = 0;
};

namespace detail
{

inline Measurement summarize(const std::vector<double> & samples, const BenchOptions & opt)
{
  return Measurement::from(discard_warmup(samples, opt.warmup_fraction));
}

inline void check_conservation(std::uint64_t published, std::uint64_t received, std::string_view what)
{
  if (published != received) {
    throw std::runtime_error(
            std::string(what) + ": " + std::to_string(published) + " messages published, " +
            std::to_string(received) + " received");
  }
}

/// Worker threads that rethrow the first failure on join.
class Workers
{
public:
  ~Workers() {join_quietly();}

  void spawn(std::function<void()> body, std::function<void()> on_error)
  {
    threads_.emplace_back(
      [this, body = std::move(body), on_error = std::move(on_error)] {
        try {
          body();
        } catch (...) {
          {
            std::lock_guard<std::mutex> lock(mutex_);
            if (!error_) {
              error_ = std::current_exception();
            }
          }
          on_error();
        }
      });
  }

  void join()
  {
    join_quietly();
    if (error_) {
      std::rethrow_exception(error_);
    }
  }

  bool failed()
  {
    std::lock_guard<std::mutex> lock(mutex_);
    return error_ != nullptr;
  }

private:
  void join_quietly()
  {
    for (auto & t : threads_) {
      if (t.joinable()) {
        t.join();
      }
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::exception_ptr error_;
};

/// Yields until every counter has reached `target` or a worker failed.
inline void await_all(
  const std::vector<std::atomic<std::uint64_t>> & done, std::uint64_t target, Workers & workers)
{
  for (const auto & d : done) {
    while (d.load(std::memory_order_acquire) < target) {
      if (workers.failed()) {
        return;
      }
      std::this_thread::yield();
    }
  }
}

/// Waits for a port in another thread to log `n` completed frames.
template<class Port>
void await_records(const Port & port, std::uint64_t n)
{
  const auto deadline = Clock::now() + std::chrono::seconds(30);
  while (port.record_count() < n) {
    if (Clock::now() > deadline) {
      throw std::runtime_error("timed out waiting for " + port.label() + " to finish a frame");
    }
    std::this_thread::yield();
  }
}

inline std::string fanout_config(std::size_t subscribers, std::string_view type)
{
  std::string cfg = "node source\n  pub data " + std::string(type) + "\n";
  for (std::size_t i = 0; i < subscribers; ++i) {
    cfg += "node sink" + std::to_string(i) + "\n  sub data " + std::string(type) + "\n";
  }
  return cfg;
}

inline KernelMap external_kernels(const TopologyGraph & graph)
{
  KernelMap kernels;
  for (const auto & n : graph.nodes) {
    kernels.insert_or_assign(n.kernel_id, NodeKernel::external());
  }
  return kernels;
}

inline RunResult run_streaming_transfer(
  std::size_t size, std::size_t reps, std::size_t subs, const BenchOptions & opt)
{
  auto graph = build_topology(parse_config(fanout_config(subs, "bench/Blob")), bench_registry());
  KernelMap kernels = external_kernels(graph);
  RuntimeInstance rt(std::move(graph), kernels, opt.runtime());
  rt.start();
  Publisher & pub = rt.publisher("source", "data");
  const SerializationPlan & plan = pub.plan();
  const MessageValue value = make_blob(size, opt.seed);

  std::vector<std::int64_t> t_start(reps);
  std::vector<std::vector<std::int64_t>> t_decoded(subs, std::vector<std::int64_t>(reps));
  std::vector<std::atomic<std::uint64_t>> done(subs);
  Workers workers;
  for (std::size_t i = 0; i < subs; ++i) {
    Subscriber & sub = rt.subscriber("sink" + std::to_string(i), "data");
    workers.spawn(
      [&, i, &sub = sub] {
        Frame frame;
        for (std::size_t r = 0; r < reps; ++r) {
          sub.take_frame(frame);
          MessageValue got = deserialize(frame, plan);
          t_decoded[i][r] = now_ns();
          done[i].store(r + 1, std::memory_order_release);
        }
      },
      [&rt] {rt.request_shutdown();});
  }

  Frame frame;
  try {
    for (std::size_t r = 0; r < reps && !workers.failed(); ++r) {
      t_start[r] = now_ns();
      serialize_into(value, plan, frame);
      pub.publish_frame(frame);
      await_all(done, r + 1, workers);
    }
  } catch (const ShutdownError &) {
  }
  workers.join();

  const auto sent = pub.records();
  std::vector<double> transport(reps);
  std::vector<double> codec(reps);
  std::uint64_t received = reps;
  for (std::size_t i = 0; i < subs; ++i) {
    const auto recs = rt.subscriber("sink" + std::to_string(i), "data").records();
    received = std::min<std::uint64_t>(received, recs.size());
    for (std::size_t r = 0; r < recs.size() && r < reps; ++r) {
      transport[r] = std::max(transport[r], static_cast<double>(recs[r].last_recv_ns - sent[r].first_sent_ns));
      codec[r] = std::max(codec[r], static_cast<double>(t_decoded[i][r] - t_start[r]));
    }
  }
  rt.shutdown();
  check_conservation(pub.published(), received, "streaming transfer");
  return {summarize(transport, opt), summarize(codec, opt), pub.published(), received};
}

inline RunResult run_baseline_transfer(
  std::size_t size, std::size_t reps, std::size_t subs, const BenchOptions & opt)
{
  BaselineDDS dds(subs, 1);
  const SerializationPlan & plan = bench_plan("bench/Blob");
  const MessageValue value = make_blob(size, opt.seed);

  std::vector<std::int64_t> t_start(reps);
  std::vector<std::int64_t> t_first_sent(reps);
  std::vector<std::vector<std::int64_t>> t_recv(subs, std::vector<std::int64_t>(reps));
  std::vector<std::vector<std::int64_t>> t_decoded(subs, std::vector<std::int64_t>(reps));
  std::vector<std::atomic<std::uint64_t>> done(subs);
  Workers workers;
  for (std::size_t i = 0; i < subs; ++i) {
    workers.spawn(
      [&, i] {
        Frame frame;
        for (std::size_t r = 0; r < reps; ++r) {
          t_recv[i][r] = dds.take(i, frame).end_ns;
          MessageValue got = deserialize(frame, plan);
          t_decoded[i][r] = now_ns();
          done[i].store(r + 1, std::memory_order_release);
        }
      },
      [&dds] {dds.close();});
  }

  Frame frame;
  std::uint64_t published = 0;
  try {
    for (std::size_t r = 0; r < reps && !workers.failed(); ++r) {
      t_start[r] = now_ns();
      serialize_into(value, plan, frame);
      t_first_sent[r] = dds.publish(frame.words).start_ns;
      ++published;
      await_all(done, r + 1, workers);
    }
  } catch (const ShutdownError &) {
  }
  workers.join();

  std::uint64_t received = reps;
  for (const auto & d : done) {
    received = std::min<std::uint64_t>(received, d.load());
  }
  check_conservation(published, received, "baseline transfer");
  std::vector<double> transport(reps);
  std::vector<double> codec(reps);
  for (std::size_t i = 0; i < subs; ++i) {
    for (std::size_t r = 0; r < reps; ++r) {
      transport[r] = std::max(transport[r], static_cast<double>(t_recv[i][r] - t_first_sent[r]));
      codec[r] = std::max(codec[r], static_cast<double>(t_decoded[i][r] - t_start[r]));
    }
  }
  return {summarize(transport, opt), summarize(codec, opt), published, received};
}

inline void fill_row(BenchRow & row, Subject s, RunResult r)
{
  if (s == Subject::Baseline) {
    row.baseline = std::move(r.transport);
    row.baseline_with_codec = std::move(r.with_codec);
  } else {
    row.streaming = std::move(r.transport);
    row.streaming_with_codec = std::move(r.with_codec);
  }
  row.published += r.published;
  row.received += r.received;
}

inline void check_reps(std::size_t reps)
{
  if (reps == 0) {
    throw std::invalid_argument("reps must be at least 1");
  }
}

}  // namespace detail

inline const std::vector<Subject> kBothSubjects{Subject::Baseline, Subject::Streaming};

/// One publisher, `subscribers` draining subscribers, `reps` messages of
/// `size_bytes` sent one at a time.
inline RunResult measure_transfer(
  Subject subject, std::size_t size_bytes, std::size_t reps, std::size_t subscribers = 1,
  const BenchOptions & opt = {})
{
  detail::check_reps(reps);
  if (size_bytes < 4) {
    throw std::invalid_argument("message size must be at least 4 bytes");
  }
  if (subscribers == 0) {
    throw std::invalid_argument("at least one subscriber is required");
  }
  return subject == Subject::Baseline ?
         detail::run_baseline_transfer(size_bytes, reps, subscribers, opt) :
         detail::run_streaming_transfer(size_bytes, reps, subscribers, opt);
}

/// Transfer time against message size, one row per size.
inline BenchReport bench_transfer(
  const std::vector<std::size_t> & sizes, std::size_t reps,
  const std::vector<Subject> & subjects = kBothSubjects, const BenchOptions & opt = {})
{
  BenchReport report{"transfer", "size", {}};
  for (std::size_t size : sizes) {
    BenchRow row;
    row.label = format_size(size);
    for (Subject s : subjects) {
      detail::fill_row(row, s, measure_transfer(s, size, reps, 1, opt));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

/// Transfer time against subscriber count; the duration ends at the last
/// subscriber's receipt.
inline BenchReport bench_fanout(
  const std::vector<std::size_t> & n_subs, std::size_t size_bytes, std::size_t reps,
  const std::vector<Subject> & subjects = kBothSubjects, const BenchOptions & opt = {})
{
  BenchReport report{"fanout", "subscribers", {}};
  for (std::size_t k : n_subs) {
    BenchRow row;
    row.label = std::to_string(k);
    for (Subject s : subjects) {
      detail::fill_row(row, s, measure_transfer(s, size_bytes, reps, k, opt));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

/// Latency of one chain configuration, from the first node's receipt of an
/// image to the last node's publication of its command.
struct ChainResult
{
  Measurement latency;
  std::uint64_t published = 0;
  std::uint64_t received = 0;
  /// The final command of the last rep.
  MessageValue last_command;
};

namespace detail
{

inline constexpr std::uint32_t kSalts[3] = {0x9e3779b9u, 0x85ebca6bu, 0xc2b2ae35u};

inline const char * const kChainConfig =
  "node camera\n"
  "  pub image_raw bench/Image\n"
  "node compensation\n"
  "  sub image_raw bench/Image\n"
  "  pub image_comp bench/Image\n"
  "node blur\n"
  "  sub image_comp bench/Image\n"
  "  pub image_blur bench/Image\n"
  "node projection\n"
  "  sub image_blur bench/Image\n"
  "  pub image_proj bench/Image\n"
  "node lane_following\n"
  "  sub image_proj bench/Image\n"
  "  pub lane bench/Point\n"
  "node control\n"
  "  sub lane bench/Point\n"
  "  pub cmd_vel bench/Twist\n"
  "node actuator\n"
  "  sub cmd_vel bench/Twist\n";

inline MessageValue lane_of(const MessageValue & image)
{
  const auto & data = image.at("data").as<std::vector<std::uint8_t>>();
  LaneAccumulator acc(image.at("width").as<std::uint32_t>());
  acc.add(data.data(), data.size(), 0);
  return acc.point();
}

inline NodeKernel::SequentialFn sequential_image_stage(
  std::string in, std::string out, std::uint32_t salt, int rounds)
{
  return [in, out, salt, rounds](const PortValues & inputs, PortValues & outputs) {
           outputs.insert_or_assign(out, transform_image(inputs.at(in), salt, rounds));
         };
}

inline KernelMap chain_kernels(ChainMode mode, const ChainParams & p)
{
  KernelMap k;
  k.emplace("camera", NodeKernel::external());
  k.emplace("actuator", NodeKernel::external());
  const std::size_t width = p.scaled_width();
  auto control = NodeKernel::sequential(
    [width](const PortValues & in, PortValues & out) {
      out.insert_or_assign("cmd_vel", control_command(in.at("lane"), width));
    });
  k.emplace("control", control);
  if (mode == ChainMode::Sequential) {
    k.emplace("compensation", NodeKernel::sequential(
        sequential_image_stage("image_raw", "image_comp", kSalts[0], p.rounds)));
    k.emplace("blur", NodeKernel::sequential(
        sequential_image_stage("image_comp", "image_blur", kSalts[1], p.rounds)));
    k.emplace("projection", NodeKernel::sequential(
        sequential_image_stage("image_blur", "image_proj", kSalts[2], p.rounds)));
    k.emplace("lane_following", NodeKernel::sequential(
        [](const PortValues & in, PortValues & out) {
          out.insert_or_assign("lane", lane_of(in.at("image_proj")));
        }));
  } else {
    k.emplace("compensation", NodeKernel::dataflow(streaming_image_stage(kSalts[0], p.rounds)));
    k.emplace("blur", NodeKernel::dataflow(streaming_image_stage(kSalts[1], p.rounds)));
    k.emplace("projection", NodeKernel::dataflow(streaming_image_stage(kSalts[2], p.rounds)));
    k.emplace("lane_following", NodeKernel::dataflow(streaming_lane_stage()));
  }
  return k;
}

inline ChainResult run_streaming_chain(
  ChainMode mode, std::size_t reps, const ChainParams & p, const BenchOptions & opt)
{
  auto graph = build_topology(parse_config(kChainConfig), bench_registry());
  RuntimeInstance rt(std::move(graph), chain_kernels(mode, p), opt.runtime());
  rt.start();
  Publisher & camera = rt.publisher("camera", "image_raw");
  Subscriber & actuator = rt.subscriber("actuator", "cmd_vel");
  const Frame image = serialize(make_image(p.scaled_width(), p.height, opt.seed), camera.plan());

  ChainResult result;
  for (std::size_t r = 0; r < reps; ++r) {
    camera.publish_frame(image);
    result.last_command = actuator.take_blocking();
  }
  detail::await_records(rt.publisher("control", "cmd_vel"), reps);
  const auto first = rt.subscriber("compensation", "image_raw").records();
  const auto last = rt.publisher("control", "cmd_vel").records();
  auto faults = rt.faults();
  rt.shutdown();
  if (!faults.empty()) {
    throw std::runtime_error(faults.front());
  }
  std::vector<double> samples(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    samples[r] = static_cast<double>(last.at(r).last_sent_ns - first.at(r).first_recv_ns);
  }
  result.published = camera.published();
  result.received = actuator.taken();
  check_conservation(result.published, result.received, "streaming chain");
  result.latency = summarize(samples, opt);
  return result;
}

inline ChainResult run_baseline_chain(std::size_t reps, const ChainParams & p, const BenchOptions & opt)
{
  // image_raw, image_comp, image_blur, image_proj, lane, cmd_vel
  std::vector<std::unique_ptr<BaselineDDS>> topics;
  for (int i = 0; i < 6; ++i) {
    topics.push_back(std::make_unique<BaselineDDS>(1, 1));
  }
  auto close_all = [&topics] {
      for (auto & t : topics) {
        t->close();
      }
    };
  const SerializationPlan & image_plan = bench_plan("bench/Image");
  const SerializationPlan & point_plan = bench_plan("bench/Point");
  const SerializationPlan & twist_plan = bench_plan("bench/Twist");
  const std::size_t width = p.scaled_width();

  std::vector<std::int64_t> first_recv(reps);
  std::vector<std::int64_t> last_sent(reps);
  Workers workers;
  for (int stage = 0; stage < 3; ++stage) {
    workers.spawn(
      [&, stage] {
        Frame in;
        Frame out;
        for (std::size_t r = 0; r < reps; ++r) {
          auto t = topics[stage]->take(0, in);
          if (stage == 0) {
            first_recv[r] = t.start_ns;
          }
          MessageValue v = transform_image(deserialize(in, image_plan), kSalts[stage], p.rounds);
          serialize_into(v, image_plan, out);
          topics[stage + 1]->publish(out.words);
        }
      }, close_all);
  }
  workers.spawn(
    [&] {
      Frame in;
      Frame out;
      for (std::size_t r = 0; r < reps; ++r) {
        topics[3]->take(0, in);
        serialize_into(lane_of(deserialize(in, image_plan)), point_plan, out);
        topics[4]->publish(out.words);
      }
    }, close_all);
  workers.spawn(
    [&] {
      Frame in;
      Frame out;
      for (std::size_t r = 0; r < reps; ++r) {
        topics[4]->take(0, in);
        serialize_into(control_command(deserialize(in, point_plan), width), twist_plan, out);
        last_sent[r] = topics[5]->publish(out.words).end_ns;
      }
    }, close_all);

  ChainResult result;
  const Frame image = serialize(make_image(width, p.height, opt.seed), image_plan);
  try {
    Frame cmd;
    for (std::size_t r = 0; r < reps && !workers.failed(); ++r) {
      topics[0]->publish(image.words);
      ++result.published;
      topics[5]->take(0, cmd);
      result.last_command = deserialize(cmd, twist_plan);
      ++result.received;
    }
  } catch (const ShutdownError &) {
  }
  workers.join();
  check_conservation(result.published, result.received, "baseline chain");
  std::vector<double> samples(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    samples[r] = static_cast<double>(last_sent[r] - first_recv[r]);
  }
  result.latency = summarize(samples, opt);
  return result;
}

}  // namespace detail

/// Five-node chain: compensation, blur, projection, lane_following, control.
/// The baseline has no dataflow mode.
inline ChainResult bench_chain(
  ChainMode mode, Subject subject, std::size_t reps, const ChainParams & params = {},
  const BenchOptions & opt = {})
{
  detail::check_reps(reps);
  if (subject == Subject::Baseline) {
    if (mode == ChainMode::Dataflow) {
      throw std::invalid_argument("the baseline subject supports only sequential mode");
    }
    return detail::run_baseline_chain(reps, params, opt);
  }
  return detail::run_streaming_chain(mode, reps, params, opt);
}

/// Baseline against streaming in each mode. Rows are execution modes; the
/// dataflow row has no baseline column.
inline BenchReport chain_report(
  const std::vector<ChainMode> & modes, const std::vector<Subject> & subjects, std::size_t reps,
  const ChainParams & params = {}, const BenchOptions & opt = {})
{
  BenchReport report{"chain", "mode", {}};
  for (ChainMode m : modes) {
    BenchRow row;
    row.label = std::string(mode_name(m));
    for (Subject s : subjects) {
      if (s == Subject::Baseline && m == ChainMode::Dataflow) {
        continue;
      }
      auto r = bench_chain(m, s, reps, params, opt);
      (s == Subject::Baseline ? row.baseline : row.streaming) = std::move(r.latency);
      row.published += r.published;
      row.received += r.received;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

/// Pass-through chain of `stages` identity nodes on the streaming runtime,
/// measured from the source's first word sent to the sink's last word received.
inline ChainResult bench_identity_chain(
  std::size_t stages, std::size_t bytes, ChainMode mode, std::size_t reps,
  const BenchOptions & opt = {})
{
  detail::check_reps(reps);
  if (stages == 0) {
    throw std::invalid_argument("at least one stage is required");
  }
  std::string cfg = "node source\n  pub t0 bench/Blob\n";
  KernelMap kernels{{"source", NodeKernel::external()}, {"sink", NodeKernel::external()}};
  for (std::size_t i = 1; i <= stages; ++i) {
    const std::string in = "t" + std::to_string(i - 1);
    const std::string out = "t" + std::to_string(i);
    const std::string name = "stage" + std::to_string(i);
    cfg += "node " + name + "\n  sub " + in + " bench/Blob\n  pub " + out + " bench/Blob\n";
    kernels.emplace(
      name, mode == ChainMode::Dataflow ?
      NodeKernel::dataflow(streaming_identity()) :
      NodeKernel::sequential(sequential_identity(in, out)));
  }
  const std::string last = "t" + std::to_string(stages);
  cfg += "node sink\n  sub " + last + " bench/Blob\n";

  RuntimeInstance rt(build_topology(parse_config(cfg), bench_registry()), kernels, opt.runtime());
  rt.start();
  Publisher & source = rt.publisher("source", "t0");
  Subscriber & sink = rt.subscriber("sink", last);
  const Frame frame = serialize(make_blob(bytes, opt.seed), source.plan());
  ChainResult result;
  Frame got;
  std::vector<std::atomic<std::uint64_t>> done(1);
  std::atomic<bool> altered{false};
  detail::Workers workers;
  workers.spawn(
    [&] {
      for (std::size_t r = 0; r < reps; ++r) {
        sink.take_frame(got);
        if (got.words != frame.words) {
          altered = true;
        }
        done[0].store(r + 1, std::memory_order_release);
      }
    },
    [&rt] {rt.request_shutdown();});
  try {
    for (std::size_t r = 0; r < reps && !workers.failed(); ++r) {
      source.publish_frame(frame);
      detail::await_all(done, r + 1, workers);
    }
  } catch (const ShutdownError &) {
  }
  workers.join();
  if (altered) {
    rt.shutdown();
    throw std::runtime_error("identity chain altered a message");
  }
  const auto sent = source.records();
  const auto recv = sink.records();
  auto faults = rt.faults();
  rt.shutdown();
  if (!faults.empty()) {
    throw std::runtime_error(faults.front());
  }
  std::vector<double> samples(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    samples[r] = static_cast<double>(recv.at(r).last_recv_ns - sent.at(r).first_sent_ns);
  }
  result.published = source.published();
  result.received = sink.taken();
  detail::check_conservation(result.published, result.received, "identity chain");
  result.latency = detail::summarize(samples, opt);
  result.last_command = deserialize(got, source.plan());
  return result;
}

/// Timestamps of one message crossing a single dataflow identity node.
struct OverlapProbe
{
  std::int64_t input_first_recv_ns = 0;
  std::int64_t input_last_recv_ns = 0;
  std::int64_t output_first_sent_ns = 0;
  std::int64_t output_last_sent_ns = 0;
  /// First output word arriving at the downstream subscriber.
  std::int64_t output_first_recv_ns = 0;

  /// The first output word reached the next node before the node had
  /// received its last input word.
  bool overlapped() const {return output_first_recv_ns < input_last_recv_ns;}
};

inline OverlapProbe probe_overlap(std::size_t bytes, std::size_t chunk_words = 4096)
{
  const char * cfg =
    "node source\n  pub in bench/Blob\n"
    "node identity\n  sub in bench/Blob\n  pub out bench/Blob\n"
    "node sink\n  sub out bench/Blob\n";
  KernelMap kernels{
    {"source", NodeKernel::external()},
    {"identity", NodeKernel::dataflow(streaming_identity(chunk_words))},
    {"sink", NodeKernel::external()}};
  RuntimeInstance rt(build_topology(parse_config(cfg), bench_registry()), kernels);
  rt.start();
  Publisher & source = rt.publisher("source", "in");
  Subscriber & sink = rt.subscriber("sink", "out");
  const Frame frame = serialize(make_blob(bytes, 7), source.plan());
  Frame got;
  std::thread reader([&] {sink.take_frame(got);});
  source.publish_frame(frame);
  reader.join();
  detail::await_records(rt.publisher("identity", "out"), 1);
  OverlapProbe probe;
  const auto in = rt.subscriber("identity", "in").records().at(0);
  const auto out = rt.publisher("identity", "out").records().at(0);
  const auto received = sink.records().at(0);
  rt.shutdown();
  if (got.words != frame.words) {
    throw std::runtime_error("identity node altered the message");
  }
  probe.input_first_recv_ns = in.first_recv_ns;
  probe.input_last_recv_ns = in.last_recv_ns;
  probe.output_first_sent_ns = out.first_sent_ns;
  probe.output_last_sent_ns = out.last_sent_ns;
  probe.output_first_recv_ns = received.first_recv_ns;
  return probe;
}

}  // namespace streamdds::bench

#endif  // STREAMDDS__BENCH__HARNESS_HPP_
