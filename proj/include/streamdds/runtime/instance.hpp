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


#ifndef STREAMDDS__RUNTIME__INSTANCE_HPP_
#define STREAMDDS__RUNTIME__INSTANCE_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "streamdds/errors.hpp"
#include "streamdds/runtime/channel.hpp"
#include "streamdds/runtime/forwarding.hpp"
#include "streamdds/runtime/ports.hpp"
#include "streamdds/runtime/signal.hpp"
#include "streamdds/topology.hpp"

namespace streamdds
{

/// Messages keyed by port name.
using PortValues = std::map<std::string, MessageValue, std::less<>>;

class NodeContext
{
public:
  NodeContext(std::string name, const std::atomic<bool> * stop)
  : name_(std::move(name)), stop_(stop) {}

  const std::string & name() const {return name_;}

  Publisher & publisher(std::string_view port) const
  {
    for (auto * p : publishers_) {
      if (port_of(p->label()) == port) {
        return *p;
      }
    }
    throw std::out_of_range("node '" + name_ + "' has no publisher port '" + std::string(port) + "'");
  }

  Subscriber & subscriber(std::string_view port) const
  {
    for (auto * s : subscribers_) {
      if (port_of(s->label()) == port) {
        return *s;
      }
    }
    throw std::out_of_range("node '" + name_ + "' has no subscriber port '" + std::string(port) + "'");
  }

  /// Declaration order.
  const std::vector<Publisher *> & publishers() const {return publishers_;}
  const std::vector<Subscriber *> & subscribers() const {return subscribers_;}

  bool stop_requested() const {return stop_->load(std::memory_order_acquire);}

private:
  friend class RuntimeInstance;

  static std::string_view port_of(std::string_view label)
  {
    return label.substr(label.find('.') + 1);
  }

  std::string name_;
  const std::atomic<bool> * stop_;
  std::vector<Publisher *> publishers_;
  std::vector<Subscriber *> subscribers_;
};

/// Node body plus execution mode.
///
/// Sequential: each iteration takes one whole message from every subscriber
/// port (declaration order), runs the body, then publishes whatever the body
/// put in `outputs`, in port declaration order.
/// Dataflow: the body is called repeatedly with direct access to the ports and
/// may interleave word-level reads and writes.
/// External: no execution context; the caller drives the ports through
/// RuntimeInstance::publisher() / subscriber().
class NodeKernel
{
public:
  enum class Mode { Sequential, Dataflow, External };

  using SequentialFn = std::function<void(const PortValues & inputs, PortValues & outputs)>;
  using DataflowFn = std::function<void(NodeContext &)>;

  static NodeKernel sequential(SequentialFn fn)
  {
    NodeKernel k;
    k.mode_ = Mode::Sequential;
    k.sequential_ = std::move(fn);
    return k;
  }

  static NodeKernel dataflow(DataflowFn fn)
  {
    NodeKernel k;
    k.mode_ = Mode::Dataflow;
    k.dataflow_ = std::move(fn);
    return k;
  }

  static NodeKernel external()
  {
    NodeKernel k;
    k.mode_ = Mode::External;
    return k;
  }

  Mode mode() const {return mode_;}
  const SequentialFn & sequential_body() const {return sequential_;}
  const DataflowFn & dataflow_body() const {return dataflow_;}

private:
  Mode mode_ = Mode::External;
  SequentialFn sequential_;
  DataflowFn dataflow_;
};

using KernelMap = std::map<std::string, NodeKernel, std::less<>>;

struct RuntimeOptions
{
  /// Upper bound on encoded message size; required for FIFOs on dynamic types.
  std::optional<std::size_t> max_message_bytes;
  /// Keep per-frame timestamps for every port (see trace()).
  bool record_trace = true;
  /// Yields before a blocked operation parks.
  int spin_yields = Signal::kDefaultSpins;
};

/// One row per delivered frame and subscriber.
struct TraceRow
{
  std::string topic;
  std::string publisher;
  std::uint64_t frame_seq = 0;
  std::int64_t t_first_sent = 0;
  std::int64_t t_last_sent = 0;
  std::int64_t t_first_recv = 0;
  std::int64_t t_last_recv = 0;
  std::string subscriber;
};

/// Executable form of a TopologyGraph. Construction allocates every channel
/// and port; start() launches one thread per non-external node, arbiter and
/// broadcaster.
class RuntimeInstance
{
public:
  RuntimeInstance(TopologyGraph graph, const KernelMap & kernels, RuntimeOptions options = {})
  : graph_(std::move(graph)), options_(options)
  {
    for (const auto & node : graph_.nodes) {
      auto it = kernels.find(node.kernel_id);
      if (it == kernels.end()) {
        throw TopologyError(
                "node '" + node.name + "': no kernel registered for '" + node.kernel_id + "'");
      }
      contexts_.push_back(std::make_unique<NodeContext>(node.name, &stop_));
      node_kernels_.push_back(it->second);
    }
    for (const auto & topic : graph_.topics) {
      wire_topic(topic);
    }
  }

  RuntimeInstance(const RuntimeInstance &) = delete;
  RuntimeInstance & operator=(const RuntimeInstance &) = delete;

  ~RuntimeInstance() {shutdown();}

  void start()
  {
    std::lock_guard<std::mutex> lock(lifecycle_);
    if (started_ || stop_.load()) {
      return;
    }
    started_ = true;
    for (auto & job : forwarders_) {
      launch("forwarder", job);
    }
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
      const NodeKernel & kernel = node_kernels_[i];
      NodeContext & ctx = *contexts_[i];
      if (kernel.mode() == NodeKernel::Mode::Sequential) {
        launch("node '" + ctx.name() + "'", [this, &kernel, &ctx] {run_sequential(kernel, ctx);});
      } else if (kernel.mode() == NodeKernel::Mode::Dataflow) {
        launch(
          "node '" + ctx.name() + "'", [this, &kernel, &ctx] {
            while (!stop_.load(std::memory_order_acquire)) {
              kernel.dataflow_body()(ctx);
            }
          });
      }
    }
  }

  /// Closes every channel; blocked port operations throw ShutdownError.
  /// Safe to call from any thread, including execution contexts.
  void request_shutdown()
  {
    if (stop_.exchange(true)) {
      return;
    }
    for (auto & ch : channels_) {
      ch->close();
    }
  }

  /// request_shutdown() plus joining every execution context. Idempotent.
  void shutdown()
  {
    request_shutdown();
    std::lock_guard<std::mutex> lock(lifecycle_);
    for (auto & t : threads_) {
      if (t.joinable() && t.get_id() != std::this_thread::get_id()) {
        t.join();
      }
    }
  }

  bool is_shut_down() const {return stop_.load(std::memory_order_acquire);}

  Publisher & publisher(std::string_view node, std::string_view port)
  {
    return context(node).publisher(port);
  }

  Subscriber & subscriber(std::string_view node, std::string_view port)
  {
    return context(node).subscriber(port);
  }

  NodeContext & context(std::string_view node)
  {
    for (auto & c : contexts_) {
      if (c->name() == node) {
        return *c;
      }
    }
    throw std::out_of_range("no node '" + std::string(node) + "'");
  }

  const TopologyGraph & graph() const {return graph_;}
  std::size_t topic_count() const {return graph_.topics.size();}
  std::size_t arbiter_count() const {return arbiters_;}
  std::size_t broadcaster_count() const {return broadcasters_;}
  std::size_t channel_count() const {return channels_.size();}

  /// Threads started (or to be started) by start().
  std::size_t execution_context_count() const
  {
    std::size_t n = forwarders_.size();
    for (const auto & k : node_kernels_) {
      n += k.mode() != NodeKernel::Mode::External;
    }
    return n;
  }

  const std::vector<std::unique_ptr<StreamChannel>> & channels() const {return channels_;}

  /// Arbiter counters for a topic, or nullptr if it has no arbiter.
  const ArbiterStats * arbiter_stats(std::string_view topic) const
  {
    auto it = arbiter_stats_.find(topic);
    return it == arbiter_stats_.end() ? nullptr : it->second.get();
  }

  /// Kernel and forwarder failures, in the order they happened.
  std::vector<std::string> faults() const
  {
    std::lock_guard<std::mutex> lock(fault_mutex_);
    return faults_;
  }

  std::vector<TraceRow> trace() const
  {
    std::map<std::pair<std::uint32_t, std::uint64_t>, PublishRecord> sent;
    for (const auto & pub : publishers_) {
      for (const auto & r : pub->records()) {
        sent[{pub->source_id(), r.seq}] = r;
      }
    }
    std::vector<TraceRow> rows;
    for (const auto & sub : subscribers_) {
      for (const auto & r : sub->records()) {
        TraceRow row;
        row.topic = sub->topic();
        row.publisher = r.source < publishers_.size() ? publishers_[r.source]->label() : "?";
        row.frame_seq = r.seq;
        row.t_first_sent = r.first_sent_ns;
        auto it = sent.find({r.source, r.seq});
        row.t_last_sent = it == sent.end() ? 0 : it->second.last_sent_ns;
        row.t_first_recv = r.first_recv_ns;
        row.t_last_recv = r.last_recv_ns;
        row.subscriber = sub->label();
        rows.push_back(std::move(row));
      }
    }
    return rows;
  }

  /// CSV with a header; times are steady-clock nanoseconds.
  void write_trace_csv(std::ostream & os) const
  {
    os << "topic,publisher,frame_seq,t_first_sent,t_last_sent,t_first_recv,t_last_recv,"
      "subscriber\n";
    for (const auto & r : trace()) {
      os << r.topic << ',' << r.publisher << ',' << r.frame_seq << ',' << r.t_first_sent << ',' <<
        r.t_last_sent << ',' << r.t_first_recv << ',' << r.t_last_recv << ',' << r.subscriber <<
        '\n';
    }
  }

private:
  StreamChannel * make_channel(
    std::size_t words, std::size_t frames, std::shared_ptr<Signal> data = nullptr,
    std::shared_ptr<Signal> space = nullptr)
  {
    if (!data) {
      data = make_signal();
    }
    if (!space) {
      space = make_signal();
    }
    channels_.push_back(std::make_unique<StreamChannel>(words, frames, data, space));
    return channels_.back().get();
  }

  std::shared_ptr<Signal> make_signal() const
  {
    return std::make_shared<Signal>(options_.spin_yields);
  }

  /// Plain link: one word of buffering, one frame in flight.
  StreamChannel * make_link(std::shared_ptr<Signal> data = nullptr, std::shared_ptr<Signal> space = nullptr)
  {
    return make_channel(1, 1, std::move(data), std::move(space));
  }

  StreamChannel * make_sub_channel(
    const TopicPlan & topic, const PortRef & sub, std::shared_ptr<Signal> space = nullptr)
  {
    if (!sub.fifo_depth) {
      return make_link(nullptr, std::move(space));
    }
    const SerializationPlan & plan = graph_.plans.at(topic.msg_type);
    std::size_t frame_words = 0;
    if (plan.fixed_size_bytes) {
      frame_words = *plan.fixed_frame_words();
    } else if (options_.max_message_bytes) {
      frame_words = (*options_.max_message_bytes + 3) / 4;
    } else {
      throw TopologyError(
              "topic '" + topic.name + "': FIFO at " + sub.label() + " carries dynamic type '" +
              topic.msg_type + "'; set RuntimeOptions::max_message_bytes");
    }
    const std::size_t depth = *sub.fifo_depth;
    return make_channel(std::max<std::size_t>(1, depth * frame_words), depth, nullptr, std::move(space));
  }

  void add_publisher(const TopicPlan & topic, const PortRef & ref, StreamChannel * ch)
  {
    auto id = static_cast<std::uint32_t>(publishers_.size());
    publishers_.push_back(
      std::make_unique<Publisher>(topic.name, ref.label(), id, &graph_.plans.at(ref.msg_type), ch));
    publishers_.back()->enable_records(options_.record_trace);
    context(ref.node).publishers_.push_back(publishers_.back().get());
  }

  void add_subscriber(const TopicPlan & topic, const PortRef & ref, StreamChannel * ch)
  {
    subscribers_.push_back(
      std::make_unique<Subscriber>(topic.name, ref.label(), &graph_.plans.at(ref.msg_type), ch));
    subscribers_.back()->enable_records(options_.record_trace);
    context(ref.node).subscribers_.push_back(subscribers_.back().get());
  }

  void wire_topic(const TopicPlan & topic)
  {
    const auto & pubs = topic.publishers;
    const auto & subs = topic.subscribers;

    if (pubs.empty() || subs.empty()) {
      // Nothing on the other side: publishers block, subscribers wait forever.
      for (const auto & p : pubs) {
        add_publisher(topic, p, make_link());
      }
      for (const auto & s : subs) {
        add_subscriber(topic, s, make_link());
      }
      return;
    }

    // Channel feeding the subscriber side: the single subscriber's own channel
    // or the broadcaster input.
    StreamChannel * sink = nullptr;
    std::vector<StreamChannel *> outputs;
    if (subs.size() == 1) {
      sink = make_sub_channel(topic, subs[0]);
      add_subscriber(topic, subs[0], sink);
    } else {
      sink = make_link();
      auto space = make_signal();
      for (const auto & s : subs) {
        outputs.push_back(make_sub_channel(topic, s, space));
        add_subscriber(topic, s, outputs.back());
      }
    }

    if (pubs.size() == 1) {
      add_publisher(topic, pubs[0], sink);
    } else {
      auto data = make_signal();
      std::vector<StreamChannel *> inputs;
      for (const auto & p : pubs) {
        inputs.push_back(make_link(data));
        add_publisher(topic, p, inputs.back());
      }
      auto stats = std::make_unique<ArbiterStats>(inputs.size());
      ArbiterStats * st = stats.get();
      arbiter_stats_.emplace(topic.name, std::move(stats));
      forwarders_.push_back([inputs, sink, st] {run_arbiter(inputs, *sink, st);});
      ++arbiters_;
    }

    if (!outputs.empty()) {
      forwarders_.push_back([sink, outputs] {run_broadcaster(*sink, outputs);});
      ++broadcasters_;
    }
  }

  void run_sequential(const NodeKernel & kernel, NodeContext & ctx)
  {
    PortValues inputs;
    PortValues outputs;
    while (!stop_.load(std::memory_order_acquire)) {
      inputs.clear();
      outputs.clear();
      for (auto * s : ctx.subscribers()) {
        inputs.insert_or_assign(std::string(NodeContext::port_of(s->label())), s->take_blocking());
      }
      kernel.sequential_body()(inputs, outputs);
      std::size_t used = 0;
      for (auto * p : ctx.publishers()) {
        auto it = outputs.find(NodeContext::port_of(p->label()));
        if (it != outputs.end()) {
          p->publish_blocking(it->second);
          ++used;
        }
      }
      if (used != outputs.size()) {
        throw std::logic_error("kernel produced a message for an undeclared port");
      }
    }
  }

  void launch(std::string what, std::function<void()> body)
  {
    threads_.emplace_back(
      [this, what = std::move(what), body = std::move(body)] {
        try {
          body();
        } catch (const ShutdownError &) {
        } catch (const std::exception & e) {
          fault(what + ": " + e.what());
        } catch (...) {
          fault(what + ": unknown exception");
        }
      });
  }

  void fault(std::string message)
  {
    {
      std::lock_guard<std::mutex> lock(fault_mutex_);
      faults_.push_back(std::move(message));
    }
    request_shutdown();
  }

  TopologyGraph graph_;
  RuntimeOptions options_;
  std::atomic<bool> stop_{false};
  bool started_ = false;
  std::mutex lifecycle_;

  std::vector<std::unique_ptr<NodeContext>> contexts_;
  std::vector<NodeKernel> node_kernels_;
  std::vector<std::unique_ptr<StreamChannel>> channels_;
  std::vector<std::unique_ptr<Publisher>> publishers_;
  std::vector<std::unique_ptr<Subscriber>> subscribers_;
  std::map<std::string, std::unique_ptr<ArbiterStats>, std::less<>> arbiter_stats_;
  std::vector<std::function<void()>> forwarders_;
  std::size_t arbiters_ = 0;
  std::size_t broadcasters_ = 0;

  std::vector<std::thread> threads_;
  mutable std::mutex fault_mutex_;
  std::vector<std::string> faults_;
};

inline std::unique_ptr<RuntimeInstance> instantiate(
  TopologyGraph graph, const KernelMap & kernels, RuntimeOptions options = {})
{
  return std::make_unique<RuntimeInstance>(std::move(graph), kernels, options);
}

}  // namespace streamdds

#endif  // STREAMDDS__RUNTIME__INSTANCE_HPP_
