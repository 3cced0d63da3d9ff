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


#ifndef STREAMDDS__TOPOLOGY_HPP_
#define STREAMDDS__TOPOLOGY_HPP_

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "streamdds/errors.hpp"
#include "streamdds/msgdef.hpp"
#include "streamdds/plan.hpp"

namespace streamdds
{

enum class PortDirection { Publisher, Subscriber };

struct PortSpec
{
  PortDirection direction = PortDirection::Publisher;
  /// Port name, unique within the node; defaults to the topic name.
  std::string name;
  std::string topic;
  std::string msg_type;
  /// Subscriber-only buffer depth in messages.
  std::optional<std::size_t> fifo_depth;

  bool operator==(const PortSpec &) const = default;
};

struct NodeSpec
{
  std::string name;
  std::string kernel_id;
  std::vector<PortSpec> ports;

  bool operator==(const NodeSpec &) const = default;
};

struct AppSpec
{
  std::vector<NodeSpec> nodes;

  std::size_t port_count() const
  {
    std::size_t n = 0;
    for (const auto & node : nodes) {
      n += node.ports.size();
    }
    return n;
  }

  const NodeSpec * find_node(std::string_view name) const
  {
    for (const auto & node : nodes) {
      if (node.name == name) {
        return &node;
      }
    }
    return nullptr;
  }
};

namespace detail
{

inline std::vector<std::string_view> split_ws(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
      ++j;
    }
    if (j > i) {
      out.push_back(line.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

inline bool is_config_name(std::string_view s)
{
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  return std::all_of(
    s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '/';
    });
}

}  // namespace detail

/// Line-oriented application config:
///
///     node <name> [kernel=<id>]
///       pub <topic> <pkg/Type> [port=<name>]
///       sub <topic> <pkg/Type> [fifo=<depth>] [port=<name>]
///
/// `#` starts a comment. Indentation is optional.
inline AppSpec parse_config(std::string_view text, const std::string & source = "<config>")
{
  AppSpec spec;
  std::set<std::string, std::less<>> node_names;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = text.size();
    }
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) {
      continue;
    }
    auto fail = [&](const std::string & what) {return ParseError(source, line_no, what);};

    if (tokens[0] == "node") {
      if (tokens.size() < 2 || tokens.size() > 3) {
        throw fail("expected 'node <name> [kernel=<id>]'");
      }
      std::string name(tokens[1]);
      if (!detail::is_config_name(name)) {
        throw fail("invalid node name '" + name + "'");
      }
      if (!node_names.insert(name).second) {
        throw fail("duplicate node '" + name + "'");
      }
      NodeSpec node;
      node.name = name;
      node.kernel_id = name;
      if (tokens.size() == 3) {
        auto opt = tokens[2];
        if (opt.substr(0, 7) != "kernel=" || opt.size() == 7) {
          throw fail("unexpected token '" + std::string(opt) + "'");
        }
        node.kernel_id = std::string(opt.substr(7));
      }
      spec.nodes.push_back(std::move(node));
      continue;
    }

    if (tokens[0] != "pub" && tokens[0] != "sub") {
      throw fail("unknown directive '" + std::string(tokens[0]) + "'");
    }
    if (spec.nodes.empty()) {
      throw fail("'" + std::string(tokens[0]) + "' outside a node block");
    }
    if (tokens.size() < 3) {
      throw fail("expected '" + std::string(tokens[0]) + " <topic> <type>'");
    }
    PortSpec port;
    port.direction = tokens[0] == "pub" ? PortDirection::Publisher : PortDirection::Subscriber;
    port.topic = std::string(tokens[1]);
    port.msg_type = std::string(tokens[2]);
    port.name = port.topic;
    if (!detail::is_config_name(port.topic)) {
      throw fail("invalid topic name '" + port.topic + "'");
    }
    try {
      split_type_name(port.msg_type);
    } catch (const std::invalid_argument & e) {
      throw fail(e.what());
    }
    for (std::size_t i = 3; i < tokens.size(); ++i) {
      auto opt = tokens[i];
      if (opt.substr(0, 5) == "fifo=") {
        if (port.direction == PortDirection::Publisher) {
          throw fail("fifo depth is only allowed on subscriber ports");
        }
        auto digits = opt.substr(5);
        std::size_t depth = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), depth);
        if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() ||
          depth == 0)
        {
          throw fail("fifo depth must be a positive integer, got '" + std::string(digits) + "'");
        }
        port.fifo_depth = depth;
      } else if (opt.substr(0, 5) == "port=" && opt.size() > 5) {
        port.name = std::string(opt.substr(5));
      } else {
        throw fail("unexpected token '" + std::string(opt) + "'");
      }
    }
    auto & node = spec.nodes.back();
    for (const auto & existing : node.ports) {
      if (existing.name == port.name) {
        throw fail("duplicate port '" + port.name + "' on node '" + node.name + "'");
      }
    }
    node.ports.push_back(std::move(port));
  }
  return spec;
}

enum class TopicStructure
{
  Direct,
  ArbiterOnly,
  BroadcastOnly,
  ArbiterThenBroadcast,
  /// No publishers or no subscribers; nothing is instantiated.
  Unconnected,
};

inline std::string_view structure_name(TopicStructure s)
{
  switch (s) {
    case TopicStructure::Direct: return "direct";
    case TopicStructure::ArbiterOnly: return "arbiter_only";
    case TopicStructure::BroadcastOnly: return "broadcast_only";
    case TopicStructure::ArbiterThenBroadcast: return "arbiter_then_broadcast";
    case TopicStructure::Unconnected: return "unconnected";
  }
  return "unconnected";
}

inline constexpr TopicStructure structure_for(std::size_t publishers, std::size_t subscribers)
{
  if (publishers == 0 || subscribers == 0) {
    return TopicStructure::Unconnected;
  }
  if (publishers == 1) {
    return subscribers == 1 ? TopicStructure::Direct : TopicStructure::BroadcastOnly;
  }
  return subscribers == 1 ? TopicStructure::ArbiterOnly : TopicStructure::ArbiterThenBroadcast;
}

struct PortRef
{
  std::string node;
  std::string port;
  /// Type declared on this port; normally equal to the topic type.
  std::string msg_type;
  std::optional<std::size_t> fifo_depth;

  std::string label() const {return node + "." + port;}
  bool operator==(const PortRef &) const = default;
};

struct TopicPlan
{
  std::string name;
  /// Type of the first declared port on the topic.
  std::string msg_type;
  std::vector<PortRef> publishers;
  std::vector<PortRef> subscribers;
  TopicStructure structure = TopicStructure::Unconnected;

  bool has_arbiter() const {return publishers.size() > 1 && !subscribers.empty();}
  bool has_broadcaster() const {return subscribers.size() > 1 && !publishers.empty();}
};

/// Fixed QoS of every topic; there is no way to configure it.
struct QosProfile
{
  std::string_view history = "keep_all";
  std::string_view reliability = "reliable";
  std::string_view lifespan = "infinite";
  std::string_view lease_duration = "infinite";

  bool operator==(const QosProfile &) const = default;
};

struct NodeInfo
{
  std::string name;
  std::string kernel_id;
};

struct TopologyGraph
{
  std::vector<NodeInfo> nodes;
  std::vector<TopicPlan> topics;
  std::map<std::string, SerializationPlan, std::less<>> plans;
  QosProfile qos;

  const TopicPlan * find_topic(std::string_view name) const
  {
    for (const auto & t : topics) {
      if (t.name == name) {
        return &t;
      }
    }
    return nullptr;
  }

  std::size_t arbiter_count() const
  {
    return static_cast<std::size_t>(
      std::count_if(topics.begin(), topics.end(), [](auto & t) {return t.has_arbiter();}));
  }

  std::size_t broadcaster_count() const
  {
    return static_cast<std::size_t>(
      std::count_if(topics.begin(), topics.end(), [](auto & t) {return t.has_broadcaster();}));
  }
};

/// Groups ports by topic in first-appearance order. Type mismatches and
/// half-connected topics are left for validate(); unknown types throw.
inline TopologyGraph build_topology(const AppSpec & spec, const TypeRegistry & registry)
{
  TopologyGraph graph;
  std::map<std::string, std::size_t, std::less<>> index;
  for (const auto & node : spec.nodes) {
    graph.nodes.push_back({node.name, node.kernel_id});
    for (const auto & port : node.ports) {
      if (!registry.contains(port.msg_type)) {
        throw TopologyError(
                "node '" + node.name + "' port '" + port.name + "': unknown message type '" +
                port.msg_type + "'");
      }
      auto [it, inserted] = index.try_emplace(port.topic, graph.topics.size());
      if (inserted) {
        TopicPlan topic;
        topic.name = port.topic;
        topic.msg_type = port.msg_type;
        graph.topics.push_back(std::move(topic));
      }
      auto & topic = graph.topics[it->second];
      PortRef ref{node.name, port.name, port.msg_type, port.fifo_depth};
      if (port.direction == PortDirection::Publisher) {
        topic.publishers.push_back(std::move(ref));
      } else {
        topic.subscribers.push_back(std::move(ref));
      }
      if (!graph.plans.count(port.msg_type)) {
        graph.plans.emplace(port.msg_type, flatten(registry, port.msg_type));
      }
    }
  }
  for (auto & topic : graph.topics) {
    topic.structure = structure_for(topic.publishers.size(), topic.subscribers.size());
  }
  return graph;
}

struct Diagnostic
{
  enum class Severity { Warning, Error };
  enum class Kind { TypeMismatch, OrphanProducer, OrphanConsumer };

  Severity severity = Severity::Warning;
  Kind kind = Kind::TypeMismatch;
  std::string topic;
  std::string message;

  bool is_error() const {return severity == Severity::Error;}
};

inline std::string_view diagnostic_kind_name(Diagnostic::Kind k)
{
  switch (k) {
    case Diagnostic::Kind::TypeMismatch: return "type_mismatch";
    case Diagnostic::Kind::OrphanProducer: return "orphan_producer";
    case Diagnostic::Kind::OrphanConsumer: return "orphan_consumer";
  }
  return "unknown";
}

inline std::string to_string(const Diagnostic & d)
{
  return std::string(d.is_error() ? "error" : "warning") + ": " +
         std::string(diagnostic_kind_name(d.kind)) + ": " + d.message;
}

/// Type mismatches are errors. Subscribers without a producer and publishers
/// without a consumer are warnings; such a publisher would block forever.
inline std::vector<Diagnostic> validate(const TopologyGraph & graph)
{
  std::vector<Diagnostic> out;
  for (const auto & topic : graph.topics) {
    std::vector<const PortRef *> ports;
    for (const auto & p : topic.publishers) {
      ports.push_back(&p);
    }
    for (const auto & s : topic.subscribers) {
      ports.push_back(&s);
    }
    for (const PortRef * p : ports) {
      if (p->msg_type != topic.msg_type) {
        out.push_back(
          {Diagnostic::Severity::Error, Diagnostic::Kind::TypeMismatch, topic.name,
            "topic '" + topic.name + "': port " + p->label() + " declares '" + p->msg_type +
            "' but the topic carries '" + topic.msg_type + "'"});
      }
    }
    if (topic.publishers.empty()) {
      out.push_back(
        {Diagnostic::Severity::Warning, Diagnostic::Kind::OrphanProducer, topic.name,
          "topic '" + topic.name + "' has " + std::to_string(topic.subscribers.size()) +
          " subscriber(s) but no publisher; they can never receive"});
    }
    if (topic.subscribers.empty()) {
      out.push_back(
        {Diagnostic::Severity::Warning, Diagnostic::Kind::OrphanConsumer, topic.name,
          "topic '" + topic.name + "' has " + std::to_string(topic.publishers.size()) +
          " publisher(s) but no subscriber; publishing will block"});
    }
  }
  return out;
}

namespace detail
{

inline std::string sub_label(const PortRef & s)
{
  std::string out = s.label();
  if (s.fifo_depth) {
    out += " [fifo " + std::to_string(*s.fifo_depth) + "]";
  }
  return out;
}

inline std::string join_labels(const std::vector<PortRef> & refs, bool subscribers)
{
  std::string out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out += (i ? ", " : "") + (subscribers ? sub_label(refs[i]) : refs[i].label());
  }
  return out;
}

}  // namespace detail

/// Text rendering, one block per topic in graph order.
inline std::string explain(const TopologyGraph & graph)
{
  std::ostringstream os;
  for (const auto & t : graph.topics) {
    const std::string pubs = detail::join_labels(t.publishers, false);
    const std::string subs = detail::join_labels(t.subscribers, true);
    switch (t.structure) {
      case TopicStructure::Direct:
        os << t.name << ": direct " << pubs << " -> " << subs << "\n";
        break;
      case TopicStructure::Unconnected:
        os << t.name << ": unconnected " << (pubs.empty() ? "(none)" : pubs) << " -> " <<
          (subs.empty() ? "(none)" : subs) << "\n";
        break;
      case TopicStructure::ArbiterOnly:
        os << t.name << ": arbiter_only (" << t.msg_type << ")\n";
        os << "  arbiter <- " << pubs << "\n";
        os << "  arbiter -> " << subs << "\n";
        break;
      case TopicStructure::BroadcastOnly:
        os << t.name << ": broadcast_only (" << t.msg_type << ")\n";
        os << "  " << pubs << " -> broadcaster\n";
        os << "  broadcaster -> " << subs << "\n";
        break;
      case TopicStructure::ArbiterThenBroadcast:
        os << t.name << ": arbiter_then_broadcast (" << t.msg_type << ")\n";
        os << "  arbiter <- " << pubs << "\n";
        os << "  arbiter -> broadcaster\n";
        os << "  broadcaster -> " << subs << "\n";
        break;
    }
  }
  return os.str();
}

/// {topics:[{name, type, structure, publishers[{node,port}], subscribers[{node,port,fifo}]}]}
inline nlohmann::ordered_json graph_to_json(const TopologyGraph & graph)
{
  nlohmann::ordered_json topics = nlohmann::ordered_json::array();
  for (const auto & t : graph.topics) {
    nlohmann::ordered_json jt;
    jt["name"] = t.name;
    jt["type"] = t.msg_type;
    jt["structure"] = structure_name(t.structure);
    jt["publishers"] = nlohmann::ordered_json::array();
    for (const auto & p : t.publishers) {
      jt["publishers"].push_back({{"node", p.node}, {"port", p.port}});
    }
    jt["subscribers"] = nlohmann::ordered_json::array();
    for (const auto & s : t.subscribers) {
      nlohmann::ordered_json js{{"node", s.node}, {"port", s.port}};
      js["fifo"] = s.fifo_depth ? nlohmann::ordered_json(*s.fifo_depth) : nullptr;
      jt["subscribers"].push_back(std::move(js));
    }
    topics.push_back(std::move(jt));
  }
  return nlohmann::ordered_json{{"topics", std::move(topics)}};
}

}  // namespace streamdds

#endif  // STREAMDDS__TOPOLOGY_HPP_
