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


#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "streamdds/topology.hpp"

namespace sd = streamdds;

namespace
{

std::string read_file(const std::string & path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string & rel)
{
  return std::string(STREAMDDS_FIXTURES_DIR) + "/" + rel;
}

sd::TypeRegistry registry()
{
  return sd::resolve(sd::load_msg_dir(fixture("msgs")));
}

sd::TopologyGraph compile(const std::string & cfg)
{
  return sd::build_topology(sd::parse_config(read_file(fixture("configs/" + cfg))), registry());
}

}  // namespace

TEST(ParseConfig, MinimalSinglePublisher)
{
  auto spec = sd::parse_config("node n\n  pub t std_msgs/Int32\n");
  ASSERT_EQ(spec.nodes.size(), 1u);
  EXPECT_EQ(spec.port_count(), 1u);
  EXPECT_EQ(spec.nodes[0].kernel_id, "n");
  EXPECT_EQ(spec.nodes[0].ports[0].name, "t");
}

TEST(ParseConfig, SixNodeFixtureHasNinePorts)
{
  auto spec = sd::parse_config(read_file(fixture("configs/six_node_two_topic.cfg")));
  EXPECT_EQ(spec.nodes.size(), 6u);
  EXPECT_EQ(spec.port_count(), 9u);
  EXPECT_EQ(spec.nodes[3].ports[0].fifo_depth, 4u);
}

TEST(ParseConfig, OptionsAndComments)
{
  auto spec = sd::parse_config(
    "# header\nnode a kernel=k1  # trailing\n  sub t p/T fifo=3 port=in\n  pub t p/T port=out\n");
  EXPECT_EQ(spec.nodes[0].kernel_id, "k1");
  EXPECT_EQ(spec.nodes[0].ports[0].name, "in");
  EXPECT_EQ(spec.nodes[0].ports[0].fifo_depth, 3u);
  EXPECT_EQ(spec.nodes[0].ports[1].name, "out");
}

TEST(ParseConfig, Errors)
{
  auto expect_line = [](const char * text, std::size_t line) {
      try {
        sd::parse_config(text);
        ADD_FAILURE() << "accepted: " << text;
      } catch (const sd::ParseError & e) {
        EXPECT_EQ(e.line(), line) << e.what();
      }
    };
  expect_line("node a\n  pub t p/T fifo=2\n", 2);
  expect_line("node a\nnode a\n", 2);
  expect_line("pub t p/T\n", 1);
  expect_line("node a\n  sub t p/T fifo=0\n", 2);
  expect_line("node a\n  sub t p/T fifo=x\n", 2);
  expect_line("node a\n  sub t p/T\n  sub t p/T\n", 3);
  expect_line("node a\n  sub t NoPackage\n", 2);
  expect_line("node a\n  frob t p/T\n", 2);
  expect_line("node a extra\n", 1);
}

TEST(BuildTopology, SingleLinkIsDirect)
{
  auto g = compile("single_link.cfg");
  ASSERT_EQ(g.topics.size(), 1u);
  EXPECT_EQ(g.topics[0].structure, sd::TopicStructure::Direct);
  EXPECT_EQ(g.plans.at("std_msgs/Int32").fixed_size_bytes, 4u);
}

TEST(BuildTopology, SixNodeFixture)
{
  auto g = compile("six_node_two_topic.cfg");
  ASSERT_EQ(g.topics.size(), 2u);
  EXPECT_EQ(g.topics[0].structure, sd::TopicStructure::ArbiterThenBroadcast);
  EXPECT_EQ(g.topics[1].structure, sd::TopicStructure::BroadcastOnly);
  EXPECT_EQ(g.arbiter_count(), 1u);
  EXPECT_EQ(g.broadcaster_count(), 2u);
  EXPECT_TRUE(sd::validate(g).empty());
}

TEST(BuildTopology, GoldenJson)
{
  auto g = compile("six_node_two_topic.cfg");
  auto golden = nlohmann::ordered_json::parse(read_file(fixture("golden/six_node_two_topic.json")));
  EXPECT_EQ(sd::graph_to_json(g), golden) << sd::graph_to_json(g).dump(2);
}

TEST(BuildTopology, UnknownTypeThrows)
{
  auto spec = sd::parse_config("node a\n  pub t nope/Nope\n");
  EXPECT_THROW(sd::build_topology(spec, registry()), sd::TopologyError);
}

TEST(StructureFunction, TotalAndMatchesInvariants)
{
  for (std::size_t p = 0; p < 6; ++p) {
    for (std::size_t s = 0; s < 6; ++s) {
      auto st = sd::structure_for(p, s);
      EXPECT_EQ(st, sd::structure_for(p, s));
      if (p == 0 || s == 0) {
        EXPECT_EQ(st, sd::TopicStructure::Unconnected);
        continue;
      }
      EXPECT_EQ(st == sd::TopicStructure::Direct, p == 1 && s == 1);
      bool arbiter = st == sd::TopicStructure::ArbiterOnly ||
        st == sd::TopicStructure::ArbiterThenBroadcast;
      bool broadcaster = st == sd::TopicStructure::BroadcastOnly ||
        st == sd::TopicStructure::ArbiterThenBroadcast;
      EXPECT_EQ(arbiter, p > 1);
      EXPECT_EQ(broadcaster, s > 1);
    }
  }
}

TEST(TopologyProperty, PortsArePartitionedAndQosIsFixed)
{
  std::mt19937_64 rng(11);
  auto reg = registry();
  const char * types[] = {"std_msgs/Int32", "geometry_msgs/Point"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string cfg;
    std::vector<std::tuple<std::string, std::string, bool>> expected;
    int nodes = 1 + static_cast<int>(rng() % 6);
    for (int n = 0; n < nodes; ++n) {
      cfg += "node n" + std::to_string(n) + "\n";
      int ports = static_cast<int>(rng() % 4);
      for (int p = 0; p < ports; ++p) {
        int topic = static_cast<int>(rng() % 3);
        bool pub = rng() & 1;
        std::string port = "p" + std::to_string(p);
        cfg += std::string(pub ? "  pub " : "  sub ") + "t" + std::to_string(topic) + " " +
          types[topic % 2] + " port=" + port + (!pub && rng() % 2 ? " fifo=2" : "") + "\n";
        expected.emplace_back("n" + std::to_string(n), port, pub);
      }
    }
    auto g = sd::build_topology(sd::parse_config(cfg), reg);
    std::vector<std::tuple<std::string, std::string, bool>> seen;
    for (const auto & t : g.topics) {
      for (const auto & p : t.publishers) {
        seen.emplace_back(p.node, p.port, true);
      }
      for (const auto & s : t.subscribers) {
        seen.emplace_back(s.node, s.port, false);
      }
      EXPECT_EQ(t.structure, sd::structure_for(t.publishers.size(), t.subscribers.size()));
    }
    std::sort(seen.begin(), seen.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(seen, expected) << cfg;
    EXPECT_EQ(g.qos, sd::QosProfile{});
    EXPECT_EQ(g.qos.history, "keep_all");
    EXPECT_EQ(g.qos.reliability, "reliable");
  }
}

TEST(Validate, TypeMismatchIsOneError)
{
  auto g = compile("type_mismatch.cfg");
  auto d = sd::validate(g);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, sd::Diagnostic::Kind::TypeMismatch);
  EXPECT_TRUE(d[0].is_error());
}

TEST(Validate, OrphanCasesByConstruction)
{
  auto reg = registry();
  struct Case { const char * cfg; sd::Diagnostic::Kind kind; };
  const Case cases[] = {
    {"node a\n  sub t std_msgs/Int32\n", sd::Diagnostic::Kind::OrphanProducer},
    {"node a\n  sub t std_msgs/Int32\nnode b\n  sub t std_msgs/Int32\n",
      sd::Diagnostic::Kind::OrphanProducer},
    {"node a\n  pub t std_msgs/Int32\n", sd::Diagnostic::Kind::OrphanConsumer},
    {"node a\n  pub t std_msgs/Int32\nnode b\n  pub t std_msgs/Int32\n",
      sd::Diagnostic::Kind::OrphanConsumer},
  };
  for (const auto & c : cases) {
    auto d = sd::validate(sd::build_topology(sd::parse_config(c.cfg), reg));
    ASSERT_EQ(d.size(), 1u) << c.cfg;
    EXPECT_EQ(d[0].kind, c.kind);
    EXPECT_FALSE(d[0].is_error());
  }
}

TEST(Explain, DirectIsOneLine)
{
  EXPECT_EQ(sd::explain(compile("single_link.cfg")), "chatter: direct talker.chatter -> listener.chatter\n");
}

TEST(Explain, SixNodeNamesArbiterBroadcasterAndFifo)
{
  auto text = sd::explain(compile("six_node_two_topic.cfg"));
  EXPECT_EQ(
    text,
    "a: arbiter_then_broadcast (geometry_msgs/Point)\n"
    "  arbiter <- hw_node_1.a, hw_node_2.a, hw_node_3.a\n"
    "  arbiter -> broadcaster\n"
    "  broadcaster -> hw_node_4.a [fifo 4], hw_node_5.a, hw_node_6.a\n"
    "b: broadcast_only (std_msgs/UInt32)\n"
    "  hw_node_4.b -> broadcaster\n"
    "  broadcaster -> hw_node_5.b, hw_node_6.b\n");
}

TEST(Explain, EmptyGraph)
{
  auto g = compile("empty.cfg");
  EXPECT_TRUE(g.topics.empty());
  EXPECT_EQ(sd::explain(g), "");
  EXPECT_EQ(sd::graph_to_json(g).dump(), R"({"topics":[]})");
}

TEST(BuildTopology, LaneFollowingFixtureIsClean)
{
  auto g = compile("lane_following.cfg");
  EXPECT_TRUE(sd::validate(g).empty());
  EXPECT_EQ(g.find_topic("image_compensated")->structure, sd::TopicStructure::BroadcastOnly);
  EXPECT_FALSE(g.plans.at("lane_msgs/Image").fixed_size_bytes);
}
