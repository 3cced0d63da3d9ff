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
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "streamdds/msgdef.hpp"
#include "streamdds/plan.hpp"
#include "support/generators.hpp"

namespace sd = streamdds;

namespace
{

sd::TypeRegistry fixture_registry()
{
  return sd::resolve(sd::load_msg_dir(std::string(STREAMDDS_FIXTURES_DIR) + "/msgs"));
}

sd::MessageTypeDef make_type(
  const std::string & name, std::vector<std::pair<std::string, std::string>> nested)
{
  sd::MessageTypeDef def;
  def.type_name = name;
  for (auto & [field, type] : nested) {
    sd::FieldDef f;
    f.name = field;
    f.type.element = type;
    def.fields.push_back(f);
  }
  return def;
}

// Every elementary cycle reachable in the nesting graph, by exhaustive DFS.
std::set<std::vector<std::string>> enumerate_cycles(const sd::TypeRegistry & registry)
{
  std::set<std::vector<std::string>> cycles;
  std::vector<std::string> path;
  auto walk = [&](auto & self, const std::string & name) -> void {
      auto hit = std::find(path.begin(), path.end(), name);
      if (hit != path.end()) {
        std::vector<std::string> cycle(hit, path.end());
        std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
        cycles.insert(cycle);
        return;
      }
      path.push_back(name);
      for (const auto & f : registry.at(name).fields) {
        if (f.type.is_nested()) {
          self(self, f.type.nested());
        }
      }
      path.pop_back();
    };
  for (const auto & entry : registry) {
    walk(walk, entry.first);
  }
  return cycles;
}

}  // namespace

TEST(ParseMsgFile, SingleField)
{
  auto def = sd::parse_msg_file("int32 x", "t/A");
  ASSERT_EQ(def.fields.size(), 1u);
  EXPECT_EQ(def.fields[0].name, "x");
  EXPECT_EQ(def.fields[0].type.primitive(), sd::Primitive::Int32);
  EXPECT_EQ(def.fields[0].type.array, sd::ArrayKind::None);
}

TEST(ParseMsgFile, EmptyFileIsLegal)
{
  auto def = sd::parse_msg_file("", "t/Empty");
  EXPECT_TRUE(def.fields.empty());
  EXPECT_EQ(def.type_name, "t/Empty");
}

TEST(ParseMsgFile, PointMatchesCommonInterfacesText)
{
  // Verbatim body of geometry_msgs/msg/Point.msg.
  const char * text =
    "# This contains the position of a point in free space\n"
    "float64 x\n"
    "float64 y\n"
    "float64 z\n";
  auto def = sd::parse_msg_file(text, "geometry_msgs/Point");
  ASSERT_EQ(def.fields.size(), 3u);
  const char * names[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(def.fields[i].name, names[i]);
    EXPECT_EQ(def.fields[i].type.primitive(), sd::Primitive::Float64);
  }
}

TEST(ParseMsgFile, ArraySuffixesAndNestedNames)
{
  auto def = sd::parse_msg_file(
    "uint8[] data\nfloat32[3] v\nint16[<=8] w\nPoint p\ngeometry_msgs/Pose[2] poses\n"
    "byte b\nchar c\n",
    "pkg/T");
  ASSERT_EQ(def.fields.size(), 7u);
  EXPECT_EQ(def.fields[0].type.array, sd::ArrayKind::Unbounded);
  EXPECT_EQ(def.fields[1].type.array, sd::ArrayKind::Fixed);
  EXPECT_EQ(def.fields[1].type.length, 3u);
  EXPECT_EQ(def.fields[2].type.array, sd::ArrayKind::Bounded);
  EXPECT_EQ(def.fields[2].type.length, 8u);
  EXPECT_EQ(def.fields[3].type.nested(), "pkg/Point");
  EXPECT_EQ(def.fields[4].type.nested(), "geometry_msgs/Pose");
  EXPECT_EQ(def.fields[4].type.length, 2u);
  EXPECT_EQ(def.fields[5].type.primitive(), sd::Primitive::UInt8);
  EXPECT_EQ(def.fields[6].type.primitive(), sd::Primitive::UInt8);
}

TEST(ParseMsgFile, ConstantsAreParsedButNotFields)
{
  auto def = sd::parse_msg_file(
    "uint8 RED=0\nuint8 GREEN=1 # trailing comment\nstring TAG=a#b\nfloat64 K=-1.5\n"
    "uint8 state\n",
    "t/Light");
  ASSERT_EQ(def.fields.size(), 1u);
  ASSERT_EQ(def.constants.size(), 4u);
  EXPECT_EQ(def.constants[0].name, "RED");
  EXPECT_EQ(std::get<std::uint64_t>(def.constants[1].value), 1u);
  EXPECT_EQ(std::get<std::string>(def.constants[2].value), "a#b");
  EXPECT_DOUBLE_EQ(std::get<double>(def.constants[3].value), -1.5);
}

TEST(ParseMsgFile, Errors)
{
  auto expect_line = [](const char * text, std::size_t line) {
      try {
        sd::parse_msg_file(text, "t/E");
        ADD_FAILURE() << "accepted: " << text;
      } catch (const sd::ParseError & e) {
        EXPECT_EQ(e.line(), line) << e.what();
      }
    };
  expect_line("int32 x\nint32 x", 2);       // duplicate field
  expect_line("int33 x", 1);                // reserved-word collision
  expect_line("float16 x", 1);
  expect_line("int32", 1);                  // missing name
  expect_line("int32 X", 1);                // bad field name
  expect_line("int32[0] x", 1);             // zero length
  expect_line("int32[<=0] x", 1);
  expect_line("int32 x 5", 1);              // default values unsupported
  expect_line("\n\nstring<=5 s", 3);        // bounded strings unsupported
  expect_line("int32 K=abc", 1);
  expect_line("uint8 K=300", 1);
}

TEST(Resolve, ValidNesting)
{
  sd::TypeRegistry r;
  r.add(make_type("p/A", {{"b", "p/B"}}));
  r.add(sd::parse_msg_file("int32 x", "p/B"));
  EXPECT_NO_THROW(sd::resolve(r));
}

TEST(Resolve, SelfReference)
{
  sd::TypeRegistry r;
  r.add(make_type("p/A", {{"a", "p/A"}}));
  try {
    sd::resolve(r);
    FAIL();
  } catch (const sd::ResolveError & e) {
    EXPECT_EQ(e.cycle(), (std::vector<std::string>{"p/A", "p/A"}));
  }
}

TEST(Resolve, ThreeCycleMatchesEnumeratedCycle)
{
  sd::TypeRegistry r;
  r.add(make_type("p/A", {{"b", "p/B"}}));
  r.add(make_type("p/B", {{"c", "p/C"}}));
  r.add(make_type("p/C", {{"a", "p/A"}}));
  auto oracle = enumerate_cycles(r);
  ASSERT_EQ(oracle.size(), 1u);
  try {
    sd::resolve(r);
    FAIL();
  } catch (const sd::ResolveError & e) {
    EXPECT_EQ(e.cycle(), (std::vector<std::string>{"p/A", "p/B", "p/C", "p/A"}));
    std::vector<std::string> reported(e.cycle().begin(), e.cycle().end() - 1);
    EXPECT_TRUE(oracle.count(reported));
    EXPECT_NE(std::string(e.what()).find("p/A -> p/B -> p/C -> p/A"), std::string::npos);
  }
}

TEST(Resolve, ReportedCycleIsAlwaysARealCycle)
{
  std::mt19937_64 rng(7);
  const char * names[] = {"p/A", "p/B", "p/C", "p/D", "p/E"};
  for (int trial = 0; trial < 300; ++trial) {
    sd::TypeRegistry r;
    for (const char * n : names) {
      std::vector<std::pair<std::string, std::string>> edges;
      for (int e = 0; e < 2; ++e) {
        if (rng() % 3 == 0) {
          edges.emplace_back("f" + std::to_string(e), names[rng() % 5]);
        }
      }
      r.add(make_type(n, edges));
    }
    auto oracle = enumerate_cycles(r);
    try {
      sd::resolve(r);
      EXPECT_TRUE(oracle.empty());
    } catch (const sd::ResolveError & e) {
      ASSERT_FALSE(oracle.empty());
      std::vector<std::string> c(e.cycle().begin(), e.cycle().end() - 1);
      std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
      EXPECT_TRUE(oracle.count(c));
    }
  }
}

TEST(Resolve, UnresolvedName)
{
  sd::TypeRegistry r;
  r.add(make_type("p/A", {{"b", "p/Missing"}}));
  EXPECT_THROW(sd::resolve(r), sd::ResolveError);
}

TEST(Flatten, PointHasThreeSlots)
{
  auto reg = fixture_registry();
  auto plan = sd::flatten(reg, "geometry_msgs/Point");
  ASSERT_EQ(plan.slots.size(), 3u);
  EXPECT_EQ(plan.slots[0].path, "x");
  EXPECT_EQ(plan.fixed_size_bytes, sd::testing::oracle_fixed_size(reg, "geometry_msgs/Point"));
  EXPECT_EQ(plan.fixed_size_bytes, 24u);
}

TEST(Flatten, PoseWithQuaternionHasSevenSlots)
{
  auto reg = fixture_registry();
  auto plan = sd::flatten(reg, "geometry_msgs/Pose");
  ASSERT_EQ(plan.slots.size(), 7u);
  EXPECT_EQ(plan.slots[3].path, "orientation.x");
  EXPECT_EQ(plan.fixed_size_bytes, 56u);
  EXPECT_EQ(plan.fixed_size_bytes, sd::testing::oracle_fixed_size(reg, "geometry_msgs/Pose"));
}

TEST(Flatten, FixedPrimitiveArrayIsOneSlot)
{
  sd::TypeRegistry reg = fixture_registry();
  reg.add(sd::parse_msg_file("Point position\nfloat64[4] orientation", "geometry_msgs/PoseArr"));
  auto plan = sd::flatten(reg, "geometry_msgs/PoseArr");
  ASSERT_EQ(plan.slots.size(), 4u);
  EXPECT_EQ(plan.slots[3].arity, sd::Arity::fixed(4));
  EXPECT_EQ(plan.fixed_size_bytes, 56u);
}

TEST(Flatten, UnboundedArrayIsDynamic)
{
  sd::TypeRegistry reg;
  reg.add(sd::parse_msg_file("uint8[] data", "t/Blob"));
  auto plan = sd::flatten(reg, "t/Blob");
  ASSERT_EQ(plan.slots.size(), 1u);
  EXPECT_TRUE(plan.slots[0].is_dynamic());
  EXPECT_FALSE(plan.fixed_size_bytes.has_value());
}

TEST(Flatten, NestedArraysAndGroups)
{
  auto reg = fixture_registry();
  auto plan = sd::flatten(reg, "test_msgs/Path");
  std::vector<std::string> paths;
  for (const auto & s : plan.slots) {
    paths.push_back(s.path);
  }
  ASSERT_GE(paths.size(), 3u);
  EXPECT_EQ(paths[0], "frame_id");
  EXPECT_EQ(paths[1], "ends[0].position.x");
  EXPECT_EQ(paths[8], "ends[1].position.x");
  auto group = std::find_if(
    plan.slots.begin(), plan.slots.end(), [](const sd::PlanSlot & s) {return s.is_group();});
  ASSERT_NE(group, plan.slots.end());
  EXPECT_EQ(group->path, "waypoints");
  EXPECT_EQ(group->arity, sd::Arity::dynamic(8));
  ASSERT_EQ(group->children.size(), 3u);
  EXPECT_EQ(group->children[0].path, "x");
  EXPECT_EQ(plan.slots.size(), sd::testing::oracle_slot_count(reg, "test_msgs/Path"));
  EXPECT_FALSE(plan.fixed_size_bytes);
}

TEST(FlattenProperty, SlotCountAndSizeMatchOracles)
{
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    auto [reg, root] = sd::testing::random_registry(rng);
    reg = sd::resolve(std::move(reg));
    auto plan = sd::flatten(reg, root);
    EXPECT_EQ(plan.slots.size(), sd::testing::oracle_slot_count(reg, root));
    EXPECT_EQ(plan.fixed_size_bytes, sd::testing::oracle_fixed_size(reg, root));
    if (plan.fixed_size_bytes) {
      std::size_t sum = 0;
      for (const auto & s : plan.slots) {
        sum += s.static_bytes();
      }
      EXPECT_EQ(*plan.fixed_size_bytes, sum);
    }
  }
}

TEST(FlattenProperty, IdempotentOnPrimitiveOnlyRewrite)
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto [reg, root] = sd::testing::random_registry(rng);
    auto plan = sd::flatten(reg, root);
    // Rebuild the top-level slots as a primitive-only type; groups stay nested.
    sd::TypeRegistry flat = reg;
    sd::MessageTypeDef def;
    def.type_name = "flat/T";
    bool representable = true;
    for (const auto & s : plan.slots) {
      if (s.is_group()) {
        representable = false;
        break;
      }
      sd::FieldDef f;
      f.name = "s" + std::to_string(def.fields.size());
      f.type.element = s.primitive;
      if (s.arity.kind == sd::Arity::Kind::Fixed) {
        f.type.array = sd::ArrayKind::Fixed;
        f.type.length = s.arity.length;
      } else if (s.arity.kind == sd::Arity::Kind::Dynamic) {
        f.type.array = s.arity.max ? sd::ArrayKind::Bounded : sd::ArrayKind::Unbounded;
        f.type.length = s.arity.max.value_or(0);
      }
      def.fields.push_back(f);
    }
    if (!representable) {
      continue;
    }
    flat.add(def);
    auto again = sd::flatten(flat, "flat/T");
    ASSERT_EQ(again.slots.size(), plan.slots.size());
    for (std::size_t i = 0; i < plan.slots.size(); ++i) {
      EXPECT_EQ(again.slots[i].primitive, plan.slots[i].primitive);
      EXPECT_EQ(again.slots[i].arity, plan.slots[i].arity);
    }
    EXPECT_EQ(again.fixed_size_bytes, plan.fixed_size_bytes);
  }
}

TEST(FlattenProperty, DeclarationOrderPreserved)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto [reg, root] = sd::testing::random_registry(rng);
    auto plan = sd::flatten(reg, root);
    const auto & def = reg.at(root);
    std::map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < def.fields.size(); ++i) {
      rank[def.fields[i].name] = i;
    }
    std::size_t last = 0;
    for (const auto & s : plan.slots) {
      std::string head = s.path.substr(0, s.path.find_first_of(".["));
      ASSERT_TRUE(rank.count(head)) << s.path;
      EXPECT_GE(rank[head], last);
      last = rank[head];
    }
  }
}

TEST(PlanJson, PointDump)
{
  auto reg = fixture_registry();
  auto j = sd::plan_to_json(sd::flatten(reg, "geometry_msgs/Point"));
  EXPECT_EQ(j["type_name"], "geometry_msgs/Point");
  EXPECT_EQ(j["slots"].size(), 3u);
  EXPECT_EQ(j["slots"][0]["arity"], "scalar");
  EXPECT_EQ(j["fixed_size_bytes"], 24);
}
