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

#ifndef STREAMDDS__PLAN_HPP_
#define STREAMDDS__PLAN_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "streamdds/msgdef.hpp"

namespace streamdds
{

struct Arity
{
  enum class Kind { Scalar, Fixed, Dynamic };

  Kind kind = Kind::Scalar;
  /// Element count for Fixed.
  std::size_t length = 0;
  /// Upper bound for Dynamic; nullopt when unbounded.
  std::optional<std::size_t> max;

  static Arity scalar() {return {};}
  static Arity fixed(std::size_t n) {return {Kind::Fixed, n, std::nullopt};}
  static Arity dynamic(std::optional<std::size_t> bound = std::nullopt)
  {
    return {Kind::Dynamic, 0, bound};
  }

  bool operator==(const Arity &) const = default;
};

/// One entry of a flattened layout. Primitive slots carry a single primitive
/// (possibly an array of it); group slots stand for a dynamic array of a nested
/// type and hold the element layout, with paths relative to the element.
struct PlanSlot
{
  enum class Kind { Primitive, Group };

  std::string path;
  Kind kind = Kind::Primitive;
  streamdds::Primitive primitive = streamdds::Primitive::UInt8;
  Arity arity;
  std::vector<PlanSlot> children;

  bool is_group() const {return kind == Kind::Group;}

  /// True for slots whose encoded size depends on the value.
  bool is_dynamic() const
  {
    return is_group() || arity.kind == Arity::Kind::Dynamic ||
           primitive == streamdds::Primitive::String;
  }

  /// Encoded size; only meaningful when !is_dynamic().
  std::size_t static_bytes() const
  {
    std::size_t n = arity.kind == Arity::Kind::Fixed ? arity.length : 1;
    return n * primitive_width(primitive);
  }

  bool operator==(const PlanSlot &) const = default;
};

struct SerializationPlan
{
  std::string type_name;
  std::vector<PlanSlot> slots;
  /// Present iff no slot is dynamic.
  std::optional<std::size_t> fixed_size_bytes;

  /// Frame length in 32-bit words for fixed-size plans.
  std::optional<std::size_t> fixed_frame_words() const
  {
    if (!fixed_size_bytes) {
      return std::nullopt;
    }
    return (*fixed_size_bytes + 3) / 4;
  }

  bool operator==(const SerializationPlan &) const = default;
};

namespace detail
{

inline void expand_fields(
  const TypeRegistry & registry, const MessageTypeDef & def, const std::string & prefix,
  std::vector<std::string> & active, std::vector<PlanSlot> & out)
{
  if (std::find(active.begin(), active.end(), def.type_name) != active.end()) {
    active.push_back(def.type_name);
    throw ResolveError("cyclic nesting through '" + def.type_name + "'", active);
  }
  active.push_back(def.type_name);

  for (const auto & field : def.fields) {
    const std::string path = prefix.empty() ? field.name : prefix + "." + field.name;
    const FieldType & type = field.type;

    if (!type.is_nested()) {
      PlanSlot slot;
      slot.path = path;
      slot.primitive = type.primitive();
      switch (type.array) {
        case ArrayKind::None: slot.arity = Arity::scalar(); break;
        case ArrayKind::Fixed: slot.arity = Arity::fixed(type.length); break;
        case ArrayKind::Bounded: slot.arity = Arity::dynamic(type.length); break;
        case ArrayKind::Unbounded: slot.arity = Arity::dynamic(); break;
      }
      out.push_back(std::move(slot));
      continue;
    }

    const MessageTypeDef * nested = registry.find(type.nested());
    if (nested == nullptr) {
      throw ResolveError(
              "type '" + def.type_name + "' field '" + field.name + "': unresolved type '" +
              type.nested() + "'");
    }
    switch (type.array) {
      case ArrayKind::None:
        expand_fields(registry, *nested, path, active, out);
        break;
      case ArrayKind::Fixed:
        for (std::size_t i = 0; i < type.length; ++i) {
          expand_fields(registry, *nested, path + "[" + std::to_string(i) + "]", active, out);
        }
        break;
      case ArrayKind::Bounded:
      case ArrayKind::Unbounded: {
          PlanSlot group;
          group.path = path;
          group.kind = PlanSlot::Kind::Group;
          group.arity = type.array == ArrayKind::Bounded ?
            Arity::dynamic(type.length) : Arity::dynamic();
          expand_fields(registry, *nested, "", active, group.children);
          out.push_back(std::move(group));
          break;
        }
    }
  }
  active.pop_back();
}

}  // namespace detail

/// Depth-first, declaration-order expansion of `type_name` into primitive slots.
/// Fixed arrays of nested types unroll into one copy of the element layout per
/// index (`path[i].field`); dynamic arrays of nested types become group slots.
inline SerializationPlan flatten(const TypeRegistry & registry, std::string_view type_name)
{
  SerializationPlan plan;
  plan.type_name = std::string(type_name);
  std::vector<std::string> active;
  detail::expand_fields(registry, registry.at(type_name), "", active, plan.slots);

  bool dynamic = std::any_of(
    plan.slots.begin(), plan.slots.end(), [](const PlanSlot & s) {return s.is_dynamic();});
  if (!dynamic) {
    std::size_t total = 0;
    for (const auto & slot : plan.slots) {
      total += slot.static_bytes();
    }
    plan.fixed_size_bytes = total;
  }
  return plan;
}

inline nlohmann::ordered_json slot_to_json(const PlanSlot & slot)
{
  nlohmann::ordered_json j;
  j["path"] = slot.path;
  j["type"] = slot.is_group() ? std::string("group") : std::string(primitive_name(slot.primitive));
  switch (slot.arity.kind) {
    case Arity::Kind::Scalar:
      j["arity"] = "scalar";
      break;
    case Arity::Kind::Fixed:
      j["arity"] = "fixed";
      j["length"] = slot.arity.length;
      break;
    case Arity::Kind::Dynamic:
      j["arity"] = "dynamic";
      j["max"] = slot.arity.max ? nlohmann::ordered_json(*slot.arity.max) : nullptr;
      break;
  }
  if (slot.is_group()) {
    j["slots"] = nlohmann::ordered_json::array();
    for (const auto & child : slot.children) {
      j["slots"].push_back(slot_to_json(child));
    }
  }
  return j;
}

/// Plan dump: {type_name, slots[], fixed_size_bytes?}.
inline nlohmann::ordered_json plan_to_json(const SerializationPlan & plan)
{
  nlohmann::ordered_json j;
  j["type_name"] = plan.type_name;
  j["slots"] = nlohmann::ordered_json::array();
  for (const auto & slot : plan.slots) {
    j["slots"].push_back(slot_to_json(slot));
  }
  if (plan.fixed_size_bytes) {
    j["fixed_size_bytes"] = *plan.fixed_size_bytes;
  }
  return j;
}

}  // namespace streamdds

#endif  // STREAMDDS__PLAN_HPP_
