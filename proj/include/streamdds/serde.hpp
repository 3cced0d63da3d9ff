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

#ifndef STREAMDDS__SERDE_HPP_
#define STREAMDDS__SERDE_HPP_

// Wire format: slots in plan order, packed (no alignment padding), little-endian.
// bool is one byte (0/1). Strings, dynamic arrays and groups carry a uint32
// element count (byte count for strings) before their elements. The payload is
// zero-padded to a 4-byte boundary. There is no header: one frame is one message.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streamdds/errors.hpp"
#include "streamdds/msgdef.hpp"
#include "streamdds/plan.hpp"
#include "streamdds/value.hpp"

namespace streamdds
{

static_assert(
  std::endian::native == std::endian::little,
  "frame words are stored in host order and assumed little-endian");

/// One serialized message as a sequence of 32-bit words.
struct Frame
{
  std::vector<std::uint32_t> words;

  std::size_t word_count() const {return words.size();}
  std::size_t byte_size() const {return words.size() * 4;}
  std::span<const std::byte> bytes() const {return std::as_bytes(std::span(words));}

  bool operator==(const Frame &) const = default;
};

namespace detail
{

class ByteCounter
{
public:
  void put(const void *, std::size_t n) {size_ += n;}
  std::size_t size() const {return size_;}

private:
  std::size_t size_ = 0;
};

class ByteWriter
{
public:
  explicit ByteWriter(std::byte * out)
  : out_(out) {}

  void put(const void * src, std::size_t n)
  {
    if (n != 0) {
      std::memcpy(out_, src, n);
      out_ += n;
    }
  }

private:
  std::byte * out_;
};

inline std::string join_path(std::string_view prefix, std::string_view path)
{
  if (prefix.empty()) {
    return std::string(path);
  }
  return std::string(prefix) + "." + std::string(path);
}

/// Resolves a plan path (`a.b[2].c`) inside `root`; nullptr with `error` set on failure.
inline const Value * lookup_path(
  const MessageValue & root, std::string_view path, std::string & error)
{
  const MessageValue * current = &root;
  const Value * found = nullptr;
  while (true) {
    auto dot = path.find('.');
    std::string_view step = path.substr(0, dot);
    std::optional<std::size_t> index;
    auto bracket = step.find('[');
    if (bracket != std::string_view::npos) {
      index = std::stoul(std::string(step.substr(bracket + 1, step.size() - bracket - 2)));
      step = step.substr(0, bracket);
    }
    found = current->find(step);
    if (found == nullptr) {
      error = "missing field '" + std::string(step) + "'";
      return nullptr;
    }
    if (index) {
      const auto * elements = found->get_if<std::vector<MessageValue>>();
      if (elements == nullptr) {
        error = "expected message[], got " + found->kind_name();
        return nullptr;
      }
      if (*index >= elements->size()) {
        error = "fixed array of messages has " + std::to_string(elements->size()) +
          " elements, expected more than " + std::to_string(*index);
        return nullptr;
      }
      if (dot == std::string_view::npos) {
        error = "internal: indexed leaf path";
        return nullptr;
      }
      current = &(*elements)[*index];
    } else if (dot != std::string_view::npos) {
      current = found->get_if<MessageValue>();
      if (current == nullptr) {
        error = "expected message, got " + found->kind_name();
        return nullptr;
      }
    }
    if (dot == std::string_view::npos) {
      return found;
    }
    path.remove_prefix(dot + 1);
  }
}

template<class T, class Out>
void put_element(Out & out, const T & v)
{
  if constexpr (std::is_same_v<T, bool>) {
    std::uint8_t b = v ? 1 : 0;
    out.put(&b, 1);
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (v.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw CodecError("", "string too long");
    }
    std::uint32_t n = static_cast<std::uint32_t>(v.size());
    out.put(&n, 4);
    out.put(v.data(), v.size());
  } else {
    out.put(&v, sizeof(T));
  }
}

template<class T, class Out>
void put_elements(Out & out, const std::vector<T> & v)
{
  if constexpr (std::is_arithmetic_v<T> && !std::is_same_v<T, bool>) {
    out.put(v.data(), v.size() * sizeof(T));
  } else {
    for (const auto & e : v) {
      put_element<T>(out, e);
    }
  }
}

template<class Out>
void put_count(Out & out, std::size_t n, const std::string & path)
{
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw CodecError(path, "array too long");
  }
  std::uint32_t c = static_cast<std::uint32_t>(n);
  out.put(&c, 4);
}

template<class Out>
void encode_slots(
  const std::vector<PlanSlot> & slots, const MessageValue & root,
  const std::string & prefix, Out & out);

template<class Out>
void encode_slot(
  const PlanSlot & slot, const Value & value, const std::string & path, Out & out)
{
  if (slot.is_group()) {
    const auto * elements = value.get_if<std::vector<MessageValue>>();
    if (elements == nullptr) {
      throw CodecError(path, "expected message[], got " + value.kind_name());
    }
    if (slot.arity.max && elements->size() > *slot.arity.max) {
      throw CodecError(
              path, "bounded array holds " + std::to_string(elements->size()) +
              " elements, bound is " + std::to_string(*slot.arity.max));
    }
    put_count(out, elements->size(), path);
    for (std::size_t i = 0; i < elements->size(); ++i) {
      encode_slots(slot.children, (*elements)[i], path + "[" + std::to_string(i) + "]", out);
    }
    return;
  }

  dispatch_primitive(
    slot.primitive, [&](auto tag) {
      using T = primitive_t<decltype(tag)::value>;
      if (slot.arity.kind == Arity::Kind::Scalar) {
        const T * v = value.get_if<T>();
        if (v == nullptr) {
          throw CodecError(
            path, "expected " + std::string(primitive_name(slot.primitive)) + ", got " +
            value.kind_name());
        }
        put_element<T>(out, *v);
        return;
      }
      const auto * v = value.get_if<std::vector<T>>();
      if (v == nullptr) {
        throw CodecError(
          path, "expected " + std::string(primitive_name(slot.primitive)) + "[], got " +
          value.kind_name());
      }
      if (slot.arity.kind == Arity::Kind::Fixed) {
        if (v->size() != slot.arity.length) {
          throw CodecError(
            path, "fixed array holds " + std::to_string(v->size()) + " elements, expected " +
            std::to_string(slot.arity.length));
        }
      } else {
        if (slot.arity.max && v->size() > *slot.arity.max) {
          throw CodecError(
            path, "bounded array holds " + std::to_string(v->size()) +
            " elements, bound is " + std::to_string(*slot.arity.max));
        }
        put_count(out, v->size(), path);
      }
      put_elements<T>(out, *v);
    });
}

template<class Out>
void encode_slots(
  const std::vector<PlanSlot> & slots, const MessageValue & root,
  const std::string & prefix, Out & out)
{
  for (const auto & slot : slots) {
    std::string error;
    const Value * value = lookup_path(root, slot.path, error);
    if (value == nullptr) {
      throw CodecError(join_path(prefix, slot.path), error);
    }
    encode_slot(slot, *value, join_path(prefix, slot.path), out);
  }
}

class ByteReader
{
public:
  explicit ByteReader(std::span<const std::byte> data)
  : data_(data) {}

  std::size_t remaining() const {return data_.size() - pos_;}

  void take(void * dst, std::size_t n, const std::string & path)
  {
    if (n > remaining()) {
      throw CodecError(
              path, "truncated frame: need " + std::to_string(n) + " bytes, " +
              std::to_string(remaining()) + " left");
    }
    if (n != 0) {
      std::memcpy(dst, data_.data() + pos_, n);
    }
    pos_ += n;
  }

  std::uint32_t take_u32(const std::string & path)
  {
    std::uint32_t v = 0;
    take(&v, 4, path);
    return v;
  }

  std::span<const std::byte> rest() const {return data_.subspan(pos_);}

private:
  std::span<const std::byte> data_;
  std::size_t pos_ = 0;
};

/// Smallest possible encoding of one element of `slot` (used to reject absurd counts).
inline std::size_t min_element_bytes(const PlanSlot & slot)
{
  if (slot.is_group()) {
    std::size_t total = 0;
    for (const auto & child : slot.children) {
      std::size_t n = child.arity.kind == Arity::Kind::Fixed ? child.arity.length : 1;
      total += child.is_group() || child.arity.kind == Arity::Kind::Dynamic ?
        4 : n * (child.primitive == Primitive::String ? 4 : primitive_width(child.primitive));
    }
    return total;
  }
  return slot.primitive == Primitive::String ? 4 : primitive_width(slot.primitive);
}

// Zero-width elements (empty nested types) would let a count prefix allocate
// without consuming input.
inline constexpr std::size_t kMaxZeroWidthElements = std::size_t{1} << 16;

inline std::size_t take_count(
  ByteReader & in, const PlanSlot & slot, const std::string & path)
{
  std::size_t n = in.take_u32(path);
  if (slot.arity.max && n > *slot.arity.max) {
    throw CodecError(
            path, "count prefix " + std::to_string(n) + " exceeds bound " +
            std::to_string(*slot.arity.max));
  }
  std::size_t min = min_element_bytes(slot);
  if (min == 0 ? n > kMaxZeroWidthElements : n > in.remaining() / min) {
    throw CodecError(
            path, "count prefix " + std::to_string(n) + " exceeds remaining " +
            std::to_string(in.remaining()) + " bytes");
  }
  return n;
}

template<class T>
T take_element(ByteReader & in, const std::string & path)
{
  if constexpr (std::is_same_v<T, bool>) {
    std::uint8_t b = 0;
    in.take(&b, 1, path);
    if (b > 1) {
      throw CodecError(path, "invalid bool byte " + std::to_string(b));
    }
    return b != 0;
  } else if constexpr (std::is_same_v<T, std::string>) {
    std::uint32_t n = in.take_u32(path);
    if (n > in.remaining()) {
      throw CodecError(
              path, "string length " + std::to_string(n) + " exceeds remaining " +
              std::to_string(in.remaining()) + " bytes");
    }
    std::string s(n, '\0');
    in.take(s.data(), n, path);
    return s;
  } else {
    T v{};
    in.take(&v, sizeof(T), path);
    return v;
  }
}

template<class T>
std::vector<T> take_elements(ByteReader & in, std::size_t n, const std::string & path)
{
  std::vector<T> out;
  if constexpr (std::is_arithmetic_v<T> && !std::is_same_v<T, bool>) {
    if (n > in.remaining() / sizeof(T)) {
      throw CodecError(path, "truncated frame: array runs past the end");
    }
    out.resize(n);
    in.take(out.data(), n * sizeof(T), path);
  } else {
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(take_element<T>(in, path));
    }
  }
  return out;
}

/// Returns the storage for `path` inside `root`, creating intermediate messages
/// and fixed-array elements in traversal order.
inline Value & place_path(MessageValue & root, std::string_view path)
{
  MessageValue * current = &root;
  while (true) {
    auto dot = path.find('.');
    std::string_view step = path.substr(0, dot);
    if (dot == std::string_view::npos) {
      if (Value * v = current->find(step)) {
        return *v;
      }
      current->set(std::string(step), Value{});
      return *current->find(step);
    }
    auto bracket = step.find('[');
    if (bracket != std::string_view::npos) {
      std::size_t index =
        std::stoul(std::string(step.substr(bracket + 1, step.size() - bracket - 2)));
      step = step.substr(0, bracket);
      Value * v = current->find(step);
      if (v == nullptr || !v->is<std::vector<MessageValue>>()) {
        current->set(std::string(step), std::vector<MessageValue>{});
        v = current->find(step);
      }
      auto & elements = v->as<std::vector<MessageValue>>();
      if (elements.size() <= index) {
        elements.resize(index + 1);
      }
      current = &elements[index];
    } else {
      Value * v = current->find(step);
      if (v == nullptr || !v->is<MessageValue>()) {
        current->set(std::string(step), MessageValue{});
        v = current->find(step);
      }
      current = &v->as<MessageValue>();
    }
    path.remove_prefix(dot + 1);
  }
}

inline void decode_slots(
  const std::vector<PlanSlot> & slots, ByteReader & in, MessageValue & root,
  const std::string & prefix);

inline Value decode_slot(const PlanSlot & slot, ByteReader & in, const std::string & path)
{
  if (slot.is_group()) {
    std::size_t n = take_count(in, slot, path);
    std::vector<MessageValue> elements(n);
    for (std::size_t i = 0; i < n; ++i) {
      decode_slots(slot.children, in, elements[i], path + "[" + std::to_string(i) + "]");
    }
    return Value(std::move(elements));
  }
  return dispatch_primitive(
    slot.primitive, [&](auto tag) -> Value {
      using T = primitive_t<decltype(tag)::value>;
      switch (slot.arity.kind) {
        case Arity::Kind::Scalar:
          return Value(take_element<T>(in, path));
        case Arity::Kind::Fixed:
          return Value(take_elements<T>(in, slot.arity.length, path));
        case Arity::Kind::Dynamic:
          break;
      }
      std::size_t n = take_count(in, slot, path);
      return Value(take_elements<T>(in, n, path));
    });
}

inline void decode_slots(
  const std::vector<PlanSlot> & slots, ByteReader & in, MessageValue & root,
  const std::string & prefix)
{
  for (const auto & slot : slots) {
    place_path(root, slot.path) = decode_slot(slot, in, join_path(prefix, slot.path));
  }
}

}  // namespace detail

/// Encoded payload size in bytes before word padding. Throws CodecError on shape mismatch.
inline std::size_t encoded_size(const MessageValue & value, const SerializationPlan & plan)
{
  detail::ByteCounter counter;
  detail::encode_slots(plan.slots, value, "", counter);
  return counter.size();
}

/// Serializes into `frame`, reusing its storage.
inline void serialize_into(
  const MessageValue & value, const SerializationPlan & plan, Frame & frame)
{
  const std::size_t bytes = encoded_size(value, plan);
  frame.words.assign((bytes + 3) / 4, 0);
  auto out = std::as_writable_bytes(std::span(frame.words));
  detail::ByteWriter writer(out.data());
  detail::encode_slots(plan.slots, value, "", writer);
}

inline Frame serialize(const MessageValue & value, const SerializationPlan & plan)
{
  Frame frame;
  serialize_into(value, plan, frame);
  return frame;
}

/// Decodes a raw payload. Rejects truncation, oversized count prefixes,
/// unaligned payloads and anything after the message other than zero padding.
inline MessageValue deserialize_bytes(
  std::span<const std::byte> payload, const SerializationPlan & plan)
{
  detail::ByteReader in(payload);
  MessageValue root;
  detail::decode_slots(plan.slots, in, root, "");

  auto rest = in.rest();
  if (rest.size() >= 4) {
    throw CodecError("", "trailing bytes after message: " + std::to_string(rest.size()));
  }
  for (std::byte b : rest) {
    if (b != std::byte{0}) {
      throw CodecError("", "trailing non-padding bytes after message");
    }
  }
  if (payload.size() % 4 != 0) {
    throw CodecError("", "frame payload is not a whole number of words");
  }
  return root;
}

inline MessageValue deserialize(const Frame & frame, const SerializationPlan & plan)
{
  return deserialize_bytes(frame.bytes(), plan);
}

struct Conformance
{
  bool ok = true;
  /// Path of the first violation (empty when ok).
  std::string path;
  std::string reason;

  explicit operator bool() const {return ok;}
};

namespace detail
{

inline Conformance violation(std::string path, std::string reason)
{
  return Conformance{false, std::move(path), std::move(reason)};
}

inline Conformance conforms_message(
  const MessageValue & value, const MessageTypeDef & def, const TypeRegistry & registry,
  const std::string & prefix);

inline Conformance conforms_field(
  const Value & value, const FieldType & type, const TypeRegistry & registry,
  const std::string & path)
{
  auto check_length = [&](std::size_t n) -> Conformance {
      if (type.array == ArrayKind::Fixed && n != type.length) {
        return violation(
          path, "fixed array holds " + std::to_string(n) + " elements, expected " +
          std::to_string(type.length));
      }
      if (type.array == ArrayKind::Bounded && n > type.length) {
        return violation(
          path, "bounded array holds " + std::to_string(n) + " elements, bound is " +
          std::to_string(type.length));
      }
      return {};
    };

  if (type.is_nested()) {
    const MessageTypeDef * nested = registry.find(type.nested());
    if (nested == nullptr) {
      return violation(path, "unresolved type '" + type.nested() + "'");
    }
    if (type.array == ArrayKind::None) {
      const auto * m = value.get_if<MessageValue>();
      if (m == nullptr) {
        return violation(path, "expected message, got " + value.kind_name());
      }
      return conforms_message(*m, *nested, registry, path);
    }
    const auto * elements = value.get_if<std::vector<MessageValue>>();
    if (elements == nullptr) {
      return violation(path, "expected message[], got " + value.kind_name());
    }
    if (auto c = check_length(elements->size()); !c) {
      return c;
    }
    for (std::size_t i = 0; i < elements->size(); ++i) {
      auto c = conforms_message(
        (*elements)[i], *nested, registry, path + "[" + std::to_string(i) + "]");
      if (!c) {
        return c;
      }
    }
    return {};
  }

  return dispatch_primitive(
    type.primitive(), [&](auto tag) -> Conformance {
      using T = primitive_t<decltype(tag)::value>;
      const std::string expected(primitive_name(type.primitive()));
      if (type.array == ArrayKind::None) {
        if (!value.is<T>()) {
          return violation(path, "expected " + expected + ", got " + value.kind_name());
        }
        return {};
      }
      const auto * v = value.get_if<std::vector<T>>();
      if (v == nullptr) {
        return violation(path, "expected " + expected + "[], got " + value.kind_name());
      }
      return check_length(v->size());
    });
}

inline Conformance conforms_message(
  const MessageValue & value, const MessageTypeDef & def, const TypeRegistry & registry,
  const std::string & prefix)
{
  for (const auto & field : def.fields) {
    const std::string path = join_path(prefix, field.name);
    const Value * v = value.find(field.name);
    if (v == nullptr) {
      return violation(path, "missing field");
    }
    if (auto c = conforms_field(*v, field.type, registry, path); !c) {
      return c;
    }
  }
  for (const auto & f : value.fields()) {
    if (def.find_field(f.name) == nullptr) {
      return violation(join_path(prefix, f.name), "unexpected field");
    }
  }
  return {};
}

}  // namespace detail

/// Recursive shape check of `value` against `def`; reports the first violation.
inline Conformance conforms_to(
  const MessageValue & value, const MessageTypeDef & def, const TypeRegistry & registry)
{
  return detail::conforms_message(value, def, registry, "");
}

/// Lowercase hex, one 4-byte word per line, bytes in payload order.
inline std::string hex_dump(const Frame & frame)
{
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(frame.words.size() * 9);
  auto bytes = frame.bytes();
  for (std::size_t w = 0; w < frame.words.size(); ++w) {
    for (std::size_t b = 0; b < 4; ++b) {
      auto v = std::to_integer<unsigned>(bytes[w * 4 + b]);
      out.push_back(kDigits[v >> 4]);
      out.push_back(kDigits[v & 0xf]);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace streamdds

#endif  // STREAMDDS__SERDE_HPP_
