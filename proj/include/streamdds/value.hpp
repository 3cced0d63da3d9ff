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

#ifndef STREAMDDS__VALUE_HPP_
#define STREAMDDS__VALUE_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "streamdds/msgdef.hpp"

namespace streamdds
{

template<Primitive P>
struct primitive_type;

template<> struct primitive_type<Primitive::Bool> {using type = bool;};
template<> struct primitive_type<Primitive::Int8> {using type = std::int8_t;};
template<> struct primitive_type<Primitive::UInt8> {using type = std::uint8_t;};
template<> struct primitive_type<Primitive::Int16> {using type = std::int16_t;};
template<> struct primitive_type<Primitive::UInt16> {using type = std::uint16_t;};
template<> struct primitive_type<Primitive::Int32> {using type = std::int32_t;};
template<> struct primitive_type<Primitive::UInt32> {using type = std::uint32_t;};
template<> struct primitive_type<Primitive::Int64> {using type = std::int64_t;};
template<> struct primitive_type<Primitive::UInt64> {using type = std::uint64_t;};
template<> struct primitive_type<Primitive::Float32> {using type = float;};
template<> struct primitive_type<Primitive::Float64> {using type = double;};
template<> struct primitive_type<Primitive::String> {using type = std::string;};

template<Primitive P>
using primitive_t = typename primitive_type<P>::type;

template<Primitive P>
using PrimitiveTag = std::integral_constant<Primitive, P>;

/// Calls `f(PrimitiveTag<P>{})` for the runtime primitive `p`.
template<class F>
decltype(auto) dispatch_primitive(Primitive p, F && f)
{
  switch (p) {
    case Primitive::Bool: return f(PrimitiveTag<Primitive::Bool>{});
    case Primitive::Int8: return f(PrimitiveTag<Primitive::Int8>{});
    case Primitive::UInt8: return f(PrimitiveTag<Primitive::UInt8>{});
    case Primitive::Int16: return f(PrimitiveTag<Primitive::Int16>{});
    case Primitive::UInt16: return f(PrimitiveTag<Primitive::UInt16>{});
    case Primitive::Int32: return f(PrimitiveTag<Primitive::Int32>{});
    case Primitive::UInt32: return f(PrimitiveTag<Primitive::UInt32>{});
    case Primitive::Int64: return f(PrimitiveTag<Primitive::Int64>{});
    case Primitive::UInt64: return f(PrimitiveTag<Primitive::UInt64>{});
    case Primitive::Float32: return f(PrimitiveTag<Primitive::Float32>{});
    case Primitive::Float64: return f(PrimitiveTag<Primitive::Float64>{});
    case Primitive::String: break;
  }
  return f(PrimitiveTag<Primitive::String>{});
}

struct Field;
class Value;

/// A message instance: ordered named fields. Comparison ignores field order.
class MessageValue
{
public:
  MessageValue();
  MessageValue(std::initializer_list<Field> fields);
  MessageValue(const MessageValue &);
  MessageValue(MessageValue &&) noexcept;
  MessageValue & operator=(const MessageValue &);
  MessageValue & operator=(MessageValue &&) noexcept;
  ~MessageValue();

  /// Inserts or replaces.
  MessageValue & set(std::string name, Value value);
  const Value * find(std::string_view name) const;
  Value * find(std::string_view name);
  const Value & at(std::string_view name) const;
  bool erase(std::string_view name);

  const std::vector<Field> & fields() const {return fields_;}
  std::vector<Field> & fields() {return fields_;}
  std::size_t size() const {return fields_.size();}
  bool empty() const {return fields_.empty();}

  friend bool operator==(const MessageValue & a, const MessageValue & b);

private:
  std::vector<Field> fields_;
};

class Value
{
public:
  using Storage = std::variant<
    bool, std::int8_t, std::uint8_t, std::int16_t, std::uint16_t, std::int32_t, std::uint32_t,
    std::int64_t, std::uint64_t, float, double, std::string,
    std::vector<bool>, std::vector<std::int8_t>, std::vector<std::uint8_t>,
    std::vector<std::int16_t>, std::vector<std::uint16_t>, std::vector<std::int32_t>,
    std::vector<std::uint32_t>, std::vector<std::int64_t>, std::vector<std::uint64_t>,
    std::vector<float>, std::vector<double>, std::vector<std::string>,
    MessageValue, std::vector<MessageValue>>;

  Value()
  : data_(false) {}

  template<class T,
    class = std::enable_if_t<std::is_constructible_v<Storage, T &&> &&
    !std::is_same_v<std::decay_t<T>, Value>>>
  Value(T && v)  // NOLINT(runtime/explicit)
  : data_(std::forward<T>(v)) {}

  Value(const char * s)  // NOLINT(runtime/explicit)
  : data_(std::string(s)) {}

  const Storage & storage() const {return data_;}
  Storage & storage() {return data_;}

  template<class T>
  bool is() const {return std::holds_alternative<T>(data_);}

  template<class T>
  const T * get_if() const {return std::get_if<T>(&data_);}

  template<class T>
  T * get_if() {return std::get_if<T>(&data_);}

  template<class T>
  const T & as() const {return std::get<T>(data_);}

  template<class T>
  T & as() {return std::get<T>(data_);}

  /// Human-readable kind, e.g. "int32", "float64[]", "message", "message[]".
  std::string kind_name() const;

  friend bool operator==(const Value & a, const Value & b);

private:
  Storage data_;
};

struct Field
{
  std::string name;
  Value value;
};

// Out-of-line so that Field is complete.
inline MessageValue::MessageValue() = default;
inline MessageValue::MessageValue(std::initializer_list<Field> fields)
: fields_(fields) {}
inline MessageValue::MessageValue(const MessageValue &) = default;
inline MessageValue::MessageValue(MessageValue &&) noexcept = default;
inline MessageValue & MessageValue::operator=(const MessageValue &) = default;
inline MessageValue & MessageValue::operator=(MessageValue &&) noexcept = default;
inline MessageValue::~MessageValue() = default;

inline MessageValue & MessageValue::set(std::string name, Value value)
{
  if (Value * existing = find(name)) {
    *existing = std::move(value);
  } else {
    fields_.push_back(Field{std::move(name), std::move(value)});
  }
  return *this;
}

inline const Value * MessageValue::find(std::string_view name) const
{
  for (const auto & f : fields_) {
    if (f.name == name) {
      return &f.value;
    }
  }
  return nullptr;
}

inline Value * MessageValue::find(std::string_view name)
{
  for (auto & f : fields_) {
    if (f.name == name) {
      return &f.value;
    }
  }
  return nullptr;
}

inline const Value & MessageValue::at(std::string_view name) const
{
  if (const Value * v = find(name)) {
    return *v;
  }
  throw std::out_of_range("no field '" + std::string(name) + "'");
}

inline bool MessageValue::erase(std::string_view name)
{
  auto it = std::find_if(
    fields_.begin(), fields_.end(), [&](const Field & f) {return f.name == name;});
  if (it == fields_.end()) {
    return false;
  }
  fields_.erase(it);
  return true;
}

namespace detail
{

template<class T>
bool same_element(const T & a, const T & b)
{
  if constexpr (std::is_same_v<T, float>) {
    return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b);
  } else if constexpr (std::is_same_v<T, double>) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
  } else {
    return a == b;
  }
}

template<class T>
struct is_vector : std::false_type {};

template<class T>
struct is_vector<std::vector<T>>: std::true_type {};

template<class T>
constexpr std::string_view cpp_type_label()
{
  if constexpr (std::is_same_v<T, bool>) {return "bool";}
  if constexpr (std::is_same_v<T, std::int8_t>) {return "int8";}
  if constexpr (std::is_same_v<T, std::uint8_t>) {return "uint8";}
  if constexpr (std::is_same_v<T, std::int16_t>) {return "int16";}
  if constexpr (std::is_same_v<T, std::uint16_t>) {return "uint16";}
  if constexpr (std::is_same_v<T, std::int32_t>) {return "int32";}
  if constexpr (std::is_same_v<T, std::uint32_t>) {return "uint32";}
  if constexpr (std::is_same_v<T, std::int64_t>) {return "int64";}
  if constexpr (std::is_same_v<T, std::uint64_t>) {return "uint64";}
  if constexpr (std::is_same_v<T, float>) {return "float32";}
  if constexpr (std::is_same_v<T, double>) {return "float64";}
  if constexpr (std::is_same_v<T, std::string>) {return "string";}
  if constexpr (std::is_same_v<T, MessageValue>) {return "message";}
  return "?";
}

}  // namespace detail

inline bool operator==(const Value & a, const Value & b)
{
  if (a.data_.index() != b.data_.index()) {
    return false;
  }
  return std::visit(
    [&](const auto & lhs) -> bool {
      using T = std::decay_t<decltype(lhs)>;
      const auto & rhs = std::get<T>(b.data_);
      if constexpr (detail::is_vector<T>::value) {
        if (lhs.size() != rhs.size()) {
          return false;
        }
        for (std::size_t i = 0; i < lhs.size(); ++i) {
          if (!detail::same_element<typename T::value_type>(lhs[i], rhs[i])) {
            return false;
          }
        }
        return true;
      } else {
        return detail::same_element(lhs, rhs);
      }
    }, a.data_);
}

inline bool operator!=(const Value & a, const Value & b) {return !(a == b);}

inline bool operator==(const MessageValue & a, const MessageValue & b)
{
  if (a.fields_.size() != b.fields_.size()) {
    return false;
  }
  for (const auto & f : a.fields_) {
    const Value * other = b.find(f.name);
    if (other == nullptr || !(f.value == *other)) {
      return false;
    }
  }
  return true;
}

inline bool operator!=(const MessageValue & a, const MessageValue & b) {return !(a == b);}

inline std::string Value::kind_name() const
{
  return std::visit(
    [](const auto & v) -> std::string {
      using T = std::decay_t<decltype(v)>;
      if constexpr (detail::is_vector<T>::value) {
        return std::string(detail::cpp_type_label<typename T::value_type>()) + "[]";
      } else {
        return std::string(detail::cpp_type_label<T>());
      }
    }, data_);
}

inline std::ostream & operator<<(std::ostream & os, const MessageValue & m);

inline std::ostream & operator<<(std::ostream & os, const Value & value)
{
  auto put = [&os](const auto & x) {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, std::string>) {
        os << '"' << x << '"';
      } else if constexpr (std::is_same_v<T, std::int8_t> || std::is_same_v<T, std::uint8_t>) {
        os << static_cast<int>(x);
      } else if constexpr (std::is_same_v<T, bool>) {
        os << (x ? "true" : "false");
      } else {
        os << x;
      }
    };
  std::visit(
    [&](const auto & v) {
      using T = std::decay_t<decltype(v)>;
      if constexpr (detail::is_vector<T>::value) {
        os << '[';
        const std::size_t shown = std::min<std::size_t>(v.size(), 16);
        for (std::size_t i = 0; i < shown; ++i) {
          if (i) {
            os << ", ";
          }
          if constexpr (std::is_same_v<T, std::vector<bool>>) {
            put(static_cast<bool>(v[i]));
          } else {
            put(v[i]);
          }
        }
        if (shown < v.size()) {
          os << ", ... (" << v.size() << " elements)";
        }
        os << ']';
      } else {
        put(v);
      }
    }, value.storage());
  return os;
}

inline std::ostream & operator<<(std::ostream & os, const MessageValue & m)
{
  os << '{';
  bool first = true;
  for (const auto & f : m.fields()) {
    os << (first ? "" : ", ") << f.name << '=' << f.value;
    first = false;
  }
  return os << '}';
}

inline std::string to_string(const MessageValue & m)
{
  std::ostringstream os;
  os << m;
  return os.str();
}

}  // namespace streamdds

#endif  // STREAMDDS__VALUE_HPP_
