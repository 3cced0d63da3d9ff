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

#ifndef STREAMDDS__MSGDEF_HPP_
#define STREAMDDS__MSGDEF_HPP_

// Message definitions in the ROS 2 .msg grammar subset:
//
//   <type> <field_name>          field
//   <type> <CONST_NAME>=<value>  constant (parsed, never serialized)
//   # comment
//
// where <type> is a primitive, `Name` (same package) or `pkg/Name`, optionally
// followed by `[]`, `[N]` or `[<=N]`. `byte` and `char` are accepted as uint8.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "streamdds/errors.hpp"

namespace streamdds
{

enum class Primitive
{
  Bool,
  Int8,
  UInt8,
  Int16,
  UInt16,
  Int32,
  UInt32,
  Int64,
  UInt64,
  Float32,
  Float64,
  String,
};

inline constexpr Primitive kAllPrimitives[] = {
  Primitive::Bool, Primitive::Int8, Primitive::UInt8, Primitive::Int16,
  Primitive::UInt16, Primitive::Int32, Primitive::UInt32, Primitive::Int64,
  Primitive::UInt64, Primitive::Float32, Primitive::Float64, Primitive::String,
};

inline std::string_view primitive_name(Primitive p)
{
  switch (p) {
    case Primitive::Bool: return "bool";
    case Primitive::Int8: return "int8";
    case Primitive::UInt8: return "uint8";
    case Primitive::Int16: return "int16";
    case Primitive::UInt16: return "uint16";
    case Primitive::Int32: return "int32";
    case Primitive::UInt32: return "uint32";
    case Primitive::Int64: return "int64";
    case Primitive::UInt64: return "uint64";
    case Primitive::Float32: return "float32";
    case Primitive::Float64: return "float64";
    case Primitive::String: return "string";
  }
  return "?";
}

inline std::optional<Primitive> primitive_from_name(std::string_view name)
{
  for (Primitive p : kAllPrimitives) {
    if (primitive_name(p) == name) {
      return p;
    }
  }
  if (name == "byte" || name == "char") {
    return Primitive::UInt8;
  }
  return std::nullopt;
}

/// Encoded width in bytes; 0 for string (length-prefixed, variable).
inline constexpr std::size_t primitive_width(Primitive p)
{
  switch (p) {
    case Primitive::Bool:
    case Primitive::Int8:
    case Primitive::UInt8: return 1;
    case Primitive::Int16:
    case Primitive::UInt16: return 2;
    case Primitive::Int32:
    case Primitive::UInt32:
    case Primitive::Float32: return 4;
    case Primitive::Int64:
    case Primitive::UInt64:
    case Primitive::Float64: return 8;
    case Primitive::String: return 0;
  }
  return 0;
}

enum class ArrayKind
{
  None,
  Fixed,      // T[N]
  Bounded,    // T[<=N]
  Unbounded,  // T[]
};

struct FieldType
{
  /// Primitive element or fully qualified nested type name.
  std::variant<Primitive, std::string> element;
  ArrayKind array = ArrayKind::None;
  /// N for fixed arrays, the bound for bounded arrays, unused otherwise.
  std::size_t length = 0;

  bool is_nested() const {return std::holds_alternative<std::string>(element);}
  Primitive primitive() const {return std::get<Primitive>(element);}
  const std::string & nested() const {return std::get<std::string>(element);}
  bool is_dynamic_array() const
  {
    return array == ArrayKind::Bounded || array == ArrayKind::Unbounded;
  }

  bool operator==(const FieldType &) const = default;
};

struct FieldDef
{
  std::string name;
  FieldType type;

  bool operator==(const FieldDef &) const = default;
};

using ConstantValue = std::variant<bool, std::int64_t, std::uint64_t, double, std::string>;

struct ConstantDef
{
  std::string name;
  Primitive type;
  ConstantValue value;

  bool operator==(const ConstantDef &) const = default;
};

struct MessageTypeDef
{
  std::string type_name;
  std::vector<FieldDef> fields;
  std::vector<ConstantDef> constants;

  const FieldDef * find_field(std::string_view name) const
  {
    auto it = std::find_if(
      fields.begin(), fields.end(), [&](const FieldDef & f) {return f.name == name;});
    return it == fields.end() ? nullptr : &*it;
  }

  bool operator==(const MessageTypeDef &) const = default;
};

class TypeRegistry
{
public:
  using Map = std::map<std::string, MessageTypeDef, std::less<>>;

  /// Throws ResolveError if the name is already registered.
  void add(MessageTypeDef def)
  {
    std::string name = def.type_name;
    auto [it, inserted] = types_.emplace(name, std::move(def));
    if (!inserted) {
      throw ResolveError("duplicate type '" + name + "'");
    }
  }

  bool contains(std::string_view name) const {return types_.find(name) != types_.end();}

  const MessageTypeDef * find(std::string_view name) const
  {
    auto it = types_.find(name);
    return it == types_.end() ? nullptr : &it->second;
  }

  const MessageTypeDef & at(std::string_view name) const
  {
    if (const auto * def = find(name)) {
      return *def;
    }
    throw ResolveError("unknown type '" + std::string(name) + "'");
  }

  std::size_t size() const {return types_.size();}
  bool empty() const {return types_.empty();}
  Map::const_iterator begin() const {return types_.begin();}
  Map::const_iterator end() const {return types_.end();}

private:
  Map types_;
};

namespace detail
{

inline std::string_view trim(std::string_view s)
{
  auto is_space = [](char c) {return std::isspace(static_cast<unsigned char>(c)) != 0;};
  while (!s.empty() && is_space(s.front())) {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_space(s.back())) {
    s.remove_suffix(1);
  }
  return s;
}

inline bool all_of(std::string_view s, bool (*pred)(char))
{
  return std::all_of(s.begin(), s.end(), pred);
}

inline bool is_lower_or_digit_or_underscore(char c)
{
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

inline bool is_upper_or_digit_or_underscore(char c)
{
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline bool is_alnum(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

inline bool is_digit(char c)
{
  return c >= '0' && c <= '9';
}

inline bool is_field_name(std::string_view s)
{
  return !s.empty() && s.front() >= 'a' && s.front() <= 'z' &&
         all_of(s, is_lower_or_digit_or_underscore);
}

inline bool is_constant_name(std::string_view s)
{
  return !s.empty() && s.front() >= 'A' && s.front() <= 'Z' &&
         all_of(s, is_upper_or_digit_or_underscore);
}

inline bool is_package_name(std::string_view s)
{
  return is_field_name(s);
}

inline bool is_message_name(std::string_view s)
{
  return !s.empty() && s.front() >= 'A' && s.front() <= 'Z' && all_of(s, is_alnum);
}

/// `int33`, `uint7`, `float16`: spelled like a sized primitive but not one.
inline bool looks_like_sized_primitive(std::string_view s)
{
  for (std::string_view prefix : {"uint", "int", "float"}) {
    if (s.size() > prefix.size() && s.substr(0, prefix.size()) == prefix) {
      return all_of(s.substr(prefix.size()), is_digit);
    }
  }
  return false;
}

inline std::optional<std::size_t> parse_count(std::string_view s)
{
  if (s.empty() || !all_of(s, is_digit)) {
    return std::nullopt;
  }
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace detail

/// Splits `pkg/Name`; throws std::invalid_argument when not namespaced.
inline std::pair<std::string, std::string> split_type_name(std::string_view type_name)
{
  auto slash = type_name.find('/');
  if (slash == std::string_view::npos ||
    !detail::is_package_name(type_name.substr(0, slash)) ||
    !detail::is_message_name(type_name.substr(slash + 1)))
  {
    throw std::invalid_argument("expected a type name of the form pkg/Name, got '" +
            std::string(type_name) + "'");
  }
  return {std::string(type_name.substr(0, slash)), std::string(type_name.substr(slash + 1))};
}

namespace detail
{

class MsgParser
{
public:
  MsgParser(std::string_view type_name, std::string source_label)
  : label_(std::move(source_label))
  {
    try {
      package_ = split_type_name(type_name).first;
    } catch (const std::invalid_argument & e) {
      throw ParseError(label_, 0, e.what());
    }
    def_.type_name = std::string(type_name);
  }

  MessageTypeDef parse(std::string_view text)
  {
    std::size_t line_no = 0;
    while (!text.empty()) {
      ++line_no;
      auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
      parse_line(line, line_no);
    }
    return std::move(def_);
  }

private:
  [[noreturn]] void fail(std::size_t line, const std::string & what) const
  {
    throw ParseError(label_, line, what);
  }

  FieldType parse_type(std::string_view token, std::size_t line) const
  {
    FieldType type;
    std::string_view base = token;
    auto bracket = token.find('[');
    if (bracket != std::string_view::npos) {
      base = token.substr(0, bracket);
      std::string_view suffix = token.substr(bracket);
      if (suffix.size() < 2 || suffix.back() != ']') {
        fail(line, "malformed array suffix in '" + std::string(token) + "'");
      }
      std::string_view inner = suffix.substr(1, suffix.size() - 2);
      if (inner.empty()) {
        type.array = ArrayKind::Unbounded;
      } else {
        bool bounded = inner.substr(0, 2) == "<=";
        if (bounded) {
          inner.remove_prefix(2);
        }
        auto n = parse_count(inner);
        if (!n) {
          fail(line, "malformed array size in '" + std::string(token) + "'");
        }
        if (*n == 0) {
          fail(line, "array size must be at least 1 in '" + std::string(token) + "'");
        }
        type.array = bounded ? ArrayKind::Bounded : ArrayKind::Fixed;
        type.length = *n;
      }
    }

    if (base.find("<=") != std::string_view::npos) {
      fail(line, "bounded strings are not supported: '" + std::string(token) + "'");
    }
    if (auto p = primitive_from_name(base)) {
      type.element = *p;
      return type;
    }
    if (looks_like_sized_primitive(base)) {
      fail(line, "unknown primitive type '" + std::string(base) + "'");
    }
    auto slash = base.find('/');
    if (slash == std::string_view::npos) {
      if (!is_message_name(base)) {
        fail(line, "unknown type '" + std::string(base) + "'");
      }
      type.element = package_ + "/" + std::string(base);
      return type;
    }
    if (!is_package_name(base.substr(0, slash)) || !is_message_name(base.substr(slash + 1))) {
      fail(line, "malformed type name '" + std::string(base) + "'");
    }
    type.element = std::string(base);
    return type;
  }

  ConstantValue parse_constant_value(
    Primitive type, std::string_view text, std::size_t line) const
  {
    const std::string original(text);
    auto bad = [&]() {
        return ParseError(
          label_, line, "invalid " + std::string(primitive_name(type)) + " constant value '" +
          original + "'");
      };
    switch (type) {
      case Primitive::Bool: {
          std::string lower(text);
          std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
              return static_cast<char>(std::tolower(c));
            });
          if (lower == "true" || lower == "1") {
            return true;
          }
          if (lower == "false" || lower == "0") {
            return false;
          }
          throw bad();
        }
      case Primitive::Int8:
      case Primitive::Int16:
      case Primitive::Int32:
      case Primitive::Int64: {
          std::int64_t v = 0;
          auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
          if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw bad();
          }
          const int bits = static_cast<int>(primitive_width(type)) * 8;
          if (bits < 64) {
            const std::int64_t hi = (std::int64_t{1} << (bits - 1)) - 1;
            if (v > hi || v < -hi - 1) {
              throw bad();
            }
          }
          return v;
        }
      case Primitive::UInt8:
      case Primitive::UInt16:
      case Primitive::UInt32:
      case Primitive::UInt64: {
          std::uint64_t v = 0;
          auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
          if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw bad();
          }
          const int bits = static_cast<int>(primitive_width(type)) * 8;
          if (bits < 64 && v > ((std::uint64_t{1} << bits) - 1)) {
            throw bad();
          }
          return v;
        }
      case Primitive::Float32:
      case Primitive::Float64: {
          double v = 0;
          auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
          if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw bad();
          }
          return v;
        }
      case Primitive::String: {
          if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') &&
            text.back() == text.front())
          {
            text = text.substr(1, text.size() - 2);
          }
          return std::string(text);
        }
    }
    throw bad();
  }

  void parse_line(std::string_view raw, std::size_t line)
  {
    if (!raw.empty() && raw.back() == '\r') {
      raw.remove_suffix(1);
    }
    std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') {
      return;
    }
    auto ws = text.find_first_of(" \t");
    if (ws == std::string_view::npos) {
      fail(line, "expected '<type> <name>', got '" + std::string(text) + "'");
    }
    FieldType type = parse_type(text.substr(0, ws), line);
    std::string_view rest = trim(text.substr(ws));

    // String constants keep '#' in their value; everything else strips comments first.
    auto eq = rest.find('=');
    bool is_string = !type.is_nested() && type.primitive() == Primitive::String;
    if (!is_string || eq == std::string_view::npos) {
      rest = trim(rest.substr(0, rest.find('#')));
      eq = rest.find('=');
    }

    if (eq != std::string_view::npos) {
      std::string_view name = trim(rest.substr(0, eq));
      std::string_view value = trim(rest.substr(eq + 1));
      if (type.is_nested() || type.array != ArrayKind::None) {
        fail(line, "constants must have a primitive scalar type");
      }
      if (!is_constant_name(name)) {
        fail(line, "invalid constant name '" + std::string(name) + "'");
      }
      if (value.empty()) {
        fail(line, "missing value for constant '" + std::string(name) + "'");
      }
      for (const auto & c : def_.constants) {
        if (c.name == name) {
          fail(line, "duplicate constant '" + std::string(name) + "'");
        }
      }
      def_.constants.push_back(
        ConstantDef{std::string(name), type.primitive(),
          parse_constant_value(type.primitive(), value, line)});
      return;
    }

    if (rest.find_first_of(" \t") != std::string_view::npos) {
      fail(line, "default values are not supported: '" + std::string(text) + "'");
    }
    if (!is_field_name(rest)) {
      fail(line, "invalid field name '" + std::string(rest) + "'");
    }
    if (def_.find_field(rest) != nullptr) {
      fail(line, "duplicate field name '" + std::string(rest) + "'");
    }
    def_.fields.push_back(FieldDef{std::string(rest), std::move(type)});
  }

  std::string label_;
  std::string package_;
  MessageTypeDef def_;
};

}  // namespace detail

/// Parses one .msg file. `type_name` must be `pkg/Name`; unqualified nested
/// references resolve into the same package.
inline MessageTypeDef parse_msg_file(
  std::string_view source_text, std::string_view type_name,
  std::string source_label = {})
{
  if (source_label.empty()) {
    source_label = std::string(type_name);
  }
  return detail::MsgParser(type_name, std::move(source_label)).parse(source_text);
}

/// Verifies every nested reference resolves and the nesting graph is acyclic.
/// Returns the registry unchanged on success.
inline TypeRegistry resolve(TypeRegistry registry)
{
  for (const auto & [name, def] : registry) {
    for (const auto & field : def.fields) {
      if (field.type.is_nested() && !registry.contains(field.type.nested())) {
        throw ResolveError(
                "type '" + name + "' field '" + field.name + "': unresolved type '" +
                field.type.nested() + "'");
      }
    }
  }

  enum class Mark { White, Gray, Black };
  std::map<std::string, Mark, std::less<>> marks;
  std::vector<std::string> stack;

  auto visit = [&](auto & self, const std::string & name) -> void {
      marks[name] = Mark::Gray;
      stack.push_back(name);
      for (const auto & field : registry.at(name).fields) {
        if (!field.type.is_nested()) {
          continue;
        }
        const std::string & next = field.type.nested();
        Mark m = marks.count(next) ? marks[next] : Mark::White;
        if (m == Mark::Gray) {
          auto start = std::find(stack.begin(), stack.end(), next);
          std::vector<std::string> cycle(start, stack.end());
          cycle.push_back(next);
          std::string text;
          for (std::size_t i = 0; i < cycle.size(); ++i) {
            text += (i ? " -> " : "") + cycle[i];
          }
          throw ResolveError("cyclic nesting: " + text, std::move(cycle));
        }
        if (m == Mark::White) {
          self(self, next);
        }
      }
      stack.pop_back();
      marks[name] = Mark::Black;
    };

  for (const auto & entry : registry) {
    if (!marks.count(entry.first)) {
      visit(visit, entry.first);
    }
  }
  return registry;
}

/// Loads every `<root>/<pkg>/msg/<Name>.msg` as type `<pkg>/<Name>`.
/// The result is not resolved; call resolve() on it.
inline TypeRegistry load_msg_dir(const std::filesystem::path & root)
{
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) {
    throw Error("message directory not found: " + root.string());
  }
  std::vector<fs::path> files;
  for (const auto & pkg : fs::directory_iterator(root)) {
    fs::path msg_dir = pkg.path() / "msg";
    if (!pkg.is_directory() || !fs::is_directory(msg_dir)) {
      continue;
    }
    for (const auto & entry : fs::directory_iterator(msg_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".msg") {
        files.push_back(entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());

  TypeRegistry registry;
  for (const auto & file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      throw Error("cannot read " + file.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string type_name =
      file.parent_path().parent_path().filename().string() + "/" + file.stem().string();
    registry.add(parse_msg_file(buffer.str(), type_name, file.string()));
  }
  return registry;
}

}  // namespace streamdds

#endif  // STREAMDDS__MSGDEF_HPP_
