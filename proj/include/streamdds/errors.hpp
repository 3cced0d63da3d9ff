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

#ifndef STREAMDDS__ERRORS_HPP_
#define STREAMDDS__ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace streamdds
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Text-format error (.msg files, topology configs). Line numbers are 1-based; 0 means unknown.
class ParseError : public Error
{
public:
  ParseError(std::string source, std::size_t line, const std::string & what)
  : Error(format(source, line, what)), source_(std::move(source)), line_(line)
  {}

  const std::string & source() const noexcept {return source_;}
  std::size_t line() const noexcept {return line_;}

private:
  static std::string format(const std::string & source, std::size_t line, const std::string & what)
  {
    std::string out = source.empty() ? std::string("<input>") : source;
    if (line > 0) {
      out += ":" + std::to_string(line);
    }
    return out + ": " + what;
  }

  std::string source_;
  std::size_t line_;
};

/// Unresolved type reference or cyclic nesting in a type registry.
class ResolveError : public Error
{
public:
  explicit ResolveError(const std::string & what)
  : Error(what) {}

  ResolveError(const std::string & what, std::vector<std::string> cycle)
  : Error(what), cycle_(std::move(cycle)) {}

  /// For cycle errors: the type names along the cycle, first name repeated at the end.
  const std::vector<std::string> & cycle() const noexcept {return cycle_;}

private:
  std::vector<std::string> cycle_;
};

/// Serialization or deserialization failure. `path()` names the offending field.
class CodecError : public Error
{
public:
  CodecError(std::string path, const std::string & what)
  : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  const std::string & path() const noexcept {return path_;}

private:
  std::string path_;
};

class TopologyError : public Error
{
public:
  using Error::Error;
};

/// Raised by blocking and non-blocking port operations once the runtime is shut down.
class ShutdownError : public Error
{
public:
  ShutdownError()
  : Error("runtime shut down") {}
};

}  // namespace streamdds

#endif  // STREAMDDS__ERRORS_HPP_
