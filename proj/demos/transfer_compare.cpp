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

// Compares the double-copy baseline with the streaming transport over a
// short size ladder and prints a Markdown table.

#include <iostream>
#include <string>

#include "streamdds/bench.hpp"

namespace sb = streamdds::bench;

int main(int argc, char ** argv)
{
  const std::string sizes = argc > 1 ? argv[1] : "3k,50k,786k";
  const std::size_t reps = argc > 2 ? std::stoul(argv[2]) : 200;
  auto report = sb::bench_transfer(sb::parse_size_list(sizes), reps);
  std::cout << sb::emit_report(report, sb::ReportFormat::Markdown);
  return 0;
}
