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

// Three-node pipeline: an external source, a sequential scaler and a
// dataflow checksum stage that forwards words as they arrive.

#include <cstdint>
#include <iostream>
#include <numeric>
#include <span>
#include <vector>

#include "streamdds/streamdds.hpp"

namespace sd = streamdds;

namespace
{

constexpr const char * kConfig = R"(
node source
  pub raw demo/Reading

node scale
  sub raw demo/Reading
  pub scaled demo/Reading

node relay
  sub scaled demo/Reading
  pub out demo/Reading

node sink
  sub out demo/Reading
)";

sd::TypeRegistry demo_registry()
{
  sd::TypeRegistry registry;
  registry.add(sd::parse_msg_file("uint32 id\nfloat64[] samples\n", "demo/Reading"));
  return sd::resolve(std::move(registry));
}

}  // namespace

int main()
{
  auto graph = sd::build_topology(sd::parse_config(kConfig), demo_registry());
  for (const auto & d : sd::validate(graph)) {
    std::cerr << sd::to_string(d) << '\n';
  }
  std::cout << sd::explain(graph) << '\n';

  std::uint64_t relayed_words = 0;
  sd::KernelMap kernels;
  kernels.insert_or_assign("source", sd::NodeKernel::external());
  kernels.insert_or_assign("sink", sd::NodeKernel::external());
  kernels.insert_or_assign(
    "scale", sd::NodeKernel::sequential(
      [](const sd::PortValues & in, sd::PortValues & out) {
        sd::MessageValue msg = in.at("raw");
        auto samples = msg.at("samples").as<std::vector<double>>();
        for (auto & s : samples) {
          s *= 0.5;
        }
        msg.set("samples", std::move(samples));
        out.insert_or_assign("scaled", std::move(msg));
      }));
  kernels.insert_or_assign(
    "relay", sd::NodeKernel::dataflow(
      [&relayed_words](sd::NodeContext & ctx) {
        std::vector<std::uint32_t> buf(64);
        auto & in = ctx.subscriber("scaled");
        auto & out = ctx.publisher("out");
        for (;;) {
          auto r = in.read_words(buf);
          relayed_words += r.count;
          out.write_words(std::span<const std::uint32_t>(buf.data(), r.count), r.end_of_message);
          if (r.end_of_message) {
            return;
          }
        }
      }));

  auto inst = sd::instantiate(std::move(graph), kernels);
  inst->start();
  auto & pub = inst->publisher("source", "raw");
  auto & sub = inst->subscriber("sink", "out");
  for (std::uint32_t id = 0; id < 3; ++id) {
    std::vector<double> samples(4 + id);
    std::iota(samples.begin(), samples.end(), 1.0);
    pub.publish_blocking(sd::MessageValue{{"id", id}, {"samples", samples}});
    auto got = sub.take_blocking();
    std::cout << "received " << sd::to_string(got) << '\n';
  }
  inst->shutdown();
  std::cout << "relay forwarded " << relayed_words << " words\n\n";
  inst->write_trace_csv(std::cout);
  return 0;
}
