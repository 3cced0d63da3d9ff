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
// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "streamdds/bench/harness.hpp"
#include "streamdds/bench/report.hpp"
#include "streamdds/bench/stats.hpp"
#include "streamdds/runtime.hpp"
#include "streamdds/serde.hpp"
#include "streamdds/topology.hpp"
#include "support/generators.hpp"
#include "support/runtime_support.hpp"

namespace sd = streamdds;
namespace sb = streamdds::bench;
namespace st = streamdds::testing;
using namespace std::chrono_literals;

namespace
{

struct Outcome
{
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3)
{
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// ---- 1 ----------------------------------------------------------------------

void visit_slots(
  const std::vector<sd::PlanSlot> & slots, std::size_t depth,
  std::map<std::string, std::size_t> & kinds, std::size_t & max_depth)
{
  max_depth = std::max(max_depth, depth);
  for (const auto & slot : slots) {
    if (slot.is_group()) {
      visit_slots(slot.children, depth + 1, kinds, max_depth);
      continue;
    }
    std::string key(sd::primitive_name(slot.primitive));
    if (slot.arity.kind != sd::Arity::Kind::Scalar) {
      key += "[]";
    }
    ++kinds[key];
  }
}

Outcome serde_round_trip()
{
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t failures = 0;
  std::size_t max_depth_seen = 0;
  std::map<std::string, std::size_t> kinds;
  for (int trial = 0; trial < 10000; ++trial) {
    auto [reg, root] = st::random_registry(rng);
    auto plan = sd::flatten(reg, root);
    auto value = st::random_value(rng, reg, root);
    visit_slots(plan.slots, 1, kinds, max_depth_seen);
    if (!(sd::deserialize(sd::serialize(value, plan), plan) == value)) {
      ++failures;
    }
  }
  const double secs = seconds_since(t0);
  std::size_t primitive_kinds = 0;
  for (auto p : sd::kAllPrimitives) {
    primitive_kinds += kinds.count(std::string(sd::primitive_name(p))) ? 1 : 0;
  }
  const bool all_kinds = primitive_kinds == std::size(sd::kAllPrimitives);
  const bool strings = kinds.count("string") && kinds.count("string[]");
  return {failures == 0 && secs < 60.0 && all_kinds && strings,
    "10000 pairs, " + std::to_string(failures) + " failures, " + std::to_string(primitive_kinds) +
    "/" + std::to_string(std::size(sd::kAllPrimitives)) + " primitive kinds, max nesting " +
    std::to_string(max_depth_seen) + ", " + fmt(secs, 1) + " s"};
}

// ---- 2 ----------------------------------------------------------------------

sd::MessageValue payload(std::mt19937 & rng, std::uint32_t pub, std::uint32_t i)
{
  std::vector<std::uint8_t> data(8 + rng() % 600);
  for (auto & b : data) {
    b = static_cast<std::uint8_t>(rng());
  }
  std::memcpy(data.data(), &pub, 4);
  std::memcpy(data.data() + 4, &i, 4);
  return sd::MessageValue{{"data", std::move(data)}};
}

Outcome arbiter_atomicity()
{
  constexpr int kRuns = 20;
  constexpr std::uint32_t kPubs = 4;
  constexpr std::uint32_t kMessages = 1000;
  std::string cfg;
  for (std::uint32_t p = 0; p < kPubs; ++p) {
    cfg += "node p" + std::to_string(p) + "\n  pub t bench/Blob\n";
  }
  cfg += "node s\n  sub t bench/Blob\n";
  std::size_t violations = 0;
  std::size_t delivered_total = 0;
  for (int run = 0; run < kRuns; ++run) {
    auto graph = sd::build_topology(sd::parse_config(cfg), sb::bench_registry());
    sd::KernelMap kernels = st::all_external(graph);
    if (graph.arbiter_count() != 1) {
      return {false, "topology has no arbiter"};
    }
    auto inst = sd::instantiate(graph, kernels);
    inst->start();
    const auto & plan = sb::bench_plan("bench/Blob");
    // Multiset of published frames.
    std::map<std::vector<std::uint32_t>, int> expected;
    std::vector<std::vector<sd::Frame>> frames(kPubs);
    for (std::uint32_t p = 0; p < kPubs; ++p) {
      std::mt19937 rng(static_cast<std::uint32_t>(run * 131 + p));
      for (std::uint32_t i = 0; i < kMessages; ++i) {
        frames[p].push_back(sd::serialize(payload(rng, p, i), plan));
        ++expected[frames[p].back().words];
      }
    }
    std::vector<std::thread> pubs;
    for (std::uint32_t p = 0; p < kPubs; ++p) {
      pubs.emplace_back(
        [&, p] {
          auto & pub = inst->publisher("p" + std::to_string(p), "t");
          for (const auto & f : frames[p]) {
            pub.publish_frame(f);
          }
        });
    }
    auto & sub = inst->subscriber("s", "t");
    sd::Frame got;
    std::vector<std::uint32_t> next(kPubs, 0);
    for (std::uint32_t k = 0; k < kPubs * kMessages; ++k) {
      sub.take_frame(got);
      ++delivered_total;
      auto it = expected.find(got.words);
      if (it == expected.end() || it->second == 0) {
        ++violations;
        continue;
      }
      --it->second;
      // Per-publisher order is preserved as well.
      auto v = sd::deserialize(got, plan).at("data").as<std::vector<std::uint8_t>>();
      std::uint32_t p = 0;
      std::uint32_t i = 0;
      std::memcpy(&p, v.data(), 4);
      std::memcpy(&i, v.data() + 4, 4);
      if (p >= kPubs || i != next[p]++) {
        ++violations;
      }
    }
    for (auto & t : pubs) {
      t.join();
    }
    for (const auto & [words, left] : expected) {
      if (left != 0) {
        ++violations;
      }
    }
    inst->shutdown();
  }
  return {violations == 0,
    std::to_string(kRuns) + " runs x " + std::to_string(kPubs) + " publishers x " +
    std::to_string(kMessages) + " messages, " + std::to_string(delivered_total) + " delivered, " +
    std::to_string(violations) + " violations"};
}

// ---- 3 ----------------------------------------------------------------------

Outcome backpressure()
{
  std::string detail;
  bool pass = true;
  for (int k : {1, 4, 16}) {
    auto graph = st::compile_text(
      "node p\n  pub t std_msgs/Int32\nnode s\n  sub t std_msgs/Int32 fifo=" + std::to_string(k) + "\n");
    auto inst = sd::instantiate(graph, st::all_external(graph));
    inst->start();
    const int total = k + 8;
    std::atomic<int> completed{0};
    std::thread pub([&] {
        auto & p = inst->publisher("p", "t");
        for (int i = 0; i < total; ++i) {
          p.publish_blocking(st::int32_msg(i));
          completed = i + 1;
        }
      });
    st::eventually([&] {return completed.load() >= k;});
    const int after_fill = completed.load();
    // Stays blocked while nobody takes.
    const auto t_block = Clock::now();
    bool stayed = true;
    while (Clock::now() - t_block < 150ms) {
      if (completed.load() != k) {
        stayed = false;
      }
      std::this_thread::sleep_for(1ms);
    }
    const double blocked_ms = std::chrono::duration<double, std::milli>(Clock::now() - t_block).count();
    auto & s = inst->subscriber("s", "t");
    std::vector<int> got;
    got.push_back(s.take_blocking().at("data").as<std::int32_t>());
    const bool resumed = st::eventually([&] {return completed.load() >= k + 1;});
    while (static_cast<int>(got.size()) < total) {
      got.push_back(s.take_blocking().at("data").as<std::int32_t>());
    }
    pub.join();
    bool in_order = true;
    for (int i = 0; i < total; ++i) {
      in_order = in_order && got[static_cast<std::size_t>(i)] == i;
    }
    const bool ok = after_fill == k && stayed && blocked_ms >= 100.0 && resumed && in_order;
    pass = pass && ok;
    detail += "K=" + std::to_string(k) + ": " + std::to_string(after_fill) + " completed, blocked " +
      fmt(blocked_ms, 0) + " ms, " + (in_order ? "no loss" : "LOSS/REORDER") + (ok ? "" : " [bad]") +
      "; ";
    inst->shutdown();
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// ---- 4 ----------------------------------------------------------------------

Outcome broadcast()
{
  std::string cfg = "node p\n  pub t std_msgs/Int32\n";
  for (int i = 0; i < 5; ++i) {
    cfg += "node s" + std::to_string(i) + "\n  sub t std_msgs/Int32\n";
  }
  auto graph = st::compile_text(cfg);
  auto inst = sd::instantiate(graph, st::all_external(graph));
  inst->start();
  std::vector<std::vector<int>> got(5);
  std::vector<std::thread> subs;
  for (int i = 0; i < 5; ++i) {
    subs.emplace_back(
      [&, i] {
        auto & s = inst->subscriber("s" + std::to_string(i), "t");
        for (int k = 0; k < 1000; ++k) {
          got[static_cast<std::size_t>(i)].push_back(s.take_blocking().at("data").as<std::int32_t>());
        }
      });
  }
  auto & p = inst->publisher("p", "t");
  for (int k = 0; k < 1000; ++k) {
    p.publish_blocking(st::int32_msg(k));
  }
  for (auto & t : subs) {
    t.join();
  }
  inst->shutdown();
  std::size_t complete = 0;
  for (const auto & g : got) {
    bool ok = g.size() == 1000;
    for (std::size_t k = 0; ok && k < g.size(); ++k) {
      ok = g[k] == static_cast<int>(k);
    }
    complete += ok ? 1 : 0;
  }
  return {complete == 5 && graph.broadcaster_count() == 1,
    std::to_string(complete) + "/5 subscribers received all 1000 in publish order"};
}

// ---- 5 ----------------------------------------------------------------------

Outcome transfer_shape()
{
  const auto t0 = Clock::now();
  const std::vector<std::size_t> ladder{3, 12, 50, 196, 786, 3146};
  std::vector<std::size_t> sizes;
  for (auto kb : ladder) {
    sizes.push_back(kb * 1024);
  }
  auto report = sb::bench_transfer(sizes, 1000);
  const double secs = seconds_since(t0);
  std::cout << sb::emit_report(report, sb::ReportFormat::Markdown);
  std::vector<double> speedups;
  for (const auto & row : report.rows) {
    speedups.push_back(*row.speedup());
  }
  bool monotone = true;
  std::string first_rise;
  for (std::size_t i = 1; i < speedups.size(); ++i) {
    if (speedups[i] > speedups[i - 1]) {
      monotone = false;
      if (first_rise.empty()) {
        first_rise = report.rows[i - 1].label + "->" + report.rows[i].label;
      }
    }
  }
  const double last = speedups.back();
  const bool in_range = last >= 1.3 && last <= 3.0;
  std::string list;
  for (double s : speedups) {
    list += fmt(s, 2) + " ";
  }
  list.pop_back();
  return {monotone && in_range && secs < 300.0,
    "speedups [" + list + "], non-increasing: " + (monotone ? "yes" : "no (rises " + first_rise + ")") +
    ", 3146k speedup " + fmt(last, 2) + (in_range ? " in" : " outside") + " [1.3, 3.0], " +
    fmt(secs, 1) + " s"};
}

// ---- 6 ----------------------------------------------------------------------

Outcome overlap()
{
  auto probe = sb::probe_overlap(786 * 1024);
  const std::int64_t lead = probe.input_last_recv_ns - probe.output_first_recv_ns;
  auto seq = sb::bench_identity_chain(3, 786 * 1024, sb::ChainMode::Sequential, 200);
  auto df = sb::bench_identity_chain(3, 786 * 1024, sb::ChainMode::Dataflow, 200);
  const double ratio = df.latency.t_avg / seq.latency.t_avg;
  return {probe.overlapped() && ratio <= 0.7,
    "first output word " + fmt(static_cast<double>(lead) / 1e3, 1) +
    " us before last input word; 3-stage chain dataflow " + fmt(df.latency.t_avg / 1e6) +
    " ms vs sequential " + fmt(seq.latency.t_avg / 1e6) + " ms, ratio " + fmt(ratio, 2) + " (<= 0.70)"};
}

// ---- 7 ----------------------------------------------------------------------

Outcome chain_direction()
{
  const sb::ChainParams params;
  auto base = sb::bench_chain(sb::ChainMode::Sequential, sb::Subject::Baseline, 1000, params);
  auto seq = sb::bench_chain(sb::ChainMode::Sequential, sb::Subject::Streaming, 1000, params);
  auto df = sb::bench_chain(sb::ChainMode::Dataflow, sb::Subject::Streaming, 1000, params);

  // Implementation | t_avg (σ) [ms] | speedup over the baseline.
  std::cout << "| implementation | t_avg (σ) [ms] | speedup |\n|---|---|---|\n";
  auto line = [&](const char * name, const sb::Measurement & m) {
      std::cout << "| " << name << " | " << fmt(m.t_avg / 1e6, 3) << " (" << fmt(m.sigma / 1e6, 3) <<
        ") | " << fmt(base.latency.t_avg / m.t_avg, 2) << " |\n";
    };
  line("baseline (sequential)", base.latency);
  line("streaming (sequential)", seq.latency);
  line("streaming (dataflow)", df.latency);

  const bool faster = df.latency.t_avg < base.latency.t_avg;
  const bool steadier = df.latency.sigma < base.latency.sigma;
  return {faster && steadier,
    "streaming dataflow " + fmt(df.latency.t_avg / 1e6) + " (" + fmt(df.latency.sigma / 1e6) +
    ") ms vs baseline " + fmt(base.latency.t_avg / 1e6) + " (" + fmt(base.latency.sigma / 1e6) +
    ") ms; t_avg lower: " + (faster ? "yes" : "no") + ", sigma lower: " + (steadier ? "yes" : "no")};
}

// ---- 8 ----------------------------------------------------------------------

Outcome topology_fixture()
{
  std::ifstream cfg_file(std::string(STREAMDDS_FIXTURES_DIR) + "/configs/six_node_two_topic.cfg");
  std::stringstream cfg;
  cfg << cfg_file.rdbuf();
  auto graph = st::compile_text(cfg.str());
  const auto * a = graph.find_topic("a");
  const auto * b = graph.find_topic("b");
  if (!a || !b || graph.topics.size() != 2) {
    return {false, "expected exactly topics a and b"};
  }
  std::size_t fifos = 0;
  for (const auto & s : a->subscribers) {
    fifos += s.fifo_depth ? 1 : 0;
  }
  const bool a_ok = a->structure == sd::TopicStructure::ArbiterThenBroadcast &&
    a->publishers.size() == 3 && a->subscribers.size() == 3 && fifos == 1;
  const bool b_ok = b->structure == sd::TopicStructure::BroadcastOnly &&
    b->publishers.size() == 1 && b->subscribers.size() == 2;
  std::ifstream golden(std::string(STREAMDDS_FIXTURES_DIR) + "/golden/six_node_two_topic.json");
  const bool golden_ok = nlohmann::json::parse(golden) == nlohmann::json::parse(sd::graph_to_json(graph).dump());
  return {a_ok && b_ok && golden_ok,
    std::string("a: ") + std::string(sd::structure_name(a->structure)) + " " +
    std::to_string(a->publishers.size()) + " pubs/" + std::to_string(a->subscribers.size()) + " subs/" +
    std::to_string(fifos) + " fifo; b: " + std::string(sd::structure_name(b->structure)) + " " +
    std::to_string(b->publishers.size()) + " pub/" + std::to_string(b->subscribers.size()) +
    " subs; golden JSON " + (golden_ok ? "match" : "MISMATCH")};
}

// ---- 9 ----------------------------------------------------------------------

Outcome stats_oracle()
{
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int set = 0; set < 100; ++set) {
    std::vector<double> xs(1 + rng() % 5000);
    std::normal_distribution<double> dist(static_cast<double>(rng() % 1000000), 1.0 + static_cast<double>(rng() % 10000));
    for (auto & x : xs) {
      x = dist(rng);
    }
    // Two-pass oracle in extended precision.
    long double sum = 0;
    for (double x : xs) {
      sum += x;
    }
    const long double mean = sum / static_cast<long double>(xs.size());
    long double sq = 0;
    for (double x : xs) {
      sq += (x - mean) * (x - mean);
    }
    const double sigma = static_cast<double>(std::sqrt(sq / static_cast<long double>(xs.size())));
    auto got = sb::stats(xs);
    worst = std::max(worst, std::fabs(got.mean - static_cast<double>(mean)) / std::fabs(static_cast<double>(mean)));
    if (sigma > 0) {
      worst = std::max(worst, std::fabs(got.sigma - sigma) / sigma);
    }
  }
  std::ostringstream os;
  os << "100 sets, worst relative error " << worst;
  return {worst <= 1e-12, os.str()};
}

}  // namespace

int main()
{
  struct Criterion
  {
    int id;
    const char * name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
    {1, "serde round-trip", serde_round_trip},
    {2, "frame atomicity through the arbiter", arbiter_atomicity},
    {3, "reliable keep-all backpressure", backpressure},
    {4, "broadcast completeness and order", broadcast},
    {5, "transfer speedup shape", transfer_shape},
    {6, "dataflow overlap", overlap},
    {7, "chain latency and jitter direction", chain_direction},
    {8, "topology compiler fixture", topology_fixture},
    {9, "stats oracle", stats_oracle},
  };
  int failed = 0;
  std::vector<std::string> summary;
  for (const auto & c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception & e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::string line = std::string(o.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) +
      " (" + c.name + "): " + o.detail;
    std::cout << line << std::endl;
    summary.push_back(line);
    failed += o.pass ? 0 : 1;
  }
  std::cout << "\nSummary:\n";
  for (const auto & l : summary) {
    std::cout << l << '\n';
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() <<
    " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
