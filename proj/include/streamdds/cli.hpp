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


#ifndef STREAMDDS__CLI_HPP_
#define STREAMDDS__CLI_HPP_

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "streamdds/bench/harness.hpp"
#include "streamdds/bench/report.hpp"
#include "streamdds/errors.hpp"
#include "streamdds/msgdef.hpp"
#include "streamdds/plan.hpp"
#include "streamdds/topology.hpp"

namespace streamdds::cli
{

enum ExitCode : int
{
  kOk = 0,
  kValidationFailure = 1,
  kUsageError = 2,
};

inline constexpr const char * kDefaultSizes = "3k,12k,50k,196k,786k,3146k";
inline constexpr std::size_t kDefaultReps = 1000;

namespace detail
{

inline std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to `path` if given, otherwise to `out`.
inline void emit(const std::string & text, const std::string & path, std::ostream & out)
{
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot write '" + path + "'");
  }
  f << text;
}

inline std::string size_list_check(const std::string & s)
{
  try {
    bench::parse_size_list(s);
    return {};
  } catch (const std::exception & e) {
    return e.what();
  }
}

inline std::vector<std::size_t> count_list(const std::string & s)
{
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    std::size_t pos = 0;
    unsigned long v = 0;  // NOLINT(runtime/int)
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception &) {
      pos = 0;
    }
    if (tok.empty() || pos != tok.size() || v == 0 || tok.front() == '-') {
      throw std::invalid_argument("invalid count '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw std::invalid_argument("empty count list");
  }
  return out;
}

inline std::string count_list_check(const std::string & s)
{
  try {
    count_list(s);
    return {};
  } catch (const std::exception & e) {
    return e.what();
  }
}

inline std::vector<bench::Subject> subjects_of(const std::string & s)
{
  if (s == "both") {
    return bench::kBothSubjects;
  }
  return {bench::parse_subject(s)};
}

inline std::vector<bench::ChainMode> modes_of(const std::string & s)
{
  if (s == "both") {
    return {bench::ChainMode::Sequential, bench::ChainMode::Dataflow};
  }
  return {bench::parse_mode(s)};
}

inline TopologyGraph compile_config(const std::string & config, const std::string & msg_dir)
{
  auto spec = parse_config(read_file(config), config);
  return build_topology(spec, resolve(load_msg_dir(msg_dir)));
}

/// Prints diagnostics to `err`; true if any is an error.
inline bool report_diagnostics(const TopologyGraph & graph, std::ostream & err)
{
  bool fatal = false;
  for (const auto & d : validate(graph)) {
    err << to_string(d) << '\n';
    fatal = fatal || d.severity == Diagnostic::Severity::Error;
  }
  return fatal;
}

}  // namespace detail

/// Runs one command line. Output goes to `out` (or --out), diagnostics and
/// errors to `err`.
inline int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"streamdds: topology compiler, message planner and benchmarks"};
  app.require_subcommand(1);
  std::uint32_t seed = 1;
  app.add_option("--seed", seed, "Seed for generated payloads")->capture_default_str();

  std::string config;
  std::string msg_dir;
  std::string out_path;
  std::string format = "markdown";
  std::string type_name;

  auto * compile = app.add_subcommand("compile", "Compile a topology config to graph JSON");
  compile->add_option("config", config, "Topology config file")->required()->check(CLI::ExistingFile);
  compile->add_option("--msg-dir", msg_dir, "Root of <pkg>/msg/<Name>.msg files")
  ->required()->check(CLI::ExistingDirectory);
  compile->add_option("--out", out_path, "Write the JSON here instead of stdout");

  auto * explain_cmd = app.add_subcommand("explain", "Describe the per-topic networks of a config");
  explain_cmd->add_option("config", config, "Topology config file")->required()->check(CLI::ExistingFile);
  explain_cmd->add_option("--msg-dir", msg_dir, "Root of <pkg>/msg/<Name>.msg files")
  ->required()->check(CLI::ExistingDirectory);

  auto * plan_cmd = app.add_subcommand("plan", "Dump the serialization plan of a message type");
  plan_cmd->add_option("type", type_name, "Message type, pkg/Name")->required();
  plan_cmd->add_option("--msg-dir", msg_dir, "Root of <pkg>/msg/<Name>.msg files")
  ->required()->check(CLI::ExistingDirectory);
  plan_cmd->add_option("--out", out_path, "Write the JSON here instead of stdout");

  std::string sizes = kDefaultSizes;
  std::string subs = "1,2,4";
  std::string size = "196k";
  std::size_t reps = kDefaultReps;
  std::string subject = "both";
  const auto formats = CLI::IsMember({"csv", "json", "markdown"});
  const auto subjects = CLI::IsMember({"baseline", "streaming", "both"});

  auto * bench_cmd = app.add_subcommand("bench", "Run a transfer benchmark");
  bench_cmd->require_subcommand(1);
  auto add_common = [&](CLI::App * cmd) {
      cmd->add_option("--reps", reps, "Messages per configuration")
      ->capture_default_str()->check(CLI::PositiveNumber);
      cmd->add_option("--subject", subject, "baseline, streaming or both")
      ->capture_default_str()->check(subjects);
      cmd->add_option("--format", format, "csv, json or markdown")->capture_default_str()->check(formats);
      cmd->add_option("--out", out_path, "Write the report here instead of stdout");
    };
  auto * transfer = bench_cmd->add_subcommand("transfer", "Transfer time against message size");
  transfer->add_option("--sizes", sizes, "Comma-separated sizes; k = 1024, m = 1024 * 1024")
  ->capture_default_str()->check(CLI::Validator(detail::size_list_check, "SIZES"));
  add_common(transfer);
  auto * fanout = bench_cmd->add_subcommand("fanout", "Transfer time against subscriber count");
  fanout->add_option("--subs", subs, "Comma-separated subscriber counts")
  ->capture_default_str()->check(CLI::Validator(detail::count_list_check, "COUNTS"));
  fanout->add_option("--size", size, "Message size")
  ->capture_default_str()->check(CLI::Validator(detail::size_list_check, "SIZE"));
  add_common(fanout);

  std::string mode = "both";
  bench::ChainParams params;
  auto * chain = app.add_subcommand("chain-demo", "Five-node image chain, baseline against streaming");
  chain->add_option("--mode", mode, "sequential, dataflow or both")
  ->capture_default_str()->check(CLI::IsMember({"sequential", "dataflow", "both"}));
  chain->add_option("--scale", params.scale, "Fraction of the 1000x600 image processed")
  ->capture_default_str()->check(CLI::Range(1e-6, 64.0));
  chain->add_option("--rounds", params.rounds, "Arithmetic rounds per pixel and stage")
  ->capture_default_str()->check(CLI::NonNegativeNumber);
  add_common(chain);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  bench::BenchOptions opt;
  opt.seed = seed;
  try {
    if (compile->parsed()) {
      auto graph = detail::compile_config(config, msg_dir);
      const bool fatal = detail::report_diagnostics(graph, err);
      detail::emit(graph_to_json(graph).dump(2) + "\n", out_path, out);
      return fatal ? kValidationFailure : kOk;
    }
    if (explain_cmd->parsed()) {
      auto graph = detail::compile_config(config, msg_dir);
      const bool fatal = detail::report_diagnostics(graph, err);
      out << explain(graph);
      return fatal ? kValidationFailure : kOk;
    }
    if (plan_cmd->parsed()) {
      auto registry = resolve(load_msg_dir(msg_dir));
      detail::emit(plan_to_json(flatten(registry, type_name)).dump(2) + "\n", out_path, out);
      return kOk;
    }
    bench::BenchReport report;
    if (transfer->parsed()) {
      report = bench::bench_transfer(
        bench::parse_size_list(sizes), reps, detail::subjects_of(subject), opt);
    } else if (fanout->parsed()) {
      report = bench::bench_fanout(
        detail::count_list(subs), bench::parse_size(size), reps, detail::subjects_of(subject), opt);
    } else {
      const auto modes = detail::modes_of(mode);
      const auto subj = detail::subjects_of(subject);
      if (subj.size() == 1 && subj[0] == bench::Subject::Baseline &&
        modes.size() == 1 && modes[0] == bench::ChainMode::Dataflow)
      {
        err << "error: the baseline subject runs only in sequential mode\n";
        return kUsageError;
      }
      report = bench::chain_report(modes, subj, reps, params, opt);
    }
    detail::emit(bench::emit_report(report, format), out_path, out);
    return kOk;
  } catch (const std::invalid_argument & e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}

inline int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  std::vector<const char *> argv{"streamdds"};
  for (const auto & a : args) {
    argv.push_back(a.c_str());
  }
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace streamdds::cli

#endif  // STREAMDDS__CLI_HPP_
