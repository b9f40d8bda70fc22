// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/commands.hpp"
#include "egoskill/session_model.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>
#include <map>

namespace {

struct Flags {
  std::vector<std::string> inputs;
  std::string out = ".";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::vector<std::string> overrides;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, const std::string& inputs_help,
                      Flags& f, bool inputs_required) {
  auto* cmd = app.add_subcommand(name, help);
  auto* in = cmd->add_option("inputs", f.inputs, inputs_help);
  if (inputs_required) in->required();
  cmd->add_option("--out,-o", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--jobs,-j", f.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed recorded in the config echo (synth: cohort seed)");
  cmd->add_option("--config,-c", f.config, "Run config JSON")->check(CLI::ExistingFile);
  cmd->add_option("--set", f.overrides, "Config override section.key=value (repeatable)");
  return cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"egoskill: eye-hand-hotspot behavior features from egocentric operation recordings"};
  app.require_subcommand(1);
  Flags f;
  using Command = std::function<int(const egoskill::CommandOptions&, std::ostream&)>;
  std::map<CLI::App*, Command> commands{
      {add_command(app, "validate", "Check session files", "Session files or directories", f, true),
       egoskill::cmd_validate},
      {add_command(app, "analyze", "Segment sessions and extract per-unit features", "Session files or directories", f,
                   true),
       egoskill::cmd_analyze},
      {add_command(app, "compare", "Earlier vs later relative feature deltas", "pairs.csv and the analyze output dir",
                   f, true),
       egoskill::cmd_compare},
      {add_command(app, "correlate", "Per-step feature correlation with rated difficulty",
                   "Analyze output dir and ratings.csv", f, true),
       egoskill::cmd_correlate},
      {add_command(app, "synth", "Generate a synthetic cohort", "Optional synth spec JSON", f, false),
       egoskill::cmd_synth},
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : egoskill::kExitInputError;
  }

  egoskill::CommandOptions opts;
  for (const auto& p : f.inputs) opts.inputs.emplace_back(p);
  opts.out = f.out;
  opts.jobs = f.jobs;
  opts.seed = f.seed;
  if (!f.config.empty()) opts.config = f.config;
  opts.overrides = f.overrides;

  for (const auto& [cmd, run] : commands) {
    if (!cmd->parsed()) continue;
    try {
      return run(opts, std::cerr);
    } catch (const egoskill::InputError& e) {
      std::cerr << "error: " << e.what();
      if (e.line()) std::cerr << " (line " << e.line() << ")";
      std::cerr << '\n';
      return egoskill::kExitInputError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return egoskill::kExitInputError;
    }
  }
  return egoskill::kExitInputError;
}
