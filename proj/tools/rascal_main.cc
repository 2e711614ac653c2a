// Copyright 2026 The Authors.
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

// Command-line front end: generate, run, sweep and eval.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rascal/common.h"
#include "rascal/experiment.h"

namespace {

// Every config key is exposed as a string flag and forwarded through
// SetConfigValue, so flags and config files share one parser.
constexpr const char* kConfigKeys[] = {
    "graph",         "pool",        "lambda",   "p",
    "alpha",         "budget",      "cap",      "pool_size",
    "holdout_size",  "online_samples", "algorithm", "batch_size",
    "steps",         "fpl_rate",    "ogd_rate", "u",
    "offline_steps", "matroid_k",   "partition", "energy",
    "r",             "q",           "multilinear_samples", "seed",
    "jobs",          "timing",      "out",
};

struct CommandOptions {
  std::string config_path;
  std::map<std::string, std::optional<std::string>> values;
};

void AddConfigFlags(CLI::App* command, CommandOptions& options) {
  command->add_option("--config", options.config_path,
                      "key = value config file; flags override it");
  for (const char* key : kConfigKeys) {
    std::string flag = std::string("--") + key;
    for (char& c : flag) {
      if (c == '_') c = '-';
    }
    command->add_option(flag, options.values[key]);
  }
}

rascal::ExperimentConfig ResolveConfig(const CommandOptions& options) {
  rascal::ExperimentConfig config;
  if (!options.config_path.empty()) {
    rascal::LoadConfigFile(options.config_path, config);
  }
  for (const auto& [key, value] : options.values) {
    if (value) rascal::SetConfigValue(config, key, *value);
  }
  config.Validate();
  return config;
}

std::vector<double> ParseValues(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw rascal::IoError("bad sweep value '" + item + "'");
    }
  }
  return values;
}

std::vector<std::string> SplitComma(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-averse stochastic and online continuous submodular "
               "maximization"};
  app.require_subcommand(1);

  CommandOptions generate_options;
  CLI::App* generate =
      app.add_subcommand("generate", "Simulate a scenario pool to CSV");
  AddConfigFlags(generate, generate_options);

  CommandOptions run_options;
  CLI::App* run = app.add_subcommand("run", "Run one algorithm");
  AddConfigFlags(run, run_options);

  CommandOptions sweep_options;
  std::string axis = "T";
  std::string values_text;
  std::string algorithms_text =
      "stochastic-rascal,online-rascal,rascal,fw";
  int seeds = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep T or the budget");
  AddConfigFlags(sweep, sweep_options);
  sweep->add_option("--axis", axis, "T or budget");
  sweep->add_option("--values", values_text, "comma-separated axis values")
      ->required();
  sweep->add_option("--algorithms", algorithms_text, "comma-separated");
  sweep->add_option("--seeds", seeds, "independent repetitions");

  CommandOptions eval_options;
  std::string solution;
  CLI::App* eval =
      app.add_subcommand("eval", "Evaluate a solution on the scenario pool");
  AddConfigFlags(eval, eval_options);
  eval->add_option("--solution", solution,
                   "solution.csv or portfolio.csv from `run`")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) {
      rascal::CmdGenerate(ResolveConfig(generate_options), std::cout);
    } else if (run->parsed()) {
      rascal::CmdRun(ResolveConfig(run_options), std::cout);
    } else if (sweep->parsed()) {
      const rascal::ExperimentConfig config = ResolveConfig(sweep_options);
      const auto rows =
          rascal::CmdSweep(config, axis, ParseValues(values_text),
                           SplitComma(algorithms_text), seeds, std::cout);
      const std::filesystem::path path =
          std::filesystem::path(config.out) / "sweep.csv";
      std::error_code ec;
      std::filesystem::create_directories(config.out, ec);
      std::ofstream out(path);
      if (!out) throw rascal::IoError("cannot write '" + path.string() + "'");
      rascal::WriteSweepCsv(rows, out);
    } else if (eval->parsed()) {
      rascal::CmdEval(ResolveConfig(eval_options), solution, std::cout);
    }
  } catch (const rascal::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rascal::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
